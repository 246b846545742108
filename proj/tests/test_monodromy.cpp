#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fuchsian/accessory_solver.hpp"
#include "fuchsian/monodromy.hpp"
#include "oracles.hpp"

using namespace fuchsian;

namespace {

// SL equation with infinity a regular point: free residues random, the rest from the constraints
EquationSL regular_sl(std::mt19937_64& rng, std::size_t n) {
  EquationSL sl = testing::random_equation_sl(rng, n);
  for (auto& e : sl.exps) e = Complex(testing::uniform(rng, 0.15, 0.85), testing::uniform(rng, -0.1, 0.1));
  ComplexVector free;
  for (std::size_t j = 0; j + 3 < n; ++j) free.push_back(0.3 * testing::random_complex(rng));
  sl.residues = residue_constraints(sl.points, sl.exps, free);
  return sl;
}

Matrix2 reversed_transport(const CoefficientFn& coef, ComplexVector path, const ComplexVector& sing) {
  std::reverse(path.begin(), path.end());
  return transport(coef, path, sing);
}

EquationA skeleton(std::vector<int> mults, ComplexVector pts) {
  return build_equation_a(Complex(0.21, 0.03), Complex(0.37, -0.02), Complex(0.43, 0.01), std::move(pts), std::move(mults));
}

}  // namespace

TEST_CASE("transport basics") {
  SECTION("constant coefficients against cos and sin") {
    const CoefficientFn coef = [](Complex) { return std::pair<Complex, Complex>{0.0, 1.0}; };
    const Complex z0(0.2, -0.1), z1(1.7, 0.9);
    const Matrix2 t = transport(coef, {z0, Complex(0.9, 1.1), z1}, {});
    const Complex h = z1 - z0;
    CHECK(std::abs(t(0, 0) - std::cos(h)) < 1e-10);
    CHECK(std::abs(t(0, 1) - std::sin(h)) < 1e-10);
    CHECK(std::abs(t(1, 0) + std::sin(h)) < 1e-10);
    CHECK(std::abs(t(1, 1) - std::cos(h)) < 1e-10);
  }
  std::mt19937_64 rng(131);
  const auto sl = regular_sl(rng, 4);
  const auto coef = coefficient_fn(sl);
  const Complex base = default_base_point(sl.points);
  CHECK(transport(coef, {base}, sl.points).isApprox(Matrix2::Identity()));
  SECTION("path followed by its reversal") {
    const auto loop = make_loop(base, sl.points, 2);
    ComplexVector path(loop.path.begin(), loop.path.begin() + 6);
    const Matrix2 there = transport(coef, path, sl.points);
    const Matrix2 back = reversed_transport(coef, path, sl.points);
    CHECK((back * there - Matrix2::Identity()).norm() < 1e-9);
  }
  SECTION("loop around a regular point") {
    ComplexVector pts{0.0, 1.0, 2.0, 3.0};
    for (auto& p : pts) p = base + 0.01 * p;  // tiny square next to the base point
    pts.push_back(base);
    CHECK((transport(coef, pts, sl.points) - Matrix2::Identity()).norm() < 1e-9);
  }
  SECTION("clearance is enforced") {
    CHECK_THROWS_AS(transport(coef, {base, sl.points[0] + 1e-4}, sl.points), Error);
  }
}

TEST_CASE("projective equality and trace test") {
  Matrix2 m;
  m << Complex(1.0, 0.3), 2.0, Complex(0.0, -1.0), 4.0;
  CHECK(projective_equal(m, -m));
  CHECK(projective_equal(m, Complex(0.2, 3.0) * m));
  Matrix2 d1 = Matrix2::Zero(), d2 = Matrix2::Zero();
  d1.diagonal() << 1.0, 2.0;
  d2.diagonal() << 2.0, 4.0;
  CHECK(projective_equal(d1, d2));
  CHECK_FALSE(projective_equal(Matrix2::Identity(), d1));

  CHECK(unitarizability_traces(0, 0, 0).unitarizable);
  CHECK(unitarizability_traces(1, 1, 1).unitarizable);
  CHECK(unitarizability_traces(1, 1, 1).value == 2.0);
  const auto out = unitarizability_traces(2.5, 0, 0);
  CHECK_FALSE(out.unitarizable);
  CHECK_FALSE(out.in_range);
  // on the surface: t3 solves t3^2 - t1 t2 t3 + t1^2 + t2^2 - 4 = 0
  const double t1 = 0.7, t2 = -1.1;
  const double disc = t1 * t1 * t2 * t2 - 4.0 * (t1 * t1 + t2 * t2 - 4.0);
  const double t3 = 0.5 * (t1 * t2 + std::sqrt(disc));
  const auto b = unitarizability_traces(t1, t2, t3);
  CHECK(b.boundary);
  CHECK_FALSE(b.unitarizable);
}

TEST_CASE("local monodromy of the hypergeometric target") {
  const HGEquation hg{Complex(0.23, 0.05), Complex(-0.31, 0.02), Complex(0.57, -0.03), Complex(0.2, 0.1)};
  const Complex base(0.45, 0.3);
  const auto rep = monodromy_rep(hg, base);
  REQUIRE(rep.matrices.size() == 2);
  Eigen::ComplexEigenSolver<Matrix2> es(rep.around(0));
  ComplexVector ev{es.eigenvalues()(0), es.eigenvalues()(1)};
  const Complex e = std::exp(2.0 * pi * I * hg.a0);
  const double direct = std::abs(ev[0] - 1.0) + std::abs(ev[1] - e);
  const double swapped = std::abs(ev[1] - 1.0) + std::abs(ev[0] - e);
  CHECK(std::min(direct, swapped) < 1e-7);
}

TEST_CASE("SL monodromy: determinant, local traces, product over all loops") {
  std::mt19937_64 rng(137);
  for (std::size_t n : {3u, 4u, 5u}) {
    const auto sl = regular_sl(rng, n);
    const Complex base = default_base_point(sl.points);
    const auto rep = monodromy_rep(sl, base, {}, 3);
    REQUIRE(rep.matrices.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      const Matrix2& t = rep.matrices[i];
      // entries can be large; the determinant loses digits to cancellation
      CHECK(std::abs(t.determinant() - 1.0) < 1e-12 * std::max(1.0, t.squaredNorm()));
      const Complex alpha = sl.exps[rep.loops[i].target];
      Eigen::ComplexEigenSolver<Matrix2> es(t);
      const Complex u = -std::exp(I * pi * alpha), v = -std::exp(-I * pi * alpha);
      const Complex l0 = es.eigenvalues()(0), l1 = es.eigenvalues()(1);
      const double direct = std::min(std::abs(l0 - u) + std::abs(l1 - v), std::abs(l0 - v) + std::abs(l1 - u));
      CHECK(direct < 1e-6);
    }
    // forward error of a product grows with the product of the factor norms
    double growth = 1.0;
    for (const auto& m : rep.matrices) growth *= std::max(1.0, m.norm());
    CHECK((rep.loop_product() - Matrix2::Identity()).norm() < 1e-10 * growth);
    if (n >= 3) {
      // the opposite order is not the big loop
      Matrix2 rev = Matrix2::Identity();
      for (const auto& m : rep.matrices) rev = rev * m;
      CHECK((rev - Matrix2::Identity()).norm() > 1e-3);
    }
    // det normalization leaves SL matrices unchanged up to sign
    const auto nrep = det_normalized(rep);
    CHECK(nrep.det_normalized);
    for (std::size_t i = 0; i < n; ++i) CHECK(projective_equal(nrep.matrices[i], rep.matrices[i], 1e-12));
  }
}

TEST_CASE("product relation on apparent SL forms") {
  for (auto [mults, pts] : std::vector<std::pair<std::vector<int>, ComplexVector>>{
           {{1}, {Complex(-0.7, 1.3)}},
           {{2}, {Complex(1.8, -0.6)}},
           {{1, 2}, {Complex(-0.7, 1.3), Complex(1.6, -0.5)}},
       }) {
    const auto sk = skeleton(mults, pts);
    int sigma = 0;
    for (int m : mults) sigma += m;
    for (const auto& eq : solve_equation_a(sk, 4).equations) {
      const auto form = to_sl_form(eq);
      const auto& sl = form.equation;
      const std::size_t n = sl.n();
      const auto rep = monodromy_rep(sl, default_base_point(sl.points), {}, 2);
      // apparent points: -I to the power ell - 1
      for (std::size_t j = 2; j + 1 < n; ++j) {
        const long ell = std::lround(sl.exps[j].real());
        const double s = (ell - 1) % 2 == 0 ? 1.0 : -1.0;
        CHECK((rep.around(j) - s * Matrix2::Identity()).norm() < 1e-7);
      }
      // lifted M = -T at the three non-apparent points, multiplied in loop order
      Matrix2 prod = Matrix2::Identity();
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = rep.loops[i].target;
        if (j == 0 || j == 1 || j == n - 1) prod = (-rep.matrices[i]) * prod;
      }
      const double expected = (sigma - 1) % 2 == 0 ? 1.0 : -1.0;
      CHECK((prod - expected * Matrix2::Identity()).norm() < 1e-6);
    }
  }
}

TEST_CASE("Schwarzian cross-check") {
  std::mt19937_64 rng(139);
  for (int trial = 0; trial < 3; ++trial) {
    const auto sl = regular_sl(rng, 4);
    const Complex base = default_base_point(sl.points);
    ComplexVector samples;
    const double clear = 0.3 * min_pairwise_distance(sl.points);
    while (samples.size() < 10) {
      const Complex z = base + testing::random_complex(rng) * 0.8;
      bool ok = true;
      for (const auto& p : sl.points)
        if (detail::segment_distance(base, z, p) < clear) ok = false;
      if (ok) samples.push_back(z);
    }
    const double r = schwarzian_residual(sl, samples, base);
    CHECK(r < 1e-7);
    Matrix2 mobius;
    mobius << Complex(1.2, 0.3), Complex(-0.4, 0.1), Complex(0.3, -0.2), Complex(0.9, 0.5);
    CHECK(std::abs(schwarzian_residual(sl, samples, base, mobius) - r) < 1e-7);
  }
  SECTION("zero potential") {
    EquationSL flat;
    Matrix2 frame;
    frame << 0.3, 1.0, 1.0, 0.0;  // two affine solutions; f is a Moebius image of z
    CHECK(schwarzian_residual(flat, {Complex(0.5, 0.2), Complex(-1.0, 2.0)}, 0.1, frame) < 1e-12);
  }
}

TEST_CASE("main equation against the hypergeometric target") {
  for (auto [mults, pts] : std::vector<std::pair<std::vector<int>, ComplexVector>>{
           {{1}, {Complex(-0.7, 1.3)}},
           {{2}, {Complex(1.8, -0.6)}},
           {{1, 2}, {Complex(-0.7, 1.3), Complex(1.6, -0.5)}},
           {{2}, {Complex(0.4, 0.3)}},
       }) {
    const auto sk = skeleton(mults, pts);
    for (const auto& eq : solve_equation_a(sk, 5).equations) {
      const auto kd = klein_construct(eq);
      const auto cmp = compare_with_hypergeometric(kd, 240, {}, 2);
      REQUIRE(cmp.distances.size() == 2);
      CHECK(cmp.max_distance < 1e-6);
      for (double d : cmp.apparent_defects) CHECK(d < 1e-7);
      // loops around 0 and 1 do not commute, so matching them is not vacuous
      CHECK(projective_distance(cmp.main[0], cmp.target[1]) > 1e-3);
      CHECK(projective_distance(cmp.main[0] * cmp.main[1], cmp.main[1] * cmp.main[0]) > 1e-3);
    }
  }
}
