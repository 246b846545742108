#pragma once

#include <functional>
#include <string>

#include "fuchsian/klein.hpp"
#include "fuchsian/parallel.hpp"

namespace fuchsian {

struct TransportOptions {
  double rtol = 1e-11;
  double atol = 1e-14;
  double min_step = 1e-12;  // in units of the segment parameter
  int max_steps = 200000;
  double clearance_factor = 0.1;  // x min pairwise singularity distance
  int circle_vertices = 16;
};

/// Coefficients (p, q) of y'' + p y' + q y = 0.
using CoefficientFn = std::function<std::pair<Complex, Complex>(Complex)>;

template <class Eq>
CoefficientFn coefficient_fn(const Eq& eq) {
  return [eq](Complex z) { return eq.coefficients(z); };
}

namespace detail {

inline Matrix2 companion_rhs(const CoefficientFn& coef, Complex z, Complex dz, const Matrix2& y) {
  const auto [p, q] = coef(z);
  Matrix2 a;
  a << 0.0, 1.0, -q, -p;
  return dz * (a * y);
}

/// Dormand-Prince 5(4) with the standard embedded error estimate, straight segment z0 -> z1.
inline Matrix2 integrate_segment(const CoefficientFn& coef, Complex z0, Complex z1, Matrix2 y, const TransportOptions& opt) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  const Complex dz = z1 - z0;
  if (dz == Complex(0.0)) return y;
  const auto f = [&](double s, const Matrix2& v) { return companion_rhs(coef, z0 + s * dz, dz, v); };
  double s = 0.0, h = 0.05;
  Matrix2 k1 = f(0.0, y);
  int steps = 0;
  while (s < 1.0) {
    if (++steps > opt.max_steps)
      throw numerical_error("step_limit", "integrator step limit on segment near singularity");
    h = std::min(h, 1.0 - s);
    const Matrix2 k2 = f(s + c2 * h, y + h * a21 * k1);
    const Matrix2 k3 = f(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Matrix2 k4 = f(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Matrix2 k5 = f(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Matrix2 k6 = f(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Matrix2 ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Matrix2 k7 = f(s + h, ynew);
    const Matrix2 err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double norm = 0.0;
    // columns are scaled separately so a small solution is not swamped by a large one
    for (int c = 0; c < 2; ++c) {
      const double scale = std::max(y.col(c).cwiseAbs().maxCoeff(), ynew.col(c).cwiseAbs().maxCoeff());
      for (int r = 0; r < 2; ++r) norm = std::max(norm, std::abs(err(r, c)) / (opt.atol + opt.rtol * scale));
    }
    if (!std::isfinite(norm)) norm = 1e10;
    if (norm <= 1.0) {
      s += h;
      y = ynew;
      k1 = k7;
    }
    const double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
    h *= factor;
    if (h < opt.min_step && s < 1.0)
      throw numerical_error("step_underflow", "step size underflow on segment from (" + std::to_string(z0.real()) + "," +
                                                  std::to_string(z0.imag()) + ") to (" + std::to_string(z1.real()) + "," +
                                                  std::to_string(z1.imag()) + ")");
  }
  return y;
}

inline double segment_distance(Complex a, Complex b, Complex p) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(a + t * d - p);
}

}  // namespace detail

/// Fundamental-matrix transport along a polyline: columns hold (w, w') of two solutions;
/// the result maps initial data at path.front() to data at path.back().
inline Matrix2 transport(const CoefficientFn& coef, const ComplexVector& path, const ComplexVector& singular,
                         const TransportOptions& opt = {}, Matrix2 frame = Matrix2::Identity()) {
  if (path.size() < 2) return frame;
  const double clearance = opt.clearance_factor * (singular.size() > 1 ? min_pairwise_distance(singular) : 1.0);
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    for (const auto& s : singular)
      if (detail::segment_distance(path[i], path[i + 1], s) < clearance)
        throw validation_error("clearance_violation", "path segment " + std::to_string(i) + " passes within clearance of a singular point");
  for (std::size_t i = 0; i + 1 < path.size(); ++i) frame = detail::integrate_segment(coef, path[i], path[i + 1], frame, opt);
  return frame;
}

struct Loop {
  std::size_t target = 0;  // index into the singular point list
  Complex center;
  double radius = 0.0;
  ComplexVector path;  // closed polyline starting and ending at the base point
};

/// Radial segment to the circle around the target, once counterclockwise around it, back.
inline Loop make_loop(Complex base, const ComplexVector& singular, std::size_t j, const TransportOptions& opt = {}) {
  const Complex z = singular[j];
  double nearest = INFINITY;
  for (std::size_t i = 0; i < singular.size(); ++i)
    if (i != j) nearest = std::min(nearest, std::abs(singular[i] - z));
  if (!std::isfinite(nearest)) nearest = 2.0 * std::abs(base - z);
  Loop loop;
  loop.target = j;
  loop.center = z;
  loop.radius = std::min(0.4 * nearest, 0.5 * std::abs(base - z));
  const Complex u = (base - z) / std::abs(base - z);
  loop.path.push_back(base);
  const int nv = opt.circle_vertices;
  for (int v = 0; v <= nv; ++v) loop.path.push_back(z + loop.radius * u * std::polar(1.0, 2.0 * pi * v / nv));
  loop.path.push_back(base);
  return loop;
}

/// Loops ordered by arg(z_j - base) in (-pi, pi]; composing them in this order encircles
/// every point once, counterclockwise.
inline std::vector<Loop> make_loops(Complex base, const ComplexVector& singular, const TransportOptions& opt = {}) {
  std::vector<std::size_t> order(singular.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::arg(singular[a] - base) < std::arg(singular[b] - base); });
  std::vector<Loop> loops;
  for (auto j : order) loops.push_back(make_loop(base, singular, j, opt));
  return loops;
}

/// Smallest distance from a singular point to a radial segment of another one's loop,
/// the quantity a base point should maximize.
inline double loop_clearance(Complex base, const ComplexVector& singular) {
  double worst = INFINITY;
  for (std::size_t j = 0; j < singular.size(); ++j) {
    worst = std::min(worst, std::abs(base - singular[j]));
    for (std::size_t i = 0; i < singular.size(); ++i)
      if (i != j) worst = std::min(worst, detail::segment_distance(base, singular[j], singular[i]));
  }
  return worst;
}

/// Grid search for a base point in the annulus r_lo <= |b - centre| <= r_hi maximizing loop clearance.
inline Complex choose_base_point(const ComplexVector& singular, Complex centre, double r_lo, double r_hi) {
  Complex best = centre + r_lo;
  double best_score = -1.0;
  constexpr int radii = 9, angles = 72;
  for (int a = 0; a < radii; ++a)
    for (int t = 0; t < angles; ++t) {
      const double r = r_lo + (r_hi - r_lo) * a / (radii - 1);
      const Complex b = centre + std::polar(r, 2.0 * pi * (t + 0.37) / angles);
      const double score = loop_clearance(b, singular);
      if (score > best_score) {
        best_score = score;
        best = b;
      }
    }
  return best;
}

inline Complex default_base_point(const ComplexVector& singular) {
  Complex centre = 0.0;
  for (auto z : singular) centre += z;
  centre /= static_cast<double>(std::max<std::size_t>(1, singular.size()));
  double spread = 0.0;
  for (auto z : singular) spread = std::max(spread, std::abs(z - centre));
  return choose_base_point(singular, centre, 0.2 * std::max(spread, 0.5), 1.3 * std::max(spread, 0.5));
}

struct MonodromyRep {
  Complex base_point;
  ComplexVector singular;
  std::vector<Loop> loops;
  std::vector<Matrix2> matrices;  // raw transport T_j, in loop order
  bool det_normalized = false;

  /// T_n ... T_1: the effect of traversing the loops in order.
  Matrix2 loop_product() const {
    Matrix2 acc = Matrix2::Identity();
    for (const auto& m : matrices) acc = m * acc;
    return acc;
  }

  /// Matrix of the loop around singular point `j`.
  const Matrix2& around(std::size_t j) const {
    for (std::size_t i = 0; i < loops.size(); ++i)
      if (loops[i].target == j) return matrices[i];
    throw validation_error("no_loop", "no loop around the requested point");
  }
};

inline MonodromyRep monodromy_rep(const CoefficientFn& coef, const ComplexVector& singular, Complex base,
                                  const TransportOptions& opt = {}, unsigned workers = 1) {
  for (auto z : singular)
    if (std::abs(z - base) < 1e-9) throw validation_error("singular_base", "base point is a singular point");
  MonodromyRep rep;
  rep.base_point = base;
  rep.singular = singular;
  rep.loops = make_loops(base, singular, opt);
  rep.matrices.resize(rep.loops.size());
  parallel_for(rep.loops.size(), workers,
               [&](std::size_t i) { rep.matrices[i] = transport(coef, rep.loops[i].path, singular, opt); });
  return rep;
}

template <class Eq>
MonodromyRep monodromy_rep(const Eq& eq, Complex base, const TransportOptions& opt = {}, unsigned workers = 1) {
  return monodromy_rep(coefficient_fn(eq), eq.singular_points(), base, opt, workers);
}

/// Scaled to determinant one (sign of the square root from the principal branch).
inline Matrix2 det_normalize(const Matrix2& m) { return m / std::sqrt(m.determinant()); }

inline MonodromyRep det_normalized(MonodromyRep rep) {
  for (auto& m : rep.matrices) m = det_normalize(m);
  rep.det_normalized = true;
  return rep;
}

/// M = lambda N for some scalar lambda, measured as ||M - lambda N|| / ||M|| with the
/// least-squares lambda.
inline double projective_distance(const Matrix2& m, const Matrix2& n) {
  const Complex num = (n.conjugate().cwiseProduct(m)).sum();
  const double den = n.squaredNorm();
  if (den == 0.0 || m.norm() == 0.0) return INFINITY;
  const Complex lambda = num / den;
  return (m - lambda * n).norm() / m.norm();
}

inline bool projective_equal(const Matrix2& m, const Matrix2& n, double tol = 1e-6) {
  return projective_distance(m, n) < tol;
}

struct TraceTest {
  bool unitarizable = false;
  bool in_range = true;
  bool boundary = false;
  double value = 0.0;  // t1^2 + t2^2 + t3^2 - t1 t2 t3
};

/// t1^2 + t2^2 + t3^2 - t1 t2 t3 < 4 with every t_j in (-2, 2).
inline TraceTest unitarizability_traces(double t1, double t2, double t3, double boundary_tol = 1e-12) {
  TraceTest out;
  out.value = t1 * t1 + t2 * t2 + t3 * t3 - t1 * t2 * t3;
  for (double t : {t1, t2, t3})
    if (!(std::abs(t) < 2.0)) out.in_range = false;
  out.boundary = std::abs(out.value - 4.0) <= boundary_tol;
  out.unitarizable = out.in_range && !out.boundary && out.value < 4.0;
  return out;
}

/// Max over samples of |{f, z} - 2 V(z)| for f = w1/w2, the ratio of two transported
/// solutions; derivatives of f come from the quotient rule with w'' = -V w and
/// w''' = -V' w - V w'.
inline double schwarzian_residual(const EquationSL& eq, const ComplexVector& samples, Complex base,
                                  const Matrix2& frame = Matrix2::Identity(), const TransportOptions& opt = {}) {
  const auto coef = coefficient_fn(eq);
  double worst = 0.0;
  for (const auto& z : samples) {
    const Matrix2 y = transport(coef, {base, z}, eq.points, opt, frame);
    const Complex w1 = y(0, 0), w2 = y(0, 1), d1 = y(1, 0), d2 = y(1, 1);
    if (std::abs(w2) < 1e-8 * std::max(1.0, std::abs(w1)))
      throw numerical_error("denominator_zero", "second solution vanishes near a sample point");
    const Complex v = eq.potential(z), dv = eq.potential_derivative(z);
    const Complex dd1 = -v * w1, dd2 = -v * w2;
    const Complex ddd1 = -dv * w1 - v * d1, ddd2 = -dv * w2 - v * d2;
    // f = w1 / w2
    const Complex f1 = (d1 * w2 - w1 * d2) / (w2 * w2);
    const Complex num1 = d1 * w2 - w1 * d2;              // numerator of f'
    const Complex dnum1 = dd1 * w2 - w1 * dd2;           // its derivative
    const Complex ddnum1 = ddd1 * w2 + dd1 * d2 - d1 * dd2 - w1 * ddd2;
    const Complex f2 = dnum1 / (w2 * w2) - 2.0 * num1 * d2 / (w2 * w2 * w2);
    const Complex f3 = ddnum1 / (w2 * w2) - 4.0 * dnum1 * d2 / (w2 * w2 * w2) - 2.0 * num1 * dd2 / (w2 * w2 * w2) +
                       6.0 * num1 * d2 * d2 / (w2 * w2 * w2 * w2);
    const Complex s = f3 / f1 - 1.5 * (f2 / f1) * (f2 / f1);
    worst = std::max(worst, std::abs(s - 2.0 * v) / std::max(1.0, std::abs(2.0 * v)));
  }
  return worst;
}

/// Monodromy of the main equation and of its hypergeometric target in the series bases
/// (f1, f2) and (F1, F2) at a common base point inside the unit disk, over the same loops.
struct HypergeometricComparison {
  Complex base_point;
  std::vector<Loop> loops;  // around 0 and 1
  std::vector<Matrix2> main, target;  // in the series bases, loop order
  std::vector<double> distances;      // projective distance per loop
  std::vector<double> apparent_defects;  // ||T - I|| around each a_i (raw frame)
  double max_distance = 0.0;
};

inline HypergeometricComparison compare_with_hypergeometric(const KleinData& kd, std::size_t series_terms = 240,
                                                            const TransportOptions& opt = {}, unsigned workers = 1) {
  const EquationA& eq = kd.source;
  const ComplexVector sing = eq.singular_points();
  // inside the unit disk, where the series converge; 0.35..0.6 keeps them fast
  Complex base = 0.0;
  double best = -1.0;
  for (int a = 0; a < 6; ++a)
    for (int t = 0; t < 48; ++t) {
      const Complex b = std::polar(0.35 + 0.05 * a, 2.0 * pi * (t + 0.37) / 48);
      const double score = loop_clearance(b, sing);
      if (score > best) {
        best = score;
        base = b;
      }
    }
  HypergeometricComparison out;
  out.base_point = base;
  const auto all = make_loops(base, sing, opt);
  for (const auto& l : all)
    if (l.target < 2) out.loops.push_back(l);

  const auto [f1, f2] = klein_solutions(kd, series_terms);
  const auto F1 = hg_series(kd.target, 0, series_terms), F2 = hg_series(kd.target, 1, series_terms);
  const auto data = [&](const PowerSeriesSol& a, const PowerSeriesSol& b) {
    const auto [va, da] = a.evaluate(base);
    const auto [vb, db] = b.evaluate(base);
    Matrix2 m;
    m << va, vb, da, db;
    return m;
  };
  const Matrix2 Df = data(f1, f2), DF = data(F1, F2);
  const auto coef_main = coefficient_fn(eq);
  const auto coef_hg = coefficient_fn(kd.target);

  std::vector<Matrix2> tm(all.size()), th(out.loops.size());
  parallel_for(all.size() + out.loops.size(), workers, [&](std::size_t i) {
    if (i < all.size()) tm[i] = transport(coef_main, all[i].path, sing, opt);
    // the clearance check uses the main equation's points, a superset of {0, 1}
    else th[i - all.size()] = transport(coef_hg, out.loops[i - all.size()].path, sing, opt);
  });
  std::size_t h = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].target < 2) {
      const Matrix2 mm = Df.inverse() * tm[i] * Df;
      const Matrix2 mh = DF.inverse() * th[h] * DF;
      out.main.push_back(mm);
      out.target.push_back(mh);
      out.distances.push_back(projective_distance(mm, mh));
      out.max_distance = std::max(out.max_distance, out.distances.back());
      ++h;
    } else {
      out.apparent_defects.push_back((tm[i] - Matrix2::Identity()).norm());
    }
  }
  return out;
}

}  // namespace fuchsian
