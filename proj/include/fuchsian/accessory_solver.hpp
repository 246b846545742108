#pragma once

#include <map>
#include <random>
#include <string>

#include "fuchsian/apparency.hpp"
#include "fuchsian/parallel.hpp"

namespace fuchsian {

/// Value plus gradient; just enough arithmetic to push derivatives through Y_ell.
struct Jet {
  Complex v;
  ComplexVector g;  // empty means zero

  Jet(double c = 0.0) : v(c) {}
  Jet(Complex c) : v(c) {}
  Jet(Complex c, ComplexVector grad) : v(c), g(std::move(grad)) {}

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet out(a.v + b.v);
    const std::size_t m = std::max(a.g.size(), b.g.size());
    if (m == 0) return out;
    out.g.assign(m, 0.0);
    for (std::size_t i = 0; i < a.g.size(); ++i) out.g[i] += a.g[i];
    for (std::size_t i = 0; i < b.g.size(); ++i) out.g[i] += b.g[i];
    return out;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet out(a.v * b.v);
    const std::size_t m = std::max(a.g.size(), b.g.size());
    if (m == 0) return out;
    out.g.assign(m, 0.0);
    for (std::size_t i = 0; i < a.g.size(); ++i) out.g[i] += a.g[i] * b.v;
    for (std::size_t i = 0; i < b.g.size(); ++i) out.g[i] += a.v * b.g[i];
    return out;
  }

  friend Jet operator*(Jet a, double s) {
    a.v *= s;
    for (auto& c : a.g) c *= s;
    return a;
  }
};

/// c0 + lin . beta
struct AffineForm {
  Complex c0;
  ComplexVector lin;

  Complex operator()(const ComplexVector& beta) const {
    Complex acc = c0;
    for (std::size_t i = 0; i < lin.size(); ++i) acc += lin[i] * beta[i];
    return acc;
  }
};

/// The apparency conditions Y_{ell_j}(x_{1,j}, ..., x_{ell_j,j}) = 0 at points 3..n-1 (indices
/// 2..n-2) as polynomial equations in the free residues, the other three residues being
/// fixed by regularity at infinity. Each x_{r,j} is affine in the free residues.
class ApparencySystem {
 public:
  ApparencySystem(ComplexVector points, ComplexVector exps) : points_(std::move(points)), exps_(std::move(exps)) {
    const std::size_t n = points_.size();
    if (n < 3 || exps_.size() != n)
      throw validation_error("size_mismatch", "need at least three points and one exponent difference per point");
    double scale = 1.0;
    for (const auto& z : points_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw validation_error("bad_point", "points must be finite");
      scale = std::max(scale, std::abs(z));
    }
    if (min_pairwise_distance(points_) <= 1e-12 * scale) throw validation_error("duplicate_point", "points must be distinct");
    const std::size_t k = n - 3;
    for (std::size_t j = 2; j + 1 < n; ++j) {
      const auto l = near_integer(exps_[j]);
      if (!l) throw validation_error("non_integer_exponent", "exponent differences at apparent points must be integers");
      if (*l <= 0) throw validation_error("nonpositive_exponent", "exponent differences at apparent points must be positive");
      degrees_.push_back(static_cast<int>(*l));
    }
    const ComplexVector zero(k, 0.0);
    const auto x_at = [&](const ComplexVector& beta, std::size_t j, int ell) {
      const EquationSL sl{points_, exps_, residue_constraints(points_, exps_, beta)};
      return local_x_coeffs(sl, j, static_cast<std::size_t>(ell));
    };
    forms_.resize(k);
    for (std::size_t e = 0; e < k; ++e) {
      const int ell = degrees_[e];
      const ComplexVector base = x_at(zero, e + 2, ell);
      auto& f = forms_[e];
      f.resize(static_cast<std::size_t>(ell));
      for (int r = 1; r <= ell; ++r) f[static_cast<std::size_t>(r - 1)] = {base[static_cast<std::size_t>(r)], ComplexVector(k, 0.0)};
      for (std::size_t i = 0; i < k; ++i) {
        ComplexVector unit(k, 0.0);
        unit[i] = 1.0;
        const ComplexVector xi = x_at(unit, e + 2, ell);
        for (int r = 1; r <= ell; ++r)
          f[static_cast<std::size_t>(r - 1)].lin[i] = xi[static_cast<std::size_t>(r)] - base[static_cast<std::size_t>(r)];
      }
    }
  }

  const ComplexVector& points() const noexcept { return points_; }
  const ComplexVector& exps() const noexcept { return exps_; }
  std::size_t dim() const noexcept { return degrees_.size(); }
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  const std::vector<AffineForm>& x_forms(std::size_t e) const { return forms_[e]; }

  std::size_t bezout_bound() const {
    std::size_t b = 1;
    for (int l : degrees_) b *= static_cast<std::size_t>(l);
    return b;
  }

  ComplexVector residues(const ComplexVector& beta) const { return residue_constraints(points_, exps_, beta); }
  EquationSL equation(const ComplexVector& beta) const { return {points_, exps_, residues(beta)}; }

  ComplexVector x_values(std::size_t e, const ComplexVector& beta) const {
    ComplexVector x;
    for (const auto& f : forms_[e]) x.push_back(f(beta));
    return x;
  }

  ComplexVector residual(const ComplexVector& beta) const {
    check_size(beta);
    ComplexVector out;
    for (std::size_t e = 0; e < dim(); ++e) {
      const ComplexVector x = x_values(e, beta);
      out.push_back(apparency_determinant(degrees_[e], std::span<const Complex>(x)));
    }
    return out;
  }

  /// max_j |Y_j| / max(1, monomial scale of Y_j).
  double relative_residual(const ComplexVector& beta) const {
    check_size(beta);
    double worst = 0.0;
    for (std::size_t e = 0; e < dim(); ++e) {
      const ComplexVector x = x_values(e, beta);
      const std::span<const Complex> xs(x);
      worst = std::max(worst, std::abs(apparency_determinant(degrees_[e], xs)) /
                                  std::max(1.0, apparency_scale(degrees_[e], xs)));
    }
    return worst;
  }

  void evaluate(const ComplexVector& beta, Eigen::VectorXcd& f, Eigen::MatrixXcd& jac) const {
    check_size(beta);
    const auto k = static_cast<Eigen::Index>(dim());
    f.resize(k);
    jac.setZero(k, k);
    for (std::size_t e = 0; e < dim(); ++e) {
      std::vector<Jet> x;
      for (const auto& form : forms_[e]) x.emplace_back(form(beta), form.lin);
      const Jet y = apparency_determinant<Jet>(degrees_[e], std::span<const Jet>(x));
      const auto row = static_cast<Eigen::Index>(e);
      f(row) = y.v;
      for (std::size_t i = 0; i < y.g.size(); ++i) jac(row, static_cast<Eigen::Index>(i)) = y.g[i];
    }
  }

 private:
  void check_size(const ComplexVector& beta) const {
    if (beta.size() != dim()) throw validation_error("size_mismatch", "wrong number of free residues");
  }

  ComplexVector points_, exps_;
  std::vector<int> degrees_;
  std::vector<std::vector<AffineForm>> forms_;
};

inline ApparencySystem build_system(ComplexVector points, ComplexVector exps) {
  return ApparencySystem(std::move(points), std::move(exps));
}

struct SolveOptions {
  double polish_tol = 1e-11;
  double dedupe_tol = 1e-6;
  double singular_condition = 1e6;  // scaled Jacobian condition above which a root is flagged
  double initial_step = 0.01;
  double max_step = 0.05;
  double min_step = 1e-8;
  double divergence_bound = 1e8;
  int max_steps = 200000;
  int retries = 2;  // re-runs of a failed path with a smaller maximum step
  unsigned workers = 0;
};

struct PolishResult {
  ComplexVector beta;
  double residual = INFINITY;
  int iterations = 0;
  bool converged = false;
  double condition = INFINITY;
  bool singular = false;  // suspected multiple root
};

namespace detail {

inline double inf_norm(const ComplexVector& v) { return max_abs(v); }

/// 1 / smallest singular value of the Jacobian after each row is scaled by the natural
/// derivative size of its equation, ell * max(1, monomial scale) / max(1, |beta|).
inline double jacobian_condition(const ApparencySystem& sys, const ComplexVector& beta, Eigen::MatrixXcd jac) {
  if (jac.size() == 0) return 1.0;
  const double bnorm = std::max(1.0, inf_norm(beta));
  for (std::size_t e = 0; e < sys.dim(); ++e) {
    const ComplexVector x = sys.x_values(e, beta);
    const int ell = sys.degrees()[e];
    const double size = ell * std::max(1.0, apparency_scale(ell, std::span<const Complex>(x))) / bnorm;
    jac.row(static_cast<Eigen::Index>(e)) /= size;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  return smin > 0.0 ? 1.0 / smin : INFINITY;
}

}  // namespace detail

/// Newton on the apparency system until the relative residual drops below tol (at most
/// max_iter steps), then a condition estimate of the Jacobian at the result.
inline PolishResult polish_and_certify(const ApparencySystem& sys, ComplexVector beta, double tol = 1e-11,
                                       int max_iter = 50, double singular_condition = 1e6) {
  PolishResult out;
  Eigen::VectorXcd f;
  Eigen::MatrixXcd jac;
  double res = sys.relative_residual(beta);
  while (res >= tol && out.iterations < max_iter) {
    sys.evaluate(beta, f, jac);
    const Eigen::VectorXcd step = jac.fullPivLu().solve(-f);
    if (!step.allFinite()) break;
    ComplexVector next = beta;
    for (std::size_t i = 0; i < beta.size(); ++i) next[i] += step(static_cast<Eigen::Index>(i));
    ++out.iterations;
    const double next_res = sys.relative_residual(next);
    if (!std::isfinite(next_res)) break;
    const double move = step.cwiseAbs().maxCoeff();
    beta = std::move(next);
    res = next_res;
    if (move <= 1e-15 * std::max(1.0, detail::inf_norm(beta))) break;
  }
  sys.evaluate(beta, f, jac);
  double cond = detail::jacobian_condition(sys, beta, jac);
  // near a multiple root the residual is quadratic in the error, so a small residual does
  // not pin the root down; keep stepping while the updates still shrink
  double prev_move = INFINITY;
  while (res < tol && cond > 1e3 && out.iterations < max_iter) {
    const Eigen::VectorXcd step = jac.fullPivLu().solve(-f);
    if (!step.allFinite()) break;
    const double move = step.cwiseAbs().maxCoeff();
    if (!(move < 0.9 * prev_move)) break;
    ComplexVector next = beta;
    for (std::size_t i = 0; i < beta.size(); ++i) next[i] += step(static_cast<Eigen::Index>(i));
    const double next_res = sys.relative_residual(next);
    if (!(next_res < tol)) break;
    ++out.iterations;
    beta = std::move(next);
    res = next_res;
    prev_move = move;
    sys.evaluate(beta, f, jac);
    cond = detail::jacobian_condition(sys, beta, jac);
  }
  out.beta = std::move(beta);
  out.residual = res;
  out.converged = res < tol;
  out.condition = cond;
  out.singular = !(out.condition < singular_condition);
  return out;
}

enum class PathStatus { converged, diverged, failed };

inline const char* to_string(PathStatus s) {
  switch (s) {
    case PathStatus::converged: return "converged";
    case PathStatus::diverged: return "diverged";
    case PathStatus::failed: return "failed";
  }
  return "failed";
}

struct PathRecord {
  std::size_t index = 0;
  PathStatus status = PathStatus::failed;
  double final_s = 0.0;
  int steps = 0;
  int attempts = 0;
  ComplexVector start, endpoint;
  double residual = INFINITY;
};

struct Solution {
  ComplexVector beta_free;  // residues at points 3..n-1
  ComplexVector residues;   // all n residues
  ComplexVector accessory;  // filled when the system came from an EquationA
  double max_residual = 0.0;
  int multiplicity = 1;  // number of paths ending here
  bool singular = false;
  double condition = 1.0;
};

struct SolveReport {
  std::uint64_t seed = 0;
  Complex twist;
  ComplexVector start_constants;
  ComplexVector points, exps;
  std::vector<int> degrees;
  std::size_t bezout_bound = 1;
  std::size_t paths_tracked = 0, paths_converged = 0, paths_diverged = 0, paths_failed = 0;
  double dedupe_tol = 0.0, polish_tol = 0.0;
  std::vector<PathRecord> paths;
  std::vector<Solution> solutions;
  std::vector<std::string> warnings;
};

namespace detail {

/// H(beta, s) = (1 - s) twist G(beta) + s F(beta) with G_j = beta_j^ell_j - c_j.
class Homotopy {
 public:
  Homotopy(const ApparencySystem& sys, Complex twist, const ComplexVector& c) : sys_(sys), twist_(twist), c_(c) {}

  void evaluate(const ComplexVector& beta, double s, Eigen::VectorXcd& h, Eigen::MatrixXcd& hb, Eigen::VectorXcd& hs) const {
    Eigen::VectorXcd f;
    Eigen::MatrixXcd jf;
    sys_.evaluate(beta, f, jf);
    const auto k = static_cast<Eigen::Index>(beta.size());
    Eigen::VectorXcd g(k);
    Eigen::MatrixXcd jg = Eigen::MatrixXcd::Zero(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const int ell = sys_.degrees()[static_cast<std::size_t>(j)];
      const Complex b = beta[static_cast<std::size_t>(j)];
      g(j) = std::pow(b, ell) - c_[static_cast<std::size_t>(j)];
      jg(j, j) = static_cast<double>(ell) * std::pow(b, ell - 1);
    }
    h = (1.0 - s) * twist_ * g + s * f;
    hb = (1.0 - s) * twist_ * jg + s * jf;
    hs = f - twist_ * g;
  }

  bool velocity(const ComplexVector& beta, double s, ComplexVector& v) const {
    Eigen::VectorXcd h, hs;
    Eigen::MatrixXcd hb;
    evaluate(beta, s, h, hb, hs);
    const Eigen::VectorXcd d = hb.partialPivLu().solve(-hs);
    if (!d.allFinite()) return false;
    v = from_eigen(d);
    return true;
  }

  /// At most three Newton steps at fixed s; succeeds when the updates contract to tiny size.
  bool correct(ComplexVector& beta, double s) const {
    Eigen::VectorXcd h, hs;
    Eigen::MatrixXcd hb;
    double prev = INFINITY;
    for (int it = 0; it < 3; ++it) {
      evaluate(beta, s, h, hb, hs);
      const Eigen::VectorXcd d = hb.partialPivLu().solve(-h);
      if (!d.allFinite()) return false;
      const double size = d.cwiseAbs().maxCoeff();
      const double scale = 1.0 + inf_norm(beta);
      if (it == 0 && size > 0.1 * scale) return false;  // predictor too far off
      if (size > 0.5 * prev) return false;
      for (std::size_t i = 0; i < beta.size(); ++i) beta[i] += d(static_cast<Eigen::Index>(i));
      if (size < 1e-10 * scale) return true;
      prev = size;
    }
    return false;
  }

 private:
  const ApparencySystem& sys_;
  Complex twist_;
  const ComplexVector& c_;
};

inline PathRecord track_path(const Homotopy& hom, ComplexVector beta, const SolveOptions& opts, double max_step) {
  PathRecord rec;
  rec.start = beta;
  double s = 0.0, h = std::min(opts.initial_step, max_step);
  int streak = 0;
  ComplexVector k1, k2;
  while (s < 1.0) {
    if (++rec.steps > opts.max_steps) break;
    const double step = std::min(h, 1.0 - s);
    bool ok = hom.velocity(beta, s, k1);
    ComplexVector trial = beta;
    if (ok) {
      ComplexVector mid = beta;
      for (std::size_t i = 0; i < beta.size(); ++i) mid[i] += step * k1[i];
      ok = hom.velocity(mid, s + step, k2);
      if (ok) {
        for (std::size_t i = 0; i < beta.size(); ++i) trial[i] += 0.5 * step * (k1[i] + k2[i]);
        ok = hom.correct(trial, s + step);
      }
    }
    if (ok) {
      beta = std::move(trial);
      s = (step == 1.0 - s) ? 1.0 : s + step;
      if (++streak >= 3) {
        h = std::min(2.0 * h, max_step);
        streak = 0;
      }
      if (inf_norm(beta) > opts.divergence_bound) {
        rec.status = PathStatus::diverged;
        rec.final_s = s;
        rec.endpoint = beta;
        return rec;
      }
    } else {
      h *= 0.5;
      streak = 0;
      if (h < opts.min_step) break;
    }
  }
  rec.final_s = s;
  rec.endpoint = beta;
  rec.status = s >= 1.0 ? PathStatus::converged : PathStatus::failed;
  return rec;
}

inline bool canonical_less(const ComplexVector& a, const ComplexVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

inline double relative_gap(const ComplexVector& a, const ComplexVector& b) {
  return max_distance(a, b) / std::max({1.0, inf_norm(a), inf_norm(b)});
}

}  // namespace detail

/// Total-degree homotopy from beta_j^ell_j = c_j; every endpoint is polished, then
/// endpoints are clustered under dedupe_tol. Deterministic for a given seed.
inline SolveReport solve_total_degree(const ApparencySystem& sys, std::uint64_t seed, const SolveOptions& opts = {}) {
  SolveReport rep;
  rep.seed = seed;
  rep.points = sys.points();
  rep.exps = sys.exps();
  rep.degrees = sys.degrees();
  rep.bezout_bound = sys.bezout_bound();
  rep.dedupe_tol = opts.dedupe_tol;
  rep.polish_tol = opts.polish_tol;
  const std::size_t k = sys.dim();

  if (k == 0) {
    Solution sol;
    sol.residues = sys.residues({});
    rep.solutions.push_back(std::move(sol));
    return rep;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
  rep.twist = std::polar(1.0, angle(rng));
  for (std::size_t j = 0; j < k; ++j) rep.start_constants.push_back(std::polar(1.0, angle(rng)));
  const detail::Homotopy hom(sys, rep.twist, rep.start_constants);

  const std::size_t total = rep.bezout_bound;
  rep.paths_tracked = total;
  rep.paths.resize(total);
  std::vector<PolishResult> polished(total);
  parallel_for(total, opts.workers, [&](std::size_t p) {
    ComplexVector start(k);
    std::size_t digits = p;
    for (std::size_t j = 0; j < k; ++j) {
      const int ell = sys.degrees()[j];
      const std::size_t d = digits % static_cast<std::size_t>(ell);
      digits /= static_cast<std::size_t>(ell);
      start[j] = std::pow(rep.start_constants[j], 1.0 / ell) * std::polar(1.0, 2.0 * pi * static_cast<double>(d) / ell);
    }
    PathRecord rec;
    double max_step = opts.max_step;
    for (int attempt = 0; attempt <= opts.retries; ++attempt) {
      rec = detail::track_path(hom, start, opts, max_step);
      rec.attempts = attempt + 1;
      if (rec.status != PathStatus::failed) break;
      max_step *= 0.25;
    }
    rec.index = p;
    if (rec.status != PathStatus::diverged) {
      auto pol = polish_and_certify(sys, rec.endpoint, opts.polish_tol, 50, opts.singular_condition);
      rec.residual = pol.residual;
      // a path that stalled just short of s = 1 may still sit in the basin of its root
      if (rec.status == PathStatus::failed && pol.converged && rec.final_s > 0.9) rec.status = PathStatus::converged;
      polished[p] = std::move(pol);
    }
    rep.paths[p] = std::move(rec);
  });

  std::vector<std::size_t> good;
  for (std::size_t p = 0; p < total; ++p) {
    const auto& rec = rep.paths[p];
    if (rec.status == PathStatus::diverged) ++rep.paths_diverged;
    else if (rec.status == PathStatus::failed) ++rep.paths_failed;
    else ++rep.paths_converged;
    if (rec.status == PathStatus::converged && polished[p].converged) good.push_back(p);
    else if (rec.status == PathStatus::converged)
      rep.warnings.push_back("path " + std::to_string(p) + " endpoint did not polish below tolerance");
    else
      rep.warnings.push_back("path " + std::to_string(p) + " " + to_string(rec.status) + " at s=" + std::to_string(rec.final_s));
  }

  std::sort(good.begin(), good.end(), [&](std::size_t a, std::size_t b) {
    return detail::canonical_less(polished[a].beta, polished[b].beta);
  });

  // endpoints that nearly collide are re-polished from perturbed starts first, so two
  // genuine roots are not merged by accident
  std::mt19937_64 jitter(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  for (std::size_t a = 0; a < good.size(); ++a)
    for (std::size_t b = a + 1; b < good.size(); ++b) {
      auto& pa = polished[good[a]];
      auto& pb = polished[good[b]];
      const double gap = detail::relative_gap(pa.beta, pb.beta);
      if (gap <= opts.dedupe_tol || gap > 10.0 * opts.dedupe_tol) continue;
      for (auto* pol : {&pa, &pb}) {
        ComplexVector start = pol->beta;
        const double scale = 10.0 * opts.dedupe_tol * std::max(1.0, detail::inf_norm(start));
        for (auto& c : start) c += scale * Complex(normal(jitter), normal(jitter));
        auto again = polish_and_certify(sys, start, opts.polish_tol, 50, opts.singular_condition);
        if (again.converged) *pol = std::move(again);
      }
    }

  for (std::size_t p : good) {
    const auto& pol = polished[p];
    bool merged = false;
    for (auto& sol : rep.solutions)
      if (detail::relative_gap(sol.beta_free, pol.beta) <= opts.dedupe_tol) {
        ++sol.multiplicity;
        sol.singular = sol.singular || pol.singular;
        merged = true;
        break;
      }
    if (merged) continue;
    Solution sol;
    sol.beta_free = pol.beta;
    sol.residues = sys.residues(pol.beta);
    sol.max_residual = pol.residual;
    sol.singular = pol.singular;
    sol.condition = pol.condition;
    rep.solutions.push_back(std::move(sol));
  }
  std::sort(rep.solutions.begin(), rep.solutions.end(),
            [](const Solution& a, const Solution& b) { return detail::canonical_less(a.beta_free, b.beta_free); });
  for (const auto& sol : rep.solutions)
    if (sol.singular) rep.warnings.push_back("suspected multiple root (singular Jacobian)");

  if (rep.solutions.empty())
    throw numerical_error("solver_failure", "no path produced a polished solution; retry with another seed");
  return rep;
}

/// Affine relation between the accessory parameters of an EquationA and the free residues
/// of its normal form (for a fixed regular point): beta = offset + matrix * accessory.
struct AccessoryMap {
  Complex regular_point;
  ComplexVector offset;
  Eigen::MatrixXcd matrix;

  ComplexVector to_beta(const ComplexVector& accessory) const {
    return from_eigen(to_eigen(offset) + matrix * to_eigen(accessory));
  }

  ComplexVector to_accessory(const ComplexVector& beta) const {
    if (offset.empty()) return {};
    return from_eigen(matrix.fullPivLu().solve(to_eigen(beta) - to_eigen(offset)));
  }
};

inline AccessoryMap accessory_map(const EquationA& skeleton, Complex regular_point) {
  const std::size_t k = skeleton.k();
  const auto free_part = [&](const ComplexVector& acc) {
    EquationA eq = skeleton;
    eq.accessory = acc;
    const auto form = to_sl_form(eq, regular_point);
    return ComplexVector(form.equation.residues.begin() + 2, form.equation.residues.end() - 1);
  };
  AccessoryMap map;
  map.regular_point = regular_point;
  map.offset = free_part(ComplexVector(k, 0.0));
  map.matrix.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    ComplexVector unit(k, 0.0);
    unit[i] = 1.0;
    const ComplexVector col = free_part(unit);
    for (std::size_t r = 0; r < k; ++r)
      map.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = col[r] - map.offset[r];
  }
  return map;
}

/// Apparency problem for an EquationA skeleton (accessory ignored), solved in normal form.
struct EquationSolve {
  SlForm form;  // normal form of the skeleton with zero accessory
  AccessoryMap map;
  SolveReport report;
  std::vector<EquationA> equations;  // one per solution
};

inline EquationSolve solve_equation_a(const EquationA& skeleton, std::uint64_t seed, const SolveOptions& opts = {}) {
  EquationSolve out;
  EquationA base = skeleton;
  base.accessory.assign(skeleton.k(), 0.0);
  out.form = to_sl_form(base);
  out.map = accessory_map(base, out.form.regular_point);
  const ApparencySystem sys(out.form.equation.points, out.form.equation.exps);
  out.report = solve_total_degree(sys, seed, opts);
  for (auto& sol : out.report.solutions) {
    sol.accessory = out.map.to_accessory(sol.beta_free);
    EquationA eq = base;
    eq.accessory = sol.accessory;
    out.equations.push_back(std::move(eq));
  }
  return out;
}

}  // namespace fuchsian
