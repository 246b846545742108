#pragma once

#include <array>
#include <functional>
#include <string>

#include "fuchsian/accessory_solver.hpp"
#include "fuchsian/apparency.hpp"
#include "fuchsian/monodromy.hpp"

namespace fuchsian {

/// A point of the extended plane.
struct ExtPoint {
  Complex z = 0.0;
  bool infinite = false;

  static ExtPoint at_infinity() { return {0.0, true}; }
};

inline bool same_point(const ExtPoint& a, const ExtPoint& b, double tol = 1e-12) {
  if (a.infinite || b.infinite) return a.infinite == b.infinite;
  return std::abs(a.z - b.z) <= tol * std::max(1.0, std::abs(a.z));
}

/// z -> (a z + b)/(c z + d)
struct Mobius {
  Complex a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  ExtPoint operator()(const ExtPoint& p) const {
    if (p.infinite) return c == Complex(0.0) ? ExtPoint::at_infinity() : ExtPoint{a / c, false};
    const Complex den = c * p.z + d;
    const Complex num = a * p.z + b;
    if (std::abs(den) <= 1e-14 * std::max(std::abs(num), 1e-300)) return ExtPoint::at_infinity();
    return {num / den, false};
  }
};

/// The Moebius map with p1 -> 0, p2 -> 1, p3 -> infinity.
inline Mobius mobius_to_01inf(const ExtPoint& p1, const ExtPoint& p2, const ExtPoint& p3) {
  if (same_point(p1, p2) || same_point(p1, p3) || same_point(p2, p3))
    throw validation_error("duplicate_point", "the three reference points must be distinct");
  if (p1.infinite) return {0.0, p2.z - p3.z, 1.0, -p3.z};
  if (p2.infinite) return {1.0, -p1.z, 1.0, -p3.z};
  if (p3.infinite) return {1.0, -p1.z, 0.0, p2.z - p1.z};
  return {p2.z - p3.z, -p1.z * (p2.z - p3.z), p2.z - p1.z, -p3.z * (p2.z - p1.z)};
}

struct AngleData {
  std::vector<double> angles;      // cone angles / 2 pi
  std::vector<ExtPoint> positions;  // same length
};

inline bool near_int(double x, double tol = 1e-9) { return std::abs(x - std::round(x)) <= tol; }

/// alpha1 +- alpha2 +- alpha3 all non-integer.
inline bool coaxial_check(double a1, double a2, double a3) {
  for (double s2 : {1.0, -1.0})
    for (double s3 : {1.0, -1.0})
      if (near_int(a1 + s2 * a2 + s3 * a3)) return false;
  return true;
}

inline double cond_value(double a1, double a2, double a3, long sigma) {
  const double c1 = std::cos(pi * a1), c2 = std::cos(pi * a2), c3 = std::cos(pi * a3);
  const double sign = sigma % 2 == 0 ? 1.0 : -1.0;
  return c1 * c1 + c2 * c2 + c3 * c3 + 2.0 * sign * c1 * c2 * c3;
}

inline bool cond_check(double a1, double a2, double a3, long sigma) { return cond_value(a1, a2, a3, sigma) < 1.0; }

/// sum over j >= 4 of (alpha_j - 1); every such angle must be an integer.
inline long sigma_of(const std::vector<double>& angles) {
  long s = 0;
  for (std::size_t j = 3; j < angles.size(); ++j) {
    if (!near_int(angles[j])) throw validation_error("non_integer_angle", "angles after the third must be integers");
    s += std::lround(angles[j]) - 1;
  }
  return s;
}

/// First three angles non-integer, the rest integers >= 2, positions distinct.
inline void validate_angle_data(const AngleData& data) {
  const std::size_t n = data.angles.size();
  if (n < 3) throw validation_error("too_few_points", "need at least three angles");
  if (data.positions.size() != n) throw validation_error("size_mismatch", "one position per angle is required");
  for (std::size_t j = 0; j < n; ++j) {
    const double a = data.angles[j];
    if (!(a > 0.0) || !std::isfinite(a)) throw validation_error("angle_not_positive", "angles must be positive");
    if (j < 3 && near_int(a)) throw validation_error("integer_angle", "the first three angles must be non-integer");
    if (j >= 3) {
      if (!near_int(a)) throw validation_error("non_integer_angle", "angles after the third must be integers");
      if (std::lround(a) < 2) throw validation_error("angle_too_small", "integer angles must be at least 2");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (same_point(data.positions[i], data.positions[j], 1e-12))
        throw validation_error("duplicate_point", "positions must be distinct");
}

struct NormalizedInput {
  Mobius map;
  EquationA skeleton;  // accessory zero
  long sigma = 0;
};

/// z1, z2, z3 -> 0, 1, infinity; alpha = a1 - 1, beta = a2 - 1, m_i = a_{i+3} - 1, gamma - delta = a3.
inline NormalizedInput normalize_positions(const AngleData& data) {
  validate_angle_data(data);
  NormalizedInput out;
  out.map = mobius_to_01inf(data.positions[0], data.positions[1], data.positions[2]);
  out.sigma = sigma_of(data.angles);
  ComplexVector pts;
  std::vector<int> mults;
  for (std::size_t j = 3; j < data.angles.size(); ++j) {
    const ExtPoint a = out.map(data.positions[j]);
    if (a.infinite || std::abs(a.z) < 1e-9 || std::abs(a.z - 1.0) < 1e-9 || std::abs(a.z) > 1e9)
      throw validation_error("reposition", "an apparent point lands on 0, 1 or infinity after normalization");
    pts.push_back(a.z);
    mults.push_back(static_cast<int>(std::lround(data.angles[j])) - 1);
  }
  out.skeleton = build_equation_a(data.angles[0] - 1.0, data.angles[1] - 1.0, data.angles[2], std::move(pts), std::move(mults));
  return out;
}

/// Semistandard fillings of the 2 x (d - 1) rectangle with alpha_j - 1 copies of j:
/// rows weakly increase, columns strictly increase. Plain cell-by-cell backtracking.
inline long tableaux_count(const std::vector<long>& angles) {
  long total = 0;
  std::vector<int> content;
  for (long a : angles) {
    if (a < 1) throw validation_error("angle_not_positive", "tableau angles must be positive integers");
    total += a - 1;
    content.push_back(static_cast<int>(a - 1));
  }
  if (total % 2 != 0) return 0;  // d not integral: no such tableaux
  const int width = static_cast<int>(total / 2);
  const int values = static_cast<int>(content.size());
  std::vector<int> cells(static_cast<std::size_t>(2 * width), -1);
  long count = 0;
  std::function<void(int)> fill = [&](int pos) {
    if (pos == 2 * width) {
      ++count;
      return;
    }
    const int row = pos / width, col = pos % width;
    int lo = col > 0 ? cells[static_cast<std::size_t>(pos - 1)] : 0;
    if (row == 1) lo = std::max(lo, cells[static_cast<std::size_t>(col)] + 1);
    for (int v = lo; v < values; ++v) {
      if (content[static_cast<std::size_t>(v)] == 0) continue;
      --content[static_cast<std::size_t>(v)];
      cells[static_cast<std::size_t>(pos)] = v;
      fill(pos + 1);
      ++content[static_cast<std::size_t>(v)];
    }
  };
  fill(0);
  return count;
}

/// alpha_1 + alpha_n >= sum(alpha_j - 1)/2 + 2 and alpha_2 >= sum_{3..n-1}(alpha_j - 1) + 1.
inline bool tableaux_conditions(const std::vector<long>& a) {
  const std::size_t n = a.size();
  if (n < 3) return false;
  long total = 0, middle = 0;
  for (std::size_t j = 0; j < n; ++j) total += a[j] - 1;
  for (std::size_t j = 2; j + 1 < n; ++j) middle += a[j] - 1;
  return 2 * (a[0] + a[n - 1]) >= total + 4 && a[1] >= middle + 1;
}

/// Room left in the first row after the 1's must hold every middle entry other than 2
/// (r >= sum_{3..n-1}(alpha_j - 1)) and be fillable by 2's alone (r <= alpha_2 - 1).
/// Together with the first condition above this is what the product count needs.
inline bool tableaux_room_conditions(const std::vector<long>& a) {
  const std::size_t n = a.size();
  if (n < 3) return false;
  long total = 0, middle = 0;
  for (long x : a) total += x - 1;
  if (total % 2 != 0) return false;
  for (std::size_t j = 2; j + 1 < n; ++j) middle += a[j] - 1;
  const long room = total / 2 - (a[0] - 1);
  return room >= middle && room <= a[1] - 1;
}

/// A degree-d rational function has critical multiplicities at most d - 1, so alpha_j <= d;
/// beyond that no filling exists.
inline bool tableaux_admissible(const std::vector<long>& a) {
  long total = 0;
  for (long x : a) total += x - 1;
  if (total % 2 != 0) return false;
  const long d = total / 2 + 1;
  for (long x : a)
    if (x < 1 || x > d) return false;
  return true;
}

/// Traces of the lifted monodromy around the three non-integer points, arranged so the
/// three matrices multiply to the identity.
struct TraceData {
  std::array<double, 3> traces{};
  double imag_defect = 0.0;     // largest imaginary part of a trace
  int product_sign = 1;         // M1 M2 M3 = sign I, lifted M = -T
  double product_defect = 0.0;  // || M1 M2 M3 - sign I || / prod max(1, ||Mi||)
  double apparent_defect = 0.0;  // || T - (+-I) || around the apparent points
  TraceTest test;
};

inline TraceData trace_data(const EquationA& eq, const TransportOptions& opt = {}, unsigned workers = 1) {
  const auto form = to_sl_form(eq);
  const auto& sl = form.equation;
  const std::size_t n = sl.n();
  const auto rep = monodromy_rep(sl, default_base_point(sl.points), opt, workers);
  TraceData out;
  Matrix2 prod = Matrix2::Identity();
  double prod_scale = 1.0;  // rounding in a product grows with the factor norms
  std::size_t last = 0;
  for (std::size_t i = 0; i < rep.loops.size(); ++i) {
    const std::size_t j = rep.loops[i].target;
    if (j == 0 || j == 1 || j == n - 1) {
      prod = (-rep.matrices[i]) * prod;
      prod_scale *= std::max(1.0, rep.matrices[i].norm());
      last = j;
    } else {
      const long ell = std::lround(sl.exps[j].real());
      const double s = (ell - 1) % 2 == 0 ? 1.0 : -1.0;
      out.apparent_defect = std::max(out.apparent_defect, (rep.matrices[i] - s * Matrix2::Identity()).norm());
    }
  }
  out.product_sign = prod.trace().real() >= 0.0 ? 1 : -1;
  out.product_defect = (prod - static_cast<double>(out.product_sign) * Matrix2::Identity()).norm() / prod_scale;
  const std::array<std::size_t, 3> idx{0, 1, n - 1};
  for (std::size_t t = 0; t < 3; ++t) {
    Complex tr = (-rep.around(idx[t])).trace();
    if (idx[t] == last) tr *= static_cast<double>(out.product_sign);
    out.traces[t] = tr.real();
    out.imag_defect = std::max(out.imag_defect, std::abs(tr.imag()));
  }
  out.test = unitarizability_traces(out.traces[0], out.traces[1], out.traces[2]);
  return out;
}

struct MetricOptions {
  std::uint64_t seed = 1;
  SolveOptions solve;
  // products of large loop matrices need the tighter setting
  TransportOptions transport{.rtol = 1e-13, .atol = 1e-16};
  double apparency_tol = 1e-9;
  double mono_tol = 1e-6;
};

struct MetricSolution {
  ComplexVector accessory;
  double residual = 0.0;
  bool apparent = false;
  bool singular = false;
  TraceData traces;
  bool verified = false;
};

struct MetricReport {
  std::vector<double> angles;
  long sigma = 0;
  bool coaxial_ok = false;
  double cond_lhs = 0.0;
  bool cond = false;
  long bound = 1;
  long verified = 0;
  NormalizedInput normalized;
  std::optional<SolveReport> solve;
  std::vector<MetricSolution> solutions;
  std::vector<std::string> warnings;
};

inline MetricSolution verify_metric_solution(const EquationA& eq, const Solution& sol, const MetricOptions& opt,
                                             long sigma) {
  MetricSolution ms;
  ms.accessory = sol.accessory;
  ms.residual = sol.max_residual;
  ms.singular = sol.singular;
  const auto form = to_sl_form(eq);
  ms.apparent = true;
  for (std::size_t j = 2; j + 1 < form.equation.n(); ++j)
    if (!is_apparent(form.equation, j, opt.apparency_tol)) ms.apparent = false;
  ms.traces = trace_data(eq, opt.transport);
  const int expected = (sigma - 1) % 2 == 0 ? 1 : -1;
  ms.verified = ms.apparent && ms.traces.test.unitarizable && ms.traces.product_sign == expected &&
                ms.traces.product_defect < opt.mono_tol && ms.traces.imag_defect < opt.mono_tol;
  return ms;
}

/// Number of unitarizable apparent equations for the given angles and positions.
inline MetricReport count_metrics(const AngleData& data, const MetricOptions& opt = {}) {
  MetricReport rep;
  rep.angles = data.angles;
  rep.normalized = normalize_positions(data);
  rep.sigma = rep.normalized.sigma;
  const double a1 = data.angles[0], a2 = data.angles[1], a3 = data.angles[2];
  rep.coaxial_ok = coaxial_check(a1, a2, a3);
  if (!rep.coaxial_ok) throw validation_error("coaxial_unsupported", "coaxial regime unsupported: a1 +- a2 +- a3 is an integer");
  rep.cond_lhs = cond_value(a1, a2, a3, rep.sigma);
  rep.cond = rep.cond_lhs < 1.0;
  for (int m : rep.normalized.skeleton.mults) rep.bound *= m + 1;

  const auto solved = solve_equation_a(rep.normalized.skeleton, opt.seed, opt.solve);
  rep.solve = solved.report;
  rep.solutions.resize(solved.equations.size());
  const unsigned workers = resolve_workers(opt.solve.workers);
  parallel_for(solved.equations.size(), workers, [&](std::size_t i) {
    rep.solutions[i] = verify_metric_solution(solved.equations[i], solved.report.solutions[i], opt, rep.sigma);
  });
  const int expected = (rep.sigma - 1) % 2 == 0 ? 1 : -1;
  for (const auto& s : rep.solutions) {
    if (!s.apparent) continue;
    if (s.traces.product_sign != expected || s.traces.product_defect >= opt.mono_tol)
      throw numerical_error("numerical_inconsistency", "monodromy product relation fails on an apparent solution");
    // the trace test depends only on the angles, so it must agree with the closed condition
    if (s.traces.test.unitarizable != rep.cond) {
      if (std::abs(rep.cond_lhs - 1.0) < 1e-6) {
        rep.warnings.push_back("angle condition within 1e-6 of its boundary; trace test disagrees");
        continue;
      }
      throw numerical_error("numerical_inconsistency", "monodromy trace test disagrees with the angle condition");
    }
  }
  if (rep.cond)
    for (const auto& s : rep.solutions)
      if (s.verified) ++rep.verified;
  if (rep.cond && rep.verified == 0)
    throw numerical_error("numerical_inconsistency", "angle condition holds but no metric was verified");
  if (rep.verified > rep.bound) rep.warnings.push_back("verified count exceeds the bound");
  if (rep.cond && rep.verified < rep.bound) rep.warnings.push_back("fewer metrics than the bound; input may be non-generic");
  return rep;
}

}  // namespace fuchsian
