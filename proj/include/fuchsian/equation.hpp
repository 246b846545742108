#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fuchsian/partial_fractions.hpp"
#include "fuchsian/polynomial.hpp"

namespace fuchsian {

/// y'' - (alpha/z + beta/(z-1) + sum m_i/(z-a_i)) y' + N(z)/(z(z-1) prod(z-a_i)) y = 0
/// with N(z) = gamma*delta*z^k + accessory[0] z^(k-1) + ... + accessory[k-1].
struct EquationA {
  Complex alpha, beta, gamma, delta;
  ComplexVector points;    // apparent points a_i
  std::vector<int> mults;  // m_i
  ComplexVector accessory;
  bool generic_0d = false;  // gamma, delta, gamma-alpha-1, delta-alpha-1 avoid {0..d-1}

  std::size_t k() const noexcept { return points.size(); }
  std::size_t n() const noexcept { return points.size() + 3; }
  int degree_d() const noexcept {
    int d = 0;
    for (int m : mults) d += m;
    return d;
  }

  Polynomial numerator() const {
    ComplexVector c(k() + 1);
    c[k()] = gamma * delta;
    for (std::size_t i = 0; i < accessory.size() && i < k(); ++i) c[k() - 1 - i] = accessory[i];
    return Polynomial(std::move(c));
  }

  /// Finite singular points in the order 0, 1, a_1, ..., a_k.
  ComplexVector singular_points() const {
    ComplexVector s{0.0, 1.0};
    s.insert(s.end(), points.begin(), points.end());
    return s;
  }

  /// Coefficients (p, q) of y'' + p y' + q y = 0 at z.
  std::pair<Complex, Complex> coefficients(Complex z) const {
    Complex p = alpha / z + beta / (z - 1.0);
    Complex den = z * (z - 1.0);
    for (std::size_t i = 0; i < k(); ++i) {
      p += static_cast<double>(mults[i]) / (z - points[i]);
      den *= z - points[i];
    }
    return {-p, numerator()(z) / den};
  }
};

/// w'' + sum_j ((1 - exps_j^2)/(4 (z-z_j)^2) + residues_j/(z-z_j)) w = 0.
struct EquationSL {
  ComplexVector points;
  ComplexVector exps;
  ComplexVector residues;

  std::size_t n() const noexcept { return points.size(); }

  Complex double_pole(std::size_t j) const { return (1.0 - exps[j] * exps[j]) / 4.0; }

  PartialFractions potential() const {
    PartialFractions v;
    for (std::size_t j = 0; j < n(); ++j) {
      v.add_term(points[j], 2, double_pole(j));
      v.add_term(points[j], 1, residues[j]);
    }
    return v;
  }

  Complex potential(Complex z) const {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n(); ++j) {
      const Complex inv = 1.0 / (z - points[j]);
      acc += double_pole(j) * inv * inv + residues[j] * inv;
    }
    return acc;
  }

  Complex potential_derivative(Complex z) const {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n(); ++j) {
      const Complex inv = 1.0 / (z - points[j]);
      acc += -2.0 * double_pole(j) * inv * inv * inv - residues[j] * inv * inv;
    }
    return acc;
  }

  std::pair<Complex, Complex> coefficients(Complex z) const { return {0.0, potential(z)}; }
  ComplexVector singular_points() const { return points; }

  /// Regularity of infinity: sum b = 0, sum b z = -sum A, sum b z^2 = -sum 2 A z,
  /// with A_j = (1 - exps_j^2)/4. Returned as lhs - rhs for each relation.
  std::array<Complex, 3> constraint_defects() const {
    std::array<Complex, 3> out{0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < n(); ++j) {
      const Complex z = points[j];
      out[0] += residues[j];
      out[1] += residues[j] * z + double_pole(j);
      out[2] += residues[j] * z * z + 2.0 * z * double_pole(j);
    }
    return out;
  }
};

/// The main equation multiplied by z^2 A(z): A theta^2 y - B theta y + C y = 0, theta = z d/dz.
struct CanonicalForm3 {
  Polynomial A, B, C;
  ComplexVector b2, b1, b0;  // b_{i,2}, b_{i,1}, b_{i,0} for i = 1..k (index i-1)
  Complex weight_alpha, weight_beta;
  std::vector<int> weight_mults;
};

namespace detail {

inline double scale_of(std::initializer_list<Complex> zs) {
  double s = 1.0;
  for (const auto& z : zs) s = std::max(s, std::abs(z));
  return s;
}

inline bool in_small_range(Complex v, int d) {
  const auto r = near_integer(v);
  return r.has_value() && *r >= 0 && *r <= d - 1;
}

}  // namespace detail

inline bool satisfies_0d(Complex alpha, Complex gamma, Complex delta, int d) {
  for (Complex v : {gamma, delta, gamma - alpha - 1.0, delta - alpha - 1.0})
    if (detail::in_small_range(v, d)) return false;
  return true;
}

inline void validate_points(const ComplexVector& points, const std::vector<int>& mults) {
  if (points.size() != mults.size())
    throw validation_error("size_mismatch", "points and mults must have the same length");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (mults[i] < 1) throw validation_error("bad_multiplicity", "multiplicities must be positive integers");
    const Complex a = points[i];
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw validation_error("bad_point", "apparent points must be finite");
    if (std::abs(a) < 1e-12 || std::abs(a - 1.0) < 1e-12)
      throw validation_error("forbidden_point", "apparent points must differ from 0 and 1");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(a - points[j]) <= 1e-12 * std::max(1.0, std::abs(a)))
        throw validation_error("duplicate_point", "apparent points must be distinct");
  }
}

/// gamma, delta resolved from Fuchs (gamma + delta = alpha + beta + 1 + d) and the
/// given difference; the sign of the difference is the caller's choice.
inline EquationA build_equation_a(Complex alpha, Complex beta, Complex gamma_minus_delta, ComplexVector points,
                                  std::vector<int> mults, ComplexVector accessory = {}) {
  validate_points(points, mults);
  if (accessory.empty()) accessory.assign(points.size(), 0.0);
  if (accessory.size() != points.size())
    throw validation_error("accessory_size", "accessory vector must have one entry per apparent point");
  EquationA eq;
  eq.alpha = alpha;
  eq.beta = beta;
  eq.points = std::move(points);
  eq.mults = std::move(mults);
  eq.accessory = std::move(accessory);
  const Complex sum = alpha + beta + 1.0 + static_cast<double>(eq.degree_d());
  eq.gamma = (sum + gamma_minus_delta) / 2.0;
  eq.delta = (sum - gamma_minus_delta) / 2.0;
  eq.generic_0d = satisfies_0d(alpha, eq.gamma, eq.delta, eq.degree_d());
  return eq;
}

/// Full constructor used by deserialization: checks the Fuchs relation.
inline EquationA make_equation_a(Complex alpha, Complex beta, Complex gamma, Complex delta, ComplexVector points,
                                 std::vector<int> mults, ComplexVector accessory) {
  EquationA eq = build_equation_a(alpha, beta, gamma - delta, std::move(points), std::move(mults), std::move(accessory));
  if (!close(eq.gamma, gamma, 1e-9) || !close(eq.delta, delta, 1e-9))
    throw validation_error("fuchs_relation", "gamma + delta must equal alpha + beta + 1 + sum(mults)");
  eq.gamma = gamma;
  eq.delta = delta;
  return eq;
}

inline CanonicalForm3 to_canonical_form3(const EquationA& eq) {
  const std::size_t k = eq.k();
  Polynomial prod_a = Polynomial::from_roots(eq.points);
  CanonicalForm3 cf;
  cf.A = Polynomial{-1.0, 1.0} * prod_a;
  // B = A (1 + z W'/W) = (1 + alpha) A + z (beta prod(z-a) + sum m_i (z-1) prod_{j!=i}(z-a_j))
  Polynomial inner = eq.beta * prod_a;
  for (std::size_t i = 0; i < k; ++i) {
    ComplexVector others;
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) others.push_back(eq.points[j]);
    inner += static_cast<double>(eq.mults[i]) * (Polynomial{-1.0, 1.0} * Polynomial::from_roots(others));
  }
  cf.B = (1.0 + eq.alpha) * cf.A + Polynomial{0.0, 1.0} * inner;
  cf.C = Polynomial{0.0, 1.0} * eq.numerator();
  for (std::size_t i = 1; i <= k; ++i) {
    cf.b2.push_back(cf.A[i]);
    cf.b1.push_back(-cf.B[i]);
    cf.b0.push_back(cf.C[i]);
  }
  cf.weight_alpha = eq.alpha;
  cf.weight_beta = eq.beta;
  cf.weight_mults = eq.mults;
  return cf;
}

/// Potential of the Liouville normal form: q - p'/2 - p^2/4.
/// p must have simple poles only (no polynomial part); q poles of order at most two.
inline PartialFractions sl_reduce(const PartialFractions& p, const PartialFractions& q) {
  constexpr double tol = 1e-14;
  if (p.max_order(tol) > 1 || p.polynomial_part().degree(0.0) >= 0)
    throw validation_error("pole_order", "first-order coefficient must have simple poles only");
  if (q.max_order(tol) > 2) throw validation_error("pole_order", "zeroth-order coefficient has a pole of order > 2");
  PartialFractions v = q;
  const auto& poles = p.poles();
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const Complex s = poles[i].location;
    const Complex rho = poles[i].coeff(1);
    v.add_term(s, 2, rho / 2.0 - rho * rho / 4.0);
    Complex simple = 0.0;
    for (std::size_t j = 0; j < poles.size(); ++j)
      if (j != i) simple += rho * poles[j].coeff(1) / (s - poles[j].location);
    v.add_term(s, 1, -0.5 * simple);
  }
  return v;
}

/// Pull a potential back along z = p0 + 1/t (a Moebius map with zero Schwarzian),
/// i.e. V~(t) = V(p0 + 1/t) / t^4, expanded in partial fractions in t.
/// V must be O(1/z^2) at infinity with poles of order <= 2, and p0 must be regular.
inline PartialFractions invert_potential(const PartialFractions& v, Complex p0) {
  const double scale = std::max(1.0, v.polynomial_part().max_abs_coeff());
  double mag = 1.0;
  for (const auto& pole : v.poles()) mag = std::max(mag, max_abs(pole.coeffs));
  if (v.polynomial_part().max_abs_coeff() > 1e-12 * mag * scale || v.max_order(1e-14) > 2)
    throw validation_error("potential_shape", "potential must vanish at infinity with poles of order <= 2");
  PartialFractions out;
  Complex triple = 0.0;
  for (const auto& pole : v.poles()) {
    const Complex e = p0 - pole.location;
    if (std::abs(e) < 1e-12) throw validation_error("singular_base", "inversion centre is a singular point");
    const Complex sigma = -1.0 / e;
    const Complex c2 = pole.coeff(2), c1 = pole.coeff(1);
    out.add_term(sigma, 2, c2);
    out.add_term(sigma, 1, 2.0 * c2 * e - c1 * e * e);
    out.add_term(0.0, 2, c2 - c1 * e);
    out.add_term(0.0, 1, -2.0 * c2 * e + c1 * e * e);
    triple += c1;
  }
  if (std::abs(triple) > 1e-9 * mag)
    throw validation_error("infinity_not_fuchsian", "residues of the potential do not sum to zero");
  return out;
}

/// Deterministic choice of a regular point p0 for the inversion z = p0 + 1/t, scored by
/// the separation of the images relative to their size.
inline Complex choose_regular_point(const ComplexVector& singular) {
  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  for (const auto& s : singular) {
    lo_x = std::min(lo_x, s.real());
    hi_x = std::max(hi_x, s.real());
    lo_y = std::min(lo_y, s.imag());
    hi_y = std::max(hi_y, s.imag());
  }
  const double pad = std::max({1.0, hi_x - lo_x, hi_y - lo_y}) * 0.5;
  lo_x -= pad, hi_x += pad, lo_y -= pad, hi_y += pad;
  const double min_sep = min_pairwise_distance(singular);
  constexpr int grid = 13;
  Complex best = Complex(lo_x, lo_y);
  double best_score = -1.0;
  for (int a = 0; a < grid; ++a)
    for (int b = 0; b < grid; ++b) {
      // slight irrational offset keeps candidates off lattice-aligned inputs
      const Complex p(lo_x + (hi_x - lo_x) * (a + 0.318) / grid, lo_y + (hi_y - lo_y) * (b + 0.271) / grid);
      ComplexVector t{0.0};
      bool ok = true;
      for (const auto& s : singular) {
        if (std::abs(p - s) < 0.2 * std::min(1.0, min_sep)) ok = false;
        t.push_back(1.0 / (s - p));
      }
      if (!ok) continue;
      const double score = min_pairwise_distance(t) / max_abs(t);
      if (score > best_score) {
        best_score = score;
        best = p;
      }
    }
  return best;
}

/// Normal form of an EquationA with finite singularities and a regular point at infinity.
struct SlForm {
  EquationSL equation;
  Complex regular_point;  // p0; t = 1/(z - p0)
};

/// Point order in the result: images of 0, 1, a_1..a_k, then infinity (t = 0).
inline SlForm to_sl_form(const EquationA& eq, std::optional<Complex> regular_point = std::nullopt) {
  const ComplexVector sing = eq.singular_points();
  const Complex p0 = regular_point.value_or(choose_regular_point(sing));
  for (const auto& s : sing)
    if (std::abs(p0 - s) < 1e-9) throw validation_error("singular_base", "regular point coincides with a singularity");

  PartialFractions p, q;
  ComplexVector rho{-eq.alpha, -eq.beta};
  for (int m : eq.mults) rho.push_back(-static_cast<double>(m));
  const Polynomial num = eq.numerator();
  for (std::size_t i = 0; i < sing.size(); ++i) {
    p.add_term(sing[i], 1, rho[i]);
    Complex den = 1.0;
    for (std::size_t j = 0; j < sing.size(); ++j)
      if (j != i) den *= sing[i] - sing[j];
    q.add_term(sing[i], 1, num(sing[i]) / den);
  }
  const PartialFractions v = invert_potential(sl_reduce(p, q), p0);

  SlForm out;
  out.regular_point = p0;
  EquationSL& sl = out.equation;
  for (const auto& s : sing) sl.points.push_back(1.0 / (s - p0));
  sl.points.push_back(0.0);
  sl.exps = {eq.alpha + 1.0, eq.beta + 1.0};
  for (int m : eq.mults) sl.exps.push_back(static_cast<double>(m + 1));
  sl.exps.push_back(eq.gamma - eq.delta);
  for (const auto& t : sl.points) sl.residues.push_back(v.coeff(t, 1));
  return out;
}

/// Taylor coefficients x_0..x_count of (z - z_j)^2 V(z) at z_j.
inline ComplexVector local_x_coeffs(const EquationSL& eq, std::size_t j, std::size_t count) {
  ComplexVector x(count + 1, 0.0);
  x[0] = eq.double_pole(j);
  if (count >= 1) x[1] = eq.residues[j];
  for (std::size_t i = 0; i < eq.n(); ++i) {
    if (i == j) continue;
    const Complex d = eq.points[j] - eq.points[i];
    const Complex a = eq.double_pole(i), b = eq.residues[i];
    Complex dpow = d;  // d^(r-1)
    double sign = 1.0;
    for (std::size_t r = 2; r <= count; ++r) {
      x[r] += sign * (a * static_cast<double>(r - 1) / (dpow * d) + b / dpow);
      dpow *= d;
      sign = -sign;
    }
  }
  return x;
}

/// Solve the three regularity-at-infinity relations for residues 1, 2 and n given the
/// free residues 3..n-1 (indices 2..n-2).
inline ComplexVector residue_constraints(const ComplexVector& points, const ComplexVector& exps,
                                         const ComplexVector& beta_free) {
  const std::size_t n = points.size();
  if (n < 3 || exps.size() != n || beta_free.size() != n - 3)
    throw validation_error("size_mismatch", "need n >= 3 points, n exponents and n - 3 free residues");
  const std::array<std::size_t, 3> pivots{0, 1, n - 1};
  Eigen::Matrix3cd m;
  Eigen::Vector3cd rhs = Eigen::Vector3cd::Zero();
  for (std::size_t c = 0; c < 3; ++c) {
    const Complex z = points[pivots[c]];
    m(0, static_cast<Eigen::Index>(c)) = 1.0;
    m(1, static_cast<Eigen::Index>(c)) = z;
    m(2, static_cast<Eigen::Index>(c)) = z * z;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Complex a = (1.0 - exps[j] * exps[j]) / 4.0;
    const Complex z = points[j];
    rhs(1) -= a;
    rhs(2) -= 2.0 * z * a;
    if (j >= 2 && j + 1 < n) {
      const Complex b = beta_free[j - 2];
      rhs(0) -= b;
      rhs(1) -= b * z;
      rhs(2) -= b * z * z;
    }
  }
  const Complex z1 = points[0], z2 = points[1], zn = points[n - 1];
  const double vscale = std::max({1.0, std::abs(z1), std::abs(z2), std::abs(zn)});
  if (std::abs((z2 - z1) * (zn - z1) * (zn - z2)) < 1e-14 * vscale * vscale * vscale)
    throw validation_error("singular_system", "pivot points z_1, z_2, z_n must be distinct");
  const Eigen::Vector3cd sol = m.partialPivLu().solve(rhs);
  ComplexVector beta(n);
  beta[0] = sol(0);
  beta[1] = sol(1);
  beta[n - 1] = sol(2);
  for (std::size_t j = 2; j + 1 < n; ++j) beta[j] = beta_free[j - 2];
  return beta;
}

}  // namespace fuchsian
