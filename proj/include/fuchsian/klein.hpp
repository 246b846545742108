#pragma once

#include "fuchsian/difference_ops.hpp"

namespace fuchsian {

/// F'' - (a0/z + a1/(z-1)) F' + g*de/(z(z-1)) F = 0 with a1 = beta + d.
struct HGEquation {
  Complex a0, a1, g, de;

  std::pair<Complex, Complex> coefficients(Complex z) const {
    return {-(a0 / z + a1 / (z - 1.0)), g * de / (z * (z - 1.0))};
  }
  ComplexVector singular_points() const { return {0.0, 1.0}; }
};

inline HGEquation hypergeometric_target(const EquationA& eq) {
  return {eq.alpha, eq.beta + static_cast<double>(eq.degree_d()), eq.gamma, eq.delta};
}

/// sum_n c_n z^(n + offset), truncated at n = T.
struct PowerSeriesSol {
  Complex offset = 0.0;
  ComplexVector coeffs;

  std::size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

  /// Value and first derivative at z, principal branch of z^offset.
  std::pair<Complex, Complex> evaluate(Complex z) const {
    Complex s = 0.0, ds = 0.0;
    for (std::size_t n = coeffs.size(); n-- > 0;) {
      s = s * z + coeffs[n];
      ds = ds * z + (static_cast<double>(n) + offset) * coeffs[n];
    }
    const Complex zp = offset == Complex(0.0) ? Complex(1.0) : std::exp(offset * std::log(z));
    return {zp * s, zp * ds / z};
  }
};

/// Frobenius solutions of the hypergeometric target at 0 by the term ratio
/// c_{n+1}/c_n = (n+xi-g)(n+xi-de) / ((n+1+xi)(n+xi-a0)), xi in {0, 1 + a0}:
///   branch 0: c_n = Gamma(n-g) Gamma(n-de) / (Gamma(n+1) Gamma(n-a0))
///   branch 1: c_n = Gamma(n+1+a0-g) Gamma(n+1+a0-de) / (Gamma(n+2+a0) Gamma(n+1)).
inline PowerSeriesSol hg_series(const HGEquation& hg, int branch, std::size_t T) {
  PowerSeriesSol s;
  const Complex xi = branch == 0 ? Complex(0.0) : 1.0 + hg.a0;
  if (branch == 0) {
    if (near_integer(hg.a0) && *near_integer(hg.a0) >= 0)
      throw validation_error("nongeneric_parameters", "alpha is a nonnegative integer; first Frobenius series undefined");
    if (is_gamma_pole(-hg.g) || is_gamma_pole(-hg.de))
      throw validation_error("nongeneric_parameters", "gamma or delta is a nonnegative integer; series undefined");
    s.coeffs.push_back(gamma_ratio({-hg.g, -hg.de}, {-hg.a0}));
  } else if (branch == 1) {
    if (is_gamma_pole(1.0 + hg.a0 - hg.g) || is_gamma_pole(1.0 + hg.a0 - hg.de) || is_gamma_pole(2.0 + hg.a0))
      throw validation_error("nongeneric_parameters", "second Frobenius series undefined at these parameters");
    s.coeffs.push_back(gamma_ratio({1.0 + hg.a0 - hg.g, 1.0 + hg.a0 - hg.de}, {2.0 + hg.a0}));
  } else {
    throw validation_error("bad_branch", "branch must be 0 or 1");
  }
  s.offset = xi;
  for (std::size_t n = 0; n < T; ++n) {
    const Complex m = static_cast<double>(n) + xi;
    s.coeffs.push_back(s.coeffs.back() * (m - hg.g) * (m - hg.de) / ((m + 1.0) * (m - hg.a0)));
  }
  return s;
}

/// Q(z d/dz) acting on a series: c_n -> Q(n + offset) c_n.
inline PowerSeriesSol apply_theta_polynomial(const Polynomial& q, PowerSeriesSol s) {
  for (std::size_t n = 0; n < s.coeffs.size(); ++n) s.coeffs[n] *= q(static_cast<double>(n) + s.offset);
  return s;
}

/// Series of z p(z) and z^2 q(z) at 0 through order T for the main equation.
inline std::pair<ComplexVector, ComplexVector> theta_coefficient_series(const EquationA& eq, std::size_t T) {
  // z/(z-a) = -sum_{n>=1} (z/a)^n
  ComplexVector zp(T + 1, 0.0);
  zp[0] = -eq.alpha;
  for (std::size_t n = 1; n <= T; ++n) {
    zp[n] += eq.beta;
    for (std::size_t i = 0; i < eq.k(); ++i) zp[n] += static_cast<double>(eq.mults[i]) * std::pow(eq.points[i], -static_cast<int>(n));
  }
  // z N(z) / ((z-1) prod(z-a_i)), each 1/(z-a) = -(1/a) sum (z/a)^n
  ComplexVector q(T + 1, 0.0);
  const Polynomial num = eq.numerator();
  for (std::size_t n = 0; n < num.size() && n + 1 <= T; ++n) q[n + 1] = num[n];
  ComplexVector roots{1.0};
  roots.insert(roots.end(), eq.points.begin(), eq.points.end());
  for (const auto& a : roots) {
    ComplexVector next(T + 1, 0.0);
    for (std::size_t n = 0; n <= T; ++n) {
      const Complex geo = -std::pow(a, -static_cast<int>(n) - 1);
      for (std::size_t m = 0; m + n <= T; ++m) next[m + n] += q[m] * geo;
    }
    q = std::move(next);
  }
  return {zp, q};
}

/// Formal residual of the main equation on a truncated series: the operator is applied
/// as theta^2 - theta + (z p) theta + z^2 q, and for each order m <= T-2 the residual
/// coefficient is divided by the sum of magnitudes of the terms that produce it.
inline double equation_residual(const EquationA& eq, const PowerSeriesSol& s, std::size_t through = 0) {
  const std::size_t T = s.order();
  if (T < 2) throw validation_error("series_too_short", "series needs at least three coefficients");
  const std::size_t top = through == 0 ? T - 2 : std::min(through, T);
  const auto [zp, zq] = theta_coefficient_series(eq, top);
  double worst = 0.0;
  for (std::size_t m = 0; m <= top; ++m) {
    const Complex e = static_cast<double>(m) + s.offset;
    Complex r = e * (e - 1.0) * s.coeffs[m];
    double size = std::abs(r);
    for (std::size_t j = 0; j <= m; ++j) {
      const Complex c = s.coeffs[m - j];
      const Complex t = zp[j] * (static_cast<double>(m - j) + s.offset) * c + zq[j] * c;
      r += t;
      size += std::abs(zp[j] * (static_cast<double>(m - j) + s.offset) * c) + std::abs(zq[j] * c);
    }
    if (size > 1e-300) worst = std::max(worst, std::abs(r) / size);
  }
  return worst;
}

/// Polynomial coefficient of a DiffOp entry that is a plain polynomial in x.
inline Polynomial polynomial_entry(const SeqRatio& c) {
  const auto pure = [](const ExpPolySeq& u) -> std::optional<Polynomial> {
    if (u.is_zero()) return Polynomial{};
    if (u.terms().size() != 1 || std::abs(u.terms()[0].base - 1.0) > 1e-14) return std::nullopt;
    return u.terms()[0].poly;
  };
  const auto n = pure(c.num), d = pure(c.den);
  if (!n || !d || d->degree() != 0) throw validation_error("not_polynomial", "operator coefficient is not a polynomial");
  return *n * (1.0 / (*d)[0]);
}

struct KernelResult {
  Polynomial p;
  int dimension = 0;
  ComplexVector singular_values;  // of the linear system, descending
};

/// Degree-m polynomial p with D (a^x p(x)) = 0: substituting gives
/// a^x sum_j a^j c_j(x) p(x + j), a polynomial identity in x that is linear in p.
inline KernelResult exp_poly_kernel(const DiffOp& d5, Complex a, int m, double rank_tol = 1e-8) {
  if (m < 0) throw validation_error("bad_multiplicity", "degree must be nonnegative");
  std::vector<Polynomial> c;
  int cdeg = 0;
  for (const auto& e : d5.coeffs) {
    c.push_back(polynomial_entry(e));
    cdeg = std::max(cdeg, c.back().degree());
  }
  const auto rows = static_cast<Eigen::Index>(m + cdeg + 1);
  Eigen::MatrixXcd sys = Eigen::MatrixXcd::Zero(rows, m + 1);
  for (int r = 0; r <= m; ++r) {
    Polynomial col;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const int shift = d5.low + static_cast<int>(j);
      col += c[j] * Polynomial::monomial(static_cast<std::size_t>(r)).shifted(static_cast<double>(shift)) * std::pow(a, shift);
    }
    for (std::size_t i = 0; i < col.size(); ++i) sys(static_cast<Eigen::Index>(i), r) = col[i];
  }
  // column scaling keeps x^r columns comparable before the rank decision
  Eigen::VectorXd scale(m + 1);
  for (int r = 0; r <= m; ++r) {
    scale(r) = std::max(1e-300, sys.col(r).norm());
    sys.col(r) /= scale(r);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  KernelResult out;
  for (Eigen::Index i = 0; i < sv.size(); ++i) out.singular_values.emplace_back(sv(i), 0.0);
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * top) ++rank;
  out.dimension = (m + 1) - rank;
  if (out.dimension == 0)
    throw numerical_error("not_apparent", "no exponential-polynomial solution: singularity not apparent or parameters degenerate");
  if (out.dimension > 1) throw numerical_error("degenerate_parameters", "solution space of dimension > 1");
  const Eigen::VectorXcd v = svd.matrixV().col(m);
  ComplexVector coeffs(static_cast<std::size_t>(m + 1));
  for (int r = 0; r <= m; ++r) coeffs[static_cast<std::size_t>(r)] = v(r) / scale(r);
  Polynomial p(coeffs);
  if (p.degree(1e-10) != m) throw numerical_error("degree_deficient", "kernel polynomial has lower degree than the multiplicity");
  out.p = p.monic();
  return out;
}

/// Q(x) = det(a_i^(j-1) p_i(x+j)), i, j = 1..k, by evaluation at d+1 nodes and interpolation; monic.
inline Polynomial klein_polynomial(const std::vector<Polynomial>& ps, const ComplexVector& as) {
  const std::size_t k = ps.size();
  if (as.size() != k) throw validation_error("size_mismatch", "one base per polynomial");
  int d = 0;
  for (const auto& p : ps) d += p.degree();
  ComplexVector nodes, values;
  for (int t = 0; t <= d; ++t) {
    const Complex x(static_cast<double>(t) - 0.5 * d, 0.0);
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 1; j <= k; ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j - 1)) =
            std::pow(as[i], static_cast<int>(j) - 1) * ps[i](x + static_cast<double>(j));
    nodes.push_back(x);
    values.push_back(k == 0 ? Complex(1.0) : m.determinant());
  }
  const Polynomial q = Polynomial::interpolate(nodes, values);
  if (q.degree(1e-9) != d) throw numerical_error("degenerate_determinant", "determinant polynomial has degree below d");
  return q.truncated(0.0).monic();
}

struct KleinData {
  EquationA source;
  HGEquation target;
  std::vector<Polynomial> ps;
  Polynomial Q;
  std::vector<int> kernel_dimensions;
};

/// Full construction for an equation whose a_i are all apparent; refuses when the
/// genericity condition on gamma, delta fails.
inline KleinData klein_construct(const EquationA& eq, double rank_tol = 1e-8) {
  if (!eq.generic_0d)
    throw validation_error("nongeneric_0d", "gamma, delta, gamma-alpha-1 or delta-alpha-1 lies in {0..d-1}");
  KleinData out;
  out.source = eq;
  out.target = hypergeometric_target(eq);
  const DiffOp d5 = bispectral_dual(to_canonical_form3(eq));
  for (std::size_t i = 0; i < eq.k(); ++i) {
    auto ker = exp_poly_kernel(d5, eq.points[i], eq.mults[i], rank_tol);
    out.ps.push_back(ker.p);
    out.kernel_dimensions.push_back(ker.dimension);
  }
  out.Q = eq.k() == 0 ? Polynomial::constant(1.0) : klein_polynomial(out.ps, eq.points);
  return out;
}

/// f_1 = Q(theta) F_1 and f_2 = Q(theta) F_2.
inline std::pair<PowerSeriesSol, PowerSeriesSol> klein_solutions(const KleinData& kd, std::size_t T) {
  return {apply_theta_polynomial(kd.Q, hg_series(kd.target, 0, T)), apply_theta_polynomial(kd.Q, hg_series(kd.target, 1, T))};
}

inline std::size_t default_series_order(const EquationA& eq) {
  return static_cast<std::size_t>(std::max(60, 4 * eq.degree_d()));
}

}  // namespace fuchsian
