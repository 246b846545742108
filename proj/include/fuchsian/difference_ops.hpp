#pragma once

#include <functional>

#include "fuchsian/equation.hpp"
#include "fuchsian/gamma.hpp"

namespace fuchsian {

/// b^x p(x)
struct ExpTerm {
  Complex base;
  Polynomial poly;
};

/// Exponential-polynomial sequence u(x) = sum_t b_t^x p_t(x), bases pairwise distinct.
/// b^x uses the principal logarithm; only integer shifts of x ever enter the algebra.
class ExpPolySeq {
 public:
  ExpPolySeq() = default;
  ExpPolySeq(Complex base, Polynomial poly) { add(base, std::move(poly)); }

  static ExpPolySeq constant(Complex c) { return ExpPolySeq(1.0, Polynomial::constant(c)); }
  static ExpPolySeq polynomial(Polynomial p) { return ExpPolySeq(1.0, std::move(p)); }

  const std::vector<ExpTerm>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add(Complex base, Polynomial poly) {
    if (base == Complex(0.0)) throw validation_error("zero_base", "exponential bases must be nonzero");
    for (auto& t : terms_)
      if (std::abs(t.base - base) <= 1e-12 * std::abs(base)) {
        t.poly += poly;
        prune();
        return;
      }
    if (!poly.is_zero()) terms_.push_back({base, std::move(poly)});
  }

  Complex operator()(Complex x) const {
    Complex acc = 0.0;
    for (const auto& t : terms_) acc += std::exp(x * std::log(t.base)) * t.poly(x);
    return acc;
  }

  /// (tau^s u)(x) = u(x + s).
  ExpPolySeq shift(int s) const {
    ExpPolySeq out;
    for (const auto& t : terms_) out.terms_.push_back({t.base, t.poly.shifted(static_cast<double>(s)) * std::pow(t.base, s)});
    return out;
  }

  /// Largest coefficient magnitude over all terms, for relative zero tests.
  double scale() const {
    double s = 0.0;
    for (const auto& t : terms_) s = std::max(s, t.poly.max_abs_coeff());
    return s;
  }

  friend ExpPolySeq operator+(ExpPolySeq a, const ExpPolySeq& b) {
    for (const auto& t : b.terms_) a.add(t.base, t.poly);
    return a;
  }
  friend ExpPolySeq operator-(const ExpPolySeq& a, const ExpPolySeq& b) { return a + b * Complex(-1.0); }
  friend ExpPolySeq operator*(ExpPolySeq a, Complex s) {
    if (s == Complex(0.0)) return {};
    for (auto& t : a.terms_) t.poly = t.poly * s;
    return a;
  }
  friend ExpPolySeq operator*(const ExpPolySeq& a, const Polynomial& p) { return a * polynomial(p); }
  friend ExpPolySeq operator*(const ExpPolySeq& a, const ExpPolySeq& b) {
    ExpPolySeq out;
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) out.add(s.base * t.base, s.poly * t.poly);
    return out;
  }

 private:
  void prune() {
    std::erase_if(terms_, [](const ExpTerm& t) { return t.poly.is_zero(); });
  }

  std::vector<ExpTerm> terms_;
};

/// Exact quotient num/den of two sequences, kept unreduced.
struct SeqRatio {
  ExpPolySeq num = ExpPolySeq::constant(0.0);
  ExpPolySeq den = ExpPolySeq::constant(1.0);

  static SeqRatio of(ExpPolySeq n) { return {std::move(n), ExpPolySeq::constant(1.0)}; }
  static SeqRatio polynomial(Polynomial p) { return of(ExpPolySeq::polynomial(std::move(p))); }

  Complex operator()(Complex x) const { return num(x) / den(x); }
  SeqRatio shift(int s) const { return {num.shift(s), den.shift(s)}; }
  bool is_zero() const { return num.is_zero(); }

  friend SeqRatio operator*(const SeqRatio& a, const SeqRatio& b) { return {a.num * b.num, a.den * b.den}; }
  friend SeqRatio operator+(const SeqRatio& a, const SeqRatio& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
  friend SeqRatio operator-(const SeqRatio& a) { return {a.num * Complex(-1.0), a.den}; }
};

/// sum_j coeffs[j](x) tau^(low + j).
struct DiffOp {
  int low = 0;
  std::vector<SeqRatio> coeffs;

  int high() const { return low + static_cast<int>(coeffs.size()) - 1; }
  int order() const { return high() - low; }

  const SeqRatio& at(int power) const { return coeffs[static_cast<std::size_t>(power - low)]; }

  /// Numeric action on any function of x.
  Complex apply_at(Complex x, const std::function<Complex(Complex)>& f) const {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) acc += coeffs[j](x) * f(x + static_cast<double>(low + static_cast<int>(j)));
    return acc;
  }

  /// Sum of |c_j(x) f(x+j)|, the natural size for relative residuals.
  double magnitude_at(Complex x, const std::function<Complex(Complex)>& f) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
      acc += std::abs(coeffs[j](x) * f(x + static_cast<double>(low + static_cast<int>(j))));
    return acc;
  }

  /// Exact action on an exponential-polynomial sequence.
  SeqRatio apply(const ExpPolySeq& f) const {
    SeqRatio acc = SeqRatio::of(ExpPolySeq());
    for (std::size_t j = 0; j < coeffs.size(); ++j)
      acc = acc + coeffs[j] * SeqRatio::of(f.shift(low + static_cast<int>(j)));
    return acc;
  }
};

/// a * b as operators: (a b) f = a (b f).
inline DiffOp compose(const DiffOp& a, const DiffOp& b) {
  DiffOp out;
  out.low = a.low + b.low;
  out.coeffs.assign(static_cast<std::size_t>(a.order() + b.order() + 1), SeqRatio::of(ExpPolySeq()));
  for (int i = a.low; i <= a.high(); ++i)
    for (int j = b.low; j <= b.high(); ++j) {
      auto& slot = out.coeffs[static_cast<std::size_t>(i + j - out.low)];
      slot = slot + a.at(i) * b.at(j).shift(i);
    }
  return out;
}

/// Image under the antiautomorphism tau -> tau^{-1}, x -> x:
/// sum c_j(x) tau^j  ->  sum tau^{-j} c_j(x) = sum c_j(x - j) tau^{-j}.
inline DiffOp formal_conjugate(const DiffOp& d) {
  DiffOp out;
  out.low = -d.high();
  for (int p = d.high(); p >= d.low; --p) out.coeffs.push_back(d.at(p).shift(-p));
  return out;
}

/// Wr_k[u_1..u_k] = det(tau^(j-1) u_i), expanded along the first column.
inline ExpPolySeq casorati(const std::vector<ExpPolySeq>& us) {
  const std::size_t k = us.size();
  if (k == 0) return ExpPolySeq::constant(1.0);
  std::vector<std::vector<ExpPolySeq>> m(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m[i].push_back(us[i].shift(static_cast<int>(j)));
  std::function<ExpPolySeq(std::vector<std::size_t>, std::size_t)> minor = [&](std::vector<std::size_t> rows,
                                                                               std::size_t col) -> ExpPolySeq {
    if (rows.size() == 1) return m[rows[0]][col];
    ExpPolySeq acc;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::vector<std::size_t> rest;
      for (std::size_t q = 0; q < rows.size(); ++q)
        if (q != r) rest.push_back(rows[q]);
      const ExpPolySeq term = m[rows[r]][col] * minor(rest, col + 1);
      acc = (r % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
  };
  std::vector<std::size_t> all(k);
  for (std::size_t i = 0; i < k; ++i) all[i] = i;
  return minor(all, 0);
}

namespace detail {

/// Determinant of a square matrix of sequences by cofactor expansion.
inline ExpPolySeq seq_determinant(const std::vector<std::vector<ExpPolySeq>>& m) {
  const std::size_t k = m.size();
  if (k == 0) return ExpPolySeq::constant(1.0);
  if (k == 1) return m[0][0];
  ExpPolySeq acc;
  for (std::size_t r = 0; r < k; ++r) {
    std::vector<std::vector<ExpPolySeq>> sub;
    for (std::size_t q = 0; q < k; ++q)
      if (q != r) sub.emplace_back(m[q].begin() + 1, m[q].end());
    const ExpPolySeq term = m[r][0] * seq_determinant(sub);
    acc = (r % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

/// Relative zero test for a sequence that should vanish identically: sampled on a
/// fixed set of points against the size of its terms.
inline bool vanishes(const ExpPolySeq& u, double tol = 1e-10) {
  if (u.is_zero()) return true;
  double size = 0.0, worst = 0.0;
  for (int i = 0; i < 7; ++i) {
    const Complex x(0.31 + 1.17 * i, 0.13 * i);
    double mag = 0.0;
    for (const auto& t : u.terms()) {
      Complex pw = 1.0;
      double s = 0.0;
      for (const auto& c : t.poly.coeffs()) {
        s += std::abs(c * pw);
        pw *= x;
      }
      mag += std::abs(std::exp(x * std::log(t.base))) * s;
    }
    size = std::max(size, mag);
    worst = std::max(worst, std::abs(u(x)));
  }
  return worst <= tol * size;
}

}  // namespace detail

/// The unique tau^(k+1) + sum_{j=1..k} K_j tau^j + F annihilating u_1..u_k. The
/// coefficients come out exactly from Cramer's rule over the sequence algebra:
/// K_j = det_j / (R tau(Wr_k)) where F = P/R and det_j has column j replaced by
/// -(R u_i(x+k+1) + P u_i(x)).
inline DiffOp build_D(const std::vector<ExpPolySeq>& us, const SeqRatio& F) {
  const std::size_t k = us.size();
  const ExpPolySeq wr = casorati(us);
  if (detail::vanishes(wr)) throw validation_error("dependent_family", "Casorati determinant vanishes identically");
  const ExpPolySeq tau_wr = wr.shift(1);
  DiffOp d;
  d.low = 0;
  d.coeffs.push_back(F);
  std::vector<ExpPolySeq> rhs;
  for (const auto& u : us) rhs.push_back((F.den * u.shift(static_cast<int>(k) + 1) + F.num * u) * Complex(-1.0));
  for (std::size_t j = 1; j <= k; ++j) {
    std::vector<std::vector<ExpPolySeq>> m(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t c = 1; c <= k; ++c) m[i].push_back(c == j ? rhs[i] : us[i].shift(static_cast<int>(c)));
    d.coeffs.push_back({detail::seq_determinant(m), F.den * tau_wr});
  }
  d.coeffs.push_back(SeqRatio::of(ExpPolySeq::constant(1.0)));
  return d;
}

/// D f = [tau(Wr_{k+1}[u, f]) + (-1)^k F Wr_{k+1}[u, f]] / tau(Wr_k[u]).
inline SeqRatio apply_D_formula(const std::vector<ExpPolySeq>& us, const SeqRatio& F, const ExpPolySeq& f) {
  std::vector<ExpPolySeq> ext = us;
  ext.push_back(f);
  const ExpPolySeq w1 = casorati(ext);
  const ExpPolySeq w0 = casorati(us);
  const Complex sign = us.size() % 2 == 0 ? 1.0 : -1.0;
  return {F.den * w1.shift(1) + F.num * w1 * sign, F.den * w0.shift(1)};
}

/// g_1..g_{k+1} with D = (tau - g_{k+1}) ... (tau - g_1):
/// g_i = tau(f_i)/f_i, f_i = Wr_i/Wr_{i-1}, and g_{k+1} = (-1)^(k+1) F Wr_k / tau(Wr_k).
inline std::vector<SeqRatio> factorize(const std::vector<ExpPolySeq>& us, const SeqRatio& F) {
  const std::size_t k = us.size();
  std::vector<ExpPolySeq> wr{ExpPolySeq::constant(1.0)};
  for (std::size_t i = 1; i <= k; ++i) {
    wr.push_back(casorati(std::vector<ExpPolySeq>(us.begin(), us.begin() + static_cast<std::ptrdiff_t>(i))));
    if (detail::vanishes(wr.back()))
      throw validation_error("nongeneric_flag", "an intermediate Casorati determinant vanishes identically");
  }
  std::vector<SeqRatio> g;
  for (std::size_t i = 1; i <= k; ++i) g.push_back({wr[i].shift(1) * wr[i - 1], wr[i] * wr[i - 1].shift(1)});
  const Complex sign = (k + 1) % 2 == 0 ? 1.0 : -1.0;
  g.push_back({F.num * wr[k] * sign, F.den * wr[k].shift(1)});
  return g;
}

/// (tau - g_{k+1}) ... (tau - g_1) as one operator.
inline DiffOp expand_factors(const std::vector<SeqRatio>& g) {
  DiffOp acc{0, {SeqRatio::of(ExpPolySeq::constant(1.0))}};
  for (const auto& gi : g) {
    const DiffOp factor{0, {-gi, SeqRatio::of(ExpPolySeq::constant(1.0))}};
    acc = compose(factor, acc);
  }
  return acc;
}

/// x^2 A(tau) - x B(tau) + C(tau) from polynomial coefficient lists (lowest degree first).
inline DiffOp bispectral_dual(const Polynomial& A, const Polynomial& B, const Polynomial& C) {
  const std::size_t top = std::max({A.size(), B.size(), C.size()});
  DiffOp d;
  for (std::size_t j = 0; j < top; ++j) d.coeffs.push_back(SeqRatio::polynomial(Polynomial{C[j], -B[j], A[j]}));
  return d;
}

inline DiffOp bispectral_dual(const CanonicalForm3& cf) { return bispectral_dual(cf.A, cf.B, cf.C); }

/// Solution of the formal conjugate of the dual of the main equation:
/// v(x) = (a_1..a_k)^(-x-1) Gamma(x-gamma) Gamma(x-delta) / (Gamma(x+1) Gamma(x-alpha)) det(u_i(x+j)).
/// Throws at Gamma poles of the numerator; callers pick sample points away from them.
inline std::function<Complex(Complex)> dual_solution(const std::vector<ExpPolySeq>& us, const ComplexVector& bases,
                                                     Complex alpha, Complex gamma, Complex delta) {
  Complex prod = 1.0;
  for (auto a : bases) prod *= a;
  const ExpPolySeq det = casorati(us).shift(1);
  return [=](Complex x) {
    return std::exp((-x - 1.0) * std::log(prod)) * gamma_ratio({x - gamma, x - delta}, {x + 1.0, x - alpha}) * det(x);
  };
}

/// F(x) = c prod(x - r_i) / prod(x - s_i): a rational first coefficient in factored form.
struct FactoredRational {
  Complex c = 1.0;
  ComplexVector zeros, poles;

  SeqRatio as_ratio() const {
    return {ExpPolySeq::polynomial(Polynomial::from_roots(zeros) * c), ExpPolySeq::polynomial(Polynomial::from_roots(poles))};
  }
  Complex operator()(Complex x) const {
    Complex v = c;
    for (auto r : zeros) v *= x - r;
    for (auto s : poles) v /= x - s;
    return v;
  }
};

/// For D = tau^(k+1) + ... + F annihilating u_1..u_k, v = tau(Wr_k) / (F w) solves the formal
/// conjugate, where w(x+1) = (-1)^(k+1) F(x) w(x), i.e.
/// w(x) = ((-1)^(k+1) c)^x prod Gamma(x - r_i) / prod Gamma(x - s_i).
inline std::function<Complex(Complex)> conjugate_solution(const std::vector<ExpPolySeq>& us, const FactoredRational& F) {
  const ExpPolySeq tau_wr = casorati(us).shift(1);
  const Complex base = (us.size() % 2 == 0 ? -1.0 : 1.0) * F.c;
  return [=](Complex x) {
    ComplexVector num, den;
    for (auto r : F.zeros) num.push_back(x - r);
    for (auto s : F.poles) den.push_back(x - s);
    const Complex w = std::exp(x * std::log(base)) * gamma_ratio(num, den);
    return tau_wr(x) / (F(x) * w);
  };
}

}  // namespace fuchsian
