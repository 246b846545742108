#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "fuchsian/error.hpp"
#include "fuchsian/numeric.hpp"

namespace fuchsian {

/// Dense univariate polynomial with complex coefficients, lowest degree first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(ComplexVector coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<Complex> coeffs) : c_(coeffs) { trim(); }

  static Polynomial constant(Complex c) { return Polynomial(ComplexVector{c}); }

  static Polynomial monomial(std::size_t degree, Complex c = 1.0) {
    ComplexVector v(degree + 1, 0.0);
    v[degree] = c;
    return Polynomial(std::move(v));
  }

  /// Monic polynomial with the given roots.
  static Polynomial from_roots(std::span<const Complex> roots) {
    Polynomial p = constant(1.0);
    for (const auto& r : roots) p = p * Polynomial{-r, 1.0};
    return p;
  }

  /// Newton divided-difference interpolation through (nodes[i], values[i]).
  static Polynomial interpolate(std::span<const Complex> nodes, std::span<const Complex> values) {
    const std::size_t n = nodes.size();
    if (n != values.size() || n == 0)
      throw validation_error("interpolation_size", "interpolation needs matching, nonempty node/value lists");
    ComplexVector dd(values.begin(), values.end());
    for (std::size_t level = 1; level < n; ++level)
      for (std::size_t i = n - 1; i >= level; --i) {
        const Complex h = nodes[i] - nodes[i - level];
        if (h == Complex(0.0)) throw validation_error("interpolation_nodes", "interpolation nodes must be distinct");
        dd[i] = (dd[i] - dd[i - 1]) / h;
      }
    Polynomial p = constant(dd[n - 1]);
    for (std::size_t i = n - 1; i-- > 0;) p = p * Polynomial{-nodes[i], 1.0} + constant(dd[i]);
    return p;
  }

  const ComplexVector& coeffs() const noexcept { return c_; }
  std::size_t size() const noexcept { return c_.size(); }

  /// Exact degree; -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }

  /// Degree after discarding trailing coefficients below tol * max|c|.
  int degree(double tol) const {
    const double scale = max_abs(c_);
    for (int i = degree(); i >= 0; --i)
      if (std::abs(c_[static_cast<std::size_t>(i)]) > tol * scale) return i;
    return -1;
  }

  bool is_zero() const noexcept { return c_.empty(); }

  Complex operator[](std::size_t i) const noexcept { return i < c_.size() ? c_[i] : Complex(0.0); }
  Complex leading() const noexcept { return c_.empty() ? Complex(0.0) : c_.back(); }
  double max_abs_coeff() const { return max_abs(c_); }

  Complex operator()(Complex x) const noexcept {
    Complex acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    ComplexVector d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
    return Polynomial(std::move(d));
  }

  /// q(x) = p(x + s).
  Polynomial shifted(Complex s) const {
    ComplexVector out(c_);
    const std::size_t n = out.size();
    // repeated synthetic division (Taylor shift)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = n - 1; j > i; --j) out[j - 1] += s * out[j];
    return Polynomial(std::move(out));
  }

  Polynomial monic() const {
    if (is_zero()) throw validation_error("zero_polynomial", "cannot normalize the zero polynomial");
    return *this * (1.0 / leading());
  }

  /// Drop trailing coefficients below tol * max|c|.
  Polynomial truncated(double tol) const {
    ComplexVector v(c_.begin(), c_.begin() + (degree(tol) + 1));
    return Polynomial(std::move(v));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    ComplexVector v(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    ComplexVector v(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator-(const Polynomial& a) { return a * Complex(-1.0); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    ComplexVector v(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(const Polynomial& a, Complex s) {
    ComplexVector v(a.c_);
    for (auto& c : v) c *= s;
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(Complex s, const Polynomial& a) { return a * s; }

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == Complex(0.0)) c_.pop_back();
  }

  ComplexVector c_;
};

/// Largest coefficient gap between two polynomials, relative to their size.
inline double relative_distance(const Polynomial& a, const Polynomial& b) {
  const std::size_t n = std::max(a.size(), b.size());
  double diff = 0.0;
  for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  return diff / std::max({1e-300, a.max_abs_coeff(), b.max_abs_coeff()});
}

}  // namespace fuchsian
