#pragma once

#include <vector>

#include "fuchsian/polynomial.hpp"

namespace fuchsian {

/// Principal part at one pole: sum_r coeffs[r-1] / (z - location)^r.
struct PolePart {
  Complex location;
  ComplexVector coeffs;

  int order(double tol = 0.0) const {
    const double scale = std::max(1.0, max_abs(coeffs));
    for (int r = static_cast<int>(coeffs.size()); r > 0; --r)
      if (std::abs(coeffs[static_cast<std::size_t>(r - 1)]) > tol * scale) return r;
    return 0;
  }

  Complex coeff(int r) const {
    return r >= 1 && static_cast<std::size_t>(r) <= coeffs.size() ? coeffs[static_cast<std::size_t>(r - 1)]
                                                                   : Complex(0.0);
  }
};

/// Rational function kept in partial-fraction form: principal parts plus a polynomial part.
class PartialFractions {
 public:
  PartialFractions() = default;
  PartialFractions(std::vector<PolePart> poles, Polynomial poly) : poles_(std::move(poles)), poly_(std::move(poly)) {}

  const std::vector<PolePart>& poles() const noexcept { return poles_; }
  const Polynomial& polynomial_part() const noexcept { return poly_; }

  /// Index of the pole at `s`, or -1.
  int find(Complex s, double tol = 1e-12) const {
    for (std::size_t i = 0; i < poles_.size(); ++i)
      if (std::abs(poles_[i].location - s) <= tol * std::max(1.0, std::abs(s))) return static_cast<int>(i);
    return -1;
  }

  Complex coeff(Complex s, int r) const {
    const int i = find(s);
    return i < 0 ? Complex(0.0) : poles_[static_cast<std::size_t>(i)].coeff(r);
  }

  /// Add c / (z - s)^r.
  void add_term(Complex s, int r, Complex c) {
    int i = find(s);
    if (i < 0) {
      poles_.push_back({s, {}});
      i = static_cast<int>(poles_.size()) - 1;
    }
    auto& part = poles_[static_cast<std::size_t>(i)].coeffs;
    if (part.size() < static_cast<std::size_t>(r)) part.resize(static_cast<std::size_t>(r), 0.0);
    part[static_cast<std::size_t>(r - 1)] += c;
  }

  void add_polynomial(const Polynomial& p) { poly_ += p; }

  int max_order(double tol = 0.0) const {
    int m = 0;
    for (const auto& p : poles_) m = std::max(m, p.order(tol));
    return m;
  }

  Complex operator()(Complex z) const {
    Complex acc = poly_(z);
    for (const auto& p : poles_) {
      const Complex inv = 1.0 / (z - p.location);
      Complex pw = inv;
      for (const auto& c : p.coeffs) {
        acc += c * pw;
        pw *= inv;
      }
    }
    return acc;
  }

  PartialFractions derivative() const {
    PartialFractions out;
    for (const auto& p : poles_)
      for (std::size_t r = 1; r <= p.coeffs.size(); ++r)
        out.add_term(p.location, static_cast<int>(r) + 1, -static_cast<double>(r) * p.coeffs[r - 1]);
    out.poly_ = poly_.derivative();
    return out;
  }

  friend PartialFractions operator+(PartialFractions a, const PartialFractions& b) {
    for (const auto& p : b.poles_)
      for (std::size_t r = 1; r <= p.coeffs.size(); ++r) a.add_term(p.location, static_cast<int>(r), p.coeffs[r - 1]);
    a.poly_ += b.poly_;
    return a;
  }

  friend PartialFractions operator*(PartialFractions a, Complex s) {
    for (auto& p : a.poles_)
      for (auto& c : p.coeffs) c *= s;
    a.poly_ = a.poly_ * s;
    return a;
  }

 private:
  std::vector<PolePart> poles_;
  Polynomial poly_;
};

}  // namespace fuchsian
