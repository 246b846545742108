#pragma once

#include <span>

#include "fuchsian/equation.hpp"

namespace fuchsian {

/// Determinant Y_ell(x_1..x_ell) of the ell x ell lower Hessenberg matrix with x_1 on the
/// diagonal, x_2 below it and so on, and r(r - ell) on the superdiagonal (row r, 1-based).
///
/// Expanded with the Hessenberg recurrence
///   D_m = sum_{i=1..m} (-1)^(m-i) x_{m-i+1} (prod_{r=i}^{m-1} r(r-ell)) D_{i-1},
/// so T only needs +, - and * (Complex for values, Jet for gradients).
template <class T>
T apparency_determinant(int ell, std::span<const T> x) {
  if (ell < 0 || x.size() < static_cast<std::size_t>(ell))
    throw validation_error("size_mismatch", "apparency determinant needs ell coefficients");
  std::vector<T> dets;
  dets.reserve(static_cast<std::size_t>(ell) + 1);
  dets.push_back(T(1.0));
  for (int m = 1; m <= ell; ++m) {
    T acc = T(0.0);
    double chain = 1.0;  // prod_{r=i}^{m-1} r (r - ell)
    for (int i = m; i >= 1; --i) {
      if (i < m) chain *= static_cast<double>(i) * static_cast<double>(i - ell);
      const double sign = ((m - i) % 2 == 0) ? 1.0 : -1.0;
      acc = acc + x[static_cast<std::size_t>(m - i)] * dets[static_cast<std::size_t>(i - 1)] * (sign * chain);
    }
    dets.push_back(acc);
  }
  return dets.back();
}

inline Complex apparency_determinant(int ell, std::span<const Complex> x) {
  return apparency_determinant<Complex>(ell, x);
}

/// Sum of absolute values of the monomials of Y_ell at x; the reference size for
/// relative zero tests.
inline double apparency_scale(int ell, std::span<const Complex> x) {
  std::vector<double> dets{1.0};
  for (int m = 1; m <= ell; ++m) {
    double acc = 0.0, chain = 1.0;
    for (int i = m; i >= 1; --i) {
      if (i < m) chain *= std::abs(static_cast<double>(i) * static_cast<double>(i - ell));
      acc += std::abs(x[static_cast<std::size_t>(m - i)]) * dets[static_cast<std::size_t>(i - 1)] * chain;
    }
    dets.push_back(acc);
  }
  return dets.back();
}

/// Integer exponent difference at z_j, or a validation error when it is not an integer.
inline int integer_exponent(const EquationSL& eq, std::size_t j) {
  const auto l = near_integer(eq.exps[j]);
  if (!l) throw validation_error("non_integer_exponent", "exponent difference is not an integer; apparentness impossible");
  return static_cast<int>(std::abs(*l));
}

/// |Y_ell| / max(1, monomial scale) at z_j; zero exactly when the point is apparent.
inline double apparency_defect(const EquationSL& eq, std::size_t j) {
  const int ell = integer_exponent(eq, j);
  const ComplexVector x = local_x_coeffs(eq, j, static_cast<std::size_t>(ell));
  const std::span<const Complex> tail(x.data() + 1, static_cast<std::size_t>(ell));
  return std::abs(apparency_determinant(ell, tail)) / std::max(1.0, apparency_scale(ell, tail));
}

inline bool is_apparent(const EquationSL& eq, std::size_t j, double tol = 1e-9) {
  const int ell = integer_exponent(eq, j);
  if (ell == 0) return false;  // equal exponents always produce a logarithm
  const ComplexVector x = local_x_coeffs(eq, j, static_cast<std::size_t>(ell));
  const Complex expected_x0 = (1.0 - static_cast<double>(ell * ell)) / 4.0;
  if (std::abs(x[0] - expected_x0) > tol * std::max(1.0, std::abs(expected_x0))) return false;
  return apparency_defect(eq, j) < tol;
}

}  // namespace fuchsian
