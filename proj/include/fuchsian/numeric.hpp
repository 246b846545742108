#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fuchsian {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex I{0.0, 1.0};

/// Exponent differences closer than this to an integer are treated as integers.
inline constexpr double integer_tolerance = 1e-9;

/// Nearest integer to z when z is within `tol` of it (imaginary part included).
inline std::optional<long> near_integer(Complex z, double tol = integer_tolerance) {
  const double r = std::round(z.real());
  if (std::abs(z - Complex(r, 0.0)) < tol) return static_cast<long>(r);
  return std::nullopt;
}

inline std::optional<long> near_integer(double x, double tol = integer_tolerance) {
  return near_integer(Complex(x, 0.0), tol);
}

inline bool close(Complex a, Complex b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

inline double max_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

inline double max_distance(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline Eigen::VectorXcd to_eigen(std::span<const Complex> v) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

inline ComplexVector from_eigen(const Eigen::VectorXcd& v) {
  return ComplexVector(v.data(), v.data() + v.size());
}

/// Smallest pairwise distance in a point set (infinity for fewer than two points).
inline double min_pairwise_distance(std::span<const Complex> pts) {
  double m = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) m = std::min(m, std::abs(pts[i] - pts[j]));
  return m;
}

}  // namespace fuchsian
