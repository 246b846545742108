#pragma once

#include <array>
#include <span>
#include <initializer_list>

#include "fuchsian/error.hpp"
#include "fuchsian/numeric.hpp"

namespace fuchsian {

namespace detail {
// Lanczos approximation, g = 7, n = 9.
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coeffs = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
}  // namespace detail

/// True when z sits on a pole of the gamma function (0, -1, -2, ...).
inline bool is_gamma_pole(Complex z, double tol = 1e-12) {
  const auto n = near_integer(z, tol);
  return n.has_value() && *n <= 0;
}

/// Principal-ish complex log-gamma; only exp() of the result is relied upon.
inline Complex log_gamma(Complex z) {
  if (is_gamma_pole(z)) throw numerical_error("gamma_pole", "log_gamma evaluated at a pole");
  if (z.real() < 0.5) {
    // reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
    return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  Complex x = detail::lanczos_coeffs[0];
  for (std::size_t i = 1; i < detail::lanczos_coeffs.size(); ++i)
    x += detail::lanczos_coeffs[i] / (z + static_cast<double>(i));
  const Complex t = z + detail::lanczos_g + 0.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

/// prod Gamma(num[i]) / prod Gamma(den[i]); a pole in the denominator gives 0.
inline Complex gamma_ratio(std::span<const Complex> num, std::span<const Complex> den) {
  Complex log_sum = 0.0;
  for (const auto& z : den) {
    if (is_gamma_pole(z)) return 0.0;
    log_sum -= log_gamma(z);
  }
  for (const auto& z : num) log_sum += log_gamma(z);
  return std::exp(log_sum);
}

inline Complex gamma_ratio(std::initializer_list<Complex> num, std::initializer_list<Complex> den) {
  return gamma_ratio(std::span<const Complex>(num.begin(), num.size()), std::span<const Complex>(den.begin(), den.size()));
}

}  // namespace fuchsian
