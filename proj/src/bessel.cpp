#include "phonomog/bessel.hpp"

#include <cmath>

namespace phonomog {

namespace {

double j1_series(double x) {
  // J1(x) = (x/2) sum_m (-1)^m (x^2/4)^m / (m! (m+1)!). Long double keeps the
  // alternating-series cancellation below 1e-13 relative up to x = 16.
  const long double q = static_cast<long double>(x) * x / 4.0L;
  long double term = static_cast<long double>(x) / 2.0L;
  long double sum = term;
  for (int m = 1; m < 80; ++m) {
    term *= -q / (static_cast<long double>(m) * (m + 1));
    sum += term;
    if (std::fabs(static_cast<double>(term)) < 1e-20 * (1.0 + std::fabs(static_cast<double>(sum))))
      break;
  }
  return static_cast<double>(sum);
}

double j1_asymptotic(double x) {
  // Hankel expansion: J1(x) = sqrt(2/(pi x)) (P cos(chi) - Q sin(chi)),
  // chi = x - 3 pi/4. Terms are summed until they stop decreasing.
  const long double mu = 4.0L;  // 4 nu^2 with nu = 1
  long double p = 1.0L, q = 0.0L;
  long double term = 1.0L;
  long double prev = 1e30L;
  for (int k = 1; k < 40; ++k) {
    term *= (mu - (2.0L * k - 1) * (2.0L * k - 1)) / (8.0L * k * x);
    const long double mag = std::fabs(static_cast<long double>(term));
    if (mag >= prev) break;
    prev = mag;
    if (k % 2 == 1)
      q += (k % 4 == 1) ? term : -term;
    else
      p += (k % 4 == 2) ? -term : term;
    if (mag < 1e-19L) break;
  }
  const long double chi = static_cast<long double>(x) - 3.0L * 0.785398163397448309615660845819875721L;
  const long double amp = std::sqrt(2.0L / (3.141592653589793238462643383279502884L * x));
  return static_cast<double>(amp * (p * std::cos(chi) - q * std::sin(chi)));
}

}  // namespace

double bessel_j1(double x) {
  if (x < 0) return -bessel_j1(-x);
  if (x <= 16.0) return j1_series(x);
  return j1_asymptotic(x);
}

}  // namespace phonomog
