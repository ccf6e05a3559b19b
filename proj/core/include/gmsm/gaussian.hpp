#pragma once

#include <cmath>
#include <numbers>

namespace gmsm {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;
inline constexpr double kInvSqrt2 = 0.707106781186547524400844362105;

inline constexpr double kInvSqrt2Lo = -4.833646656726456519e-17;  // 1/sqrt(2) - kInvSqrt2

// Standard normal pdf, cdf and upper tail. The rounding errors of x^2 and of
// x/sqrt(2) are fed back to first order, which keeps ~1e-15 relative accuracy
// far into the tails. The cdf uses erfc on both sides so neither tail loses
// accuracy to cancellation.
inline double normal_pdf(double x) {
  const double sq = x * x;
  const double err = std::fma(x, x, -sq);
  return kInvSqrt2Pi * std::exp(-0.5 * sq) * (1.0 - 0.5 * err);
}

inline double normal_logpdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

namespace detail {
// 0.5 erfc(u / sqrt(2))
inline double half_erfc_scaled(double u) {
  const double y = u * kInvSqrt2;
  const double dy = std::fma(u, kInvSqrt2, -y) + u * kInvSqrt2Lo;
  constexpr double k2OverSqrtPi = 1.12837916709551257389615890312;
  return 0.5 * (std::erfc(y) - dy * k2OverSqrtPi * std::exp(-y * y));
}
}  // namespace detail

inline double normal_cdf(double x) { return detail::half_erfc_scaled(-x); }

inline double normal_sf(double x) { return detail::half_erfc_scaled(x); }

// Mills ratio Q(x)/phi(x) for x >= 0, continued fraction once the direct
// quotient would underflow.
double mills_ratio(double x);

}  // namespace gmsm
