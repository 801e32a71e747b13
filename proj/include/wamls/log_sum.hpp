#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace wamls {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// ln(e^a + e^b) without overflow; kLogZero is the additive identity.
inline double log_add_exp(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// ln(sum_i e^{x_i}); kLogZero for an empty input.
inline double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return kLogZero;
  const double hi = *std::max_element(xs.begin(), xs.end());
  if (hi == kLogZero) return kLogZero;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - hi);
  return hi + std::log(sum);
}

}  // namespace wamls
