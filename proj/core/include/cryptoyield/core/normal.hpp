#pragma once

#include <cmath>
#include <numbers>

namespace cyield::core {

// Standard normal CDF through erfc, accurate to a few ulps in both tails.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

} // namespace cyield::core
