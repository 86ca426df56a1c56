#pragma once

#include "cryptoyield/core/stats.hpp"

#include <Eigen/Dense>

namespace cyield::core {

// (annualized mean - riskless) / annualized vol. Throws NumericError for zero vol.
double sharpe_ratio(const ReturnStats& stats, double riskless_rate);

inline constexpr double kKellyConditionLimit = 1e12;

/// Log-optimal (Kelly) allocation for continuous-time lognormal dynamics:
/// w = inv(cov) * (means - riskless). Weights are not normalised; a sum above
/// one is leverage. The covariance must be symmetric positive definite with a
/// condition number below kKellyConditionLimit, otherwise NumericError.
Eigen::VectorXd kelly_weights(const Eigen::VectorXd& means, double riskless_rate, const Eigen::MatrixXd& covariance);

} // namespace cyield::core
