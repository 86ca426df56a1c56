#include "cryptoyield/core/portfolio.hpp"

#include "cryptoyield/error.hpp"

#include <cmath>
#include <fmt/format.h>

namespace cyield::core {

double sharpe_ratio(const ReturnStats& stats, double riskless_rate) {
    if (!(stats.vol >= 0.0)) throw DomainError("volatility must be non-negative");
    if (!(stats.periods_per_year > 0.0)) throw DomainError("periods_per_year must be positive");
    const double vol = stats.annualized_vol();
    if (vol == 0.0) throw NumericError("Sharpe ratio undefined for zero volatility");
    return (stats.annualized_mean() - riskless_rate) / vol;
}

Eigen::VectorXd kelly_weights(const Eigen::VectorXd& means, double riskless_rate, const Eigen::MatrixXd& covariance) {
    const auto n = means.size();
    if (n == 0) throw DomainError("Kelly allocation needs at least one asset");
    if (covariance.rows() != n || covariance.cols() != n)
        throw DomainError(fmt::format("covariance is {}x{}, expected {}x{}", covariance.rows(), covariance.cols(), n, n));
    if (!covariance.allFinite() || !means.allFinite()) throw DomainError("non-finite Kelly inputs");

    const double scale = covariance.cwiseAbs().maxCoeff();
    if (!((covariance - covariance.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale))
        throw DomainError("covariance matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) throw NumericError("covariance matrix is not positive definite");
    if (hi / lo > kKellyConditionLimit)
        throw NumericError(fmt::format("covariance condition number {:.3g} exceeds {:.0e}", hi / lo, kKellyConditionLimit));

    const Eigen::VectorXd excess = means - Eigen::VectorXd::Constant(n, riskless_rate);
    return covariance.partialPivLu().solve(excess);
}

} // namespace cyield::core
