#ifndef QIDENT_WLS_ESTIMATOR_HPP
#define QIDENT_WLS_ESTIMATOR_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "quantizer.hpp"

namespace qident {

/// Recursive weighted least-squares estimator of the scaled parameter
/// (gain times parameter) driven by quantized observations.
///
/// One observation per update:
///   alpha = 1 / (1/beta + phi^T P phi)
///   estimate += alpha * P phi (s - phi^T estimate)
///   P -= alpha * (P phi)(P phi)^T        (then re-symmetrized)
///
/// Sequential state machine; instances independent and movable.
class WlsEstimator {
public:
    WlsEstimator(Eigen::VectorXd initial_estimate, Eigen::MatrixXd initial_p,
                 double beta_low = 1e-8, double beta_high = 1e8);

    /// Zero initial estimate and P0 = I * p0_scale.
    static WlsEstimator with_defaults(int dim, double p0_scale = 0.1);

    /// Consume one (regressor, observation, weight) triple. Throws
    /// DomainError when beta falls outside the configured bounds and
    /// DimensionError on a regressor of the wrong length.
    void update(const Eigen::VectorXd& phi, double s, double beta);

    const Eigen::VectorXd& estimate() const { return estimate_; }
    const Eigen::MatrixXd& covariance() const { return p_; }
    long long step() const { return step_; }
    int dim() const { return static_cast<int>(estimate_.size()); }
    double beta_low() const { return beta_low_; }
    double beta_high() const { return beta_high_; }

private:
    Eigen::VectorXd estimate_;
    Eigen::MatrixXd p_;
    double beta_low_;
    double beta_high_;
    long long step_ = 0;
};

/// One recorded step of a weighted stream, for the batch solve.
struct WlsSample {
    Eigen::VectorXd phi;
    double s;
    double beta;
};

struct BatchWlsResult {
    Eigen::VectorXd estimate;
    Eigen::MatrixXd p;
};

/// Direct dense solve of the same criterion the recursion minimizes:
///   P_k = (sum beta_l phi_l phi_l^T + P0^{-1})^{-1}
///   estimate_k = P_k (sum beta_l s_l phi_l) + P_k P0^{-1} estimate_0.
/// Serves as the independent cross-check of the recursive path.
BatchWlsResult batch_wls(const std::vector<WlsSample>& history,
                         const Eigen::MatrixXd& initial_p,
                         const Eigen::VectorXd& initial_estimate);

/// Parameter recovery: divide the scaled estimate by the quantizer gain at
/// the estimated output standard deviation.
Eigen::VectorXd recover_theta(const Eigen::VectorXd& scaled_estimate,
                              double stddev_estimate,
                              const Quantizer& quantizer);

/// Static system description for the correlation diagnostic.
struct StaticSystem {
    Eigen::VectorXd theta;
    Eigen::MatrixXd input_cov;
    double noise_std = 0.0;
};

/// Monte Carlo check of the correlation identity
///   E[s_k phi_k] = gain(delta_y) * H * theta,
/// with delta_y^2 = theta^T H theta + noise_std^2. Simulates `sample_count`
/// iid steps and returns the residual norm against the closed-form target.
double correlation_check(const Quantizer& quantizer, const StaticSystem& system,
                         long long sample_count, std::uint64_t seed);

} // namespace qident

#endif
