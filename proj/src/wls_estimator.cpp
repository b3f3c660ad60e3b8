#include "wls_estimator.hpp"

#include <cmath>

#include "errors.hpp"
#include "gauss.hpp"

namespace qident {

WlsEstimator::WlsEstimator(Eigen::VectorXd initial_estimate,
                           Eigen::MatrixXd initial_p, double beta_low,
                           double beta_high)
    : estimate_(std::move(initial_estimate)),
      p_(std::move(initial_p)),
      beta_low_(beta_low),
      beta_high_(beta_high) {
    if (p_.rows() != estimate_.size() || p_.cols() != estimate_.size()) {
        throw DimensionError("WlsEstimator: P0 shape does not match estimate");
    }
    if (!(beta_low_ > 0.0) || !(beta_high_ >= beta_low_)) {
        throw DomainError("WlsEstimator: need 0 < beta_low <= beta_high");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(p_);
    if (llt.info() != Eigen::Success) {
        throw FactorizationError("WlsEstimator: P0 is not positive definite");
    }
}

WlsEstimator WlsEstimator::with_defaults(int dim, double p0_scale) {
    if (dim < 1) throw DimensionError("WlsEstimator: dim must be >= 1");
    return WlsEstimator(Eigen::VectorXd::Zero(dim),
                        Eigen::MatrixXd::Identity(dim, dim) * p0_scale);
}

void WlsEstimator::update(const Eigen::VectorXd& phi, double s, double beta) {
    if (phi.size() != estimate_.size()) {
        throw DimensionError("WlsEstimator: regressor length mismatch");
    }
    if (!(beta >= beta_low_ && beta <= beta_high_)) {
        throw DomainError("WlsEstimator: beta outside configured bounds");
    }
    const Eigen::VectorXd p_phi = p_ * phi;
    const double alpha = 1.0 / (1.0 / beta + phi.dot(p_phi));
    estimate_ += alpha * p_phi * (s - phi.dot(estimate_));
    p_ -= alpha * p_phi * p_phi.transpose();
    p_ = ((p_ + p_.transpose()) * 0.5).eval();
    ++step_;
}

BatchWlsResult batch_wls(const std::vector<WlsSample>& history,
                         const Eigen::MatrixXd& initial_p,
                         const Eigen::VectorXd& initial_estimate) {
    if (history.empty()) {
        throw DimensionError("batch_wls: history is empty");
    }
    const auto n = initial_estimate.size();
    Eigen::LLT<Eigen::MatrixXd> llt0(initial_p);
    if (llt0.info() != Eigen::Success) {
        throw FactorizationError("batch_wls: P0 is not positive definite");
    }
    const Eigen::MatrixXd p0_inv =
        llt0.solve(Eigen::MatrixXd::Identity(n, n));

    Eigen::MatrixXd information = p0_inv;
    Eigen::VectorXd moment = Eigen::VectorXd::Zero(n);
    for (const auto& sample : history) {
        if (sample.phi.size() != n) {
            throw DimensionError("batch_wls: regressor length mismatch");
        }
        information += sample.beta * sample.phi * sample.phi.transpose();
        moment += sample.beta * sample.s * sample.phi;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(information);
    if (llt.info() != Eigen::Success) {
        throw SingularMatrixError("batch_wls: information matrix singular");
    }
    BatchWlsResult result;
    result.p = llt.solve(Eigen::MatrixXd::Identity(n, n));
    result.estimate = result.p * moment + result.p * p0_inv * initial_estimate;
    return result;
}

Eigen::VectorXd recover_theta(const Eigen::VectorXd& scaled_estimate,
                              double stddev_estimate,
                              const Quantizer& quantizer) {
    return scaled_estimate / quantizer.gain(stddev_estimate);
}

double correlation_check(const Quantizer& quantizer, const StaticSystem& system,
                         long long sample_count, std::uint64_t seed) {
    const auto n = system.theta.size();
    MvnSampler sampler(Eigen::VectorXd::Zero(n), system.input_cov, seed);
    CounterRng noise(seed ^ 0x9E3779B97F4A7C15ull);

    Eigen::VectorXd accum = Eigen::VectorXd::Zero(n);
    for (long long k = 0; k < sample_count; ++k) {
        const Eigen::VectorXd phi = sampler.sample();
        const double y =
            phi.dot(system.theta) + system.noise_std * noise.normal();
        accum += static_cast<double>(quantizer.quantize(y)) * phi;
    }
    accum /= static_cast<double>(sample_count);

    const double var_y = system.theta.dot(system.input_cov * system.theta) +
                         system.noise_std * system.noise_std;
    // constant-output corner (theta = 0, no noise): the target vanishes
    const Eigen::VectorXd target =
        var_y > 0.0
            ? (quantizer.gain(std::sqrt(var_y)) * system.input_cov *
               system.theta)
                  .eval()
            : Eigen::VectorXd::Zero(n).eval();
    return (accum - target).norm();
}

} // namespace qident
