#include "variance_estimator.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "gauss.hpp"

namespace qident {

EmpiricalHistogram::EmpiricalHistogram(int num_levels) {
    if (num_levels < 1) {
        throw DimensionError("EmpiricalHistogram: need at least one level");
    }
    counts_.assign(static_cast<std::size_t>(num_levels), 0);
}

EmpiricalHistogram::EmpiricalHistogram(std::vector<long long> counts)
    : counts_(std::move(counts)) {
    if (counts_.empty()) {
        throw DimensionError("EmpiricalHistogram: need at least one level");
    }
    for (long long c : counts_) {
        if (c < 0) throw RangeError("EmpiricalHistogram: negative count");
        step_ += c;
    }
}

void EmpiricalHistogram::update(int level) {
    if (level < 0 || level >= num_levels()) {
        throw RangeError("EmpiricalHistogram: level outside 0..m");
    }
    ++counts_[static_cast<std::size_t>(level)];
    ++step_;
}

long long EmpiricalHistogram::count(int level) const {
    return counts_.at(static_cast<std::size_t>(level));
}

double EmpiricalHistogram::freq(int level) const {
    if (step_ == 0) return 0.0;
    return static_cast<double>(count(level)) / static_cast<double>(step_);
}

double EmpiricalHistogram::frac_range(int lo, int hi) const {
    if (step_ == 0) return 0.0;
    long long sum = 0;
    for (int i = std::max(lo, 0); i < std::min(hi, num_levels()); ++i) {
        sum += counts_[static_cast<std::size_t>(i)];
    }
    return static_cast<double>(sum) / static_cast<double>(step_);
}

double modified_fraction(double p, double c_star) {
    if (p == 0.0 || p == 0.5 || p == 1.0) return c_star;
    return p;
}

double project(double x, double c) {
    return std::clamp(x, c, 1.0 / c);
}

double per_threshold_estimate(const Quantizer& quantizer,
                              const EmpiricalHistogram& hist, int j,
                              double c_star) {
    const int m = quantizer.num_thresholds();
    if (j < 1 || j > m) {
        throw RangeError("per_threshold_estimate: threshold index outside 1..m");
    }
    const auto& c = quantizer.thresholds();
    double numerator;
    double p;
    if (c[static_cast<std::size_t>(j - 1)] != 0.0) {
        numerator = c[static_cast<std::size_t>(j - 1)];
        p = hist.frac_range(0, j);
    } else if (j > 1) {
        numerator = c[0];
        p = 0.5 - hist.frac_range(1, j);
    } else {
        numerator = c[static_cast<std::size_t>(m - 1)];
        p = 0.5 + hist.frac_range(1, m);
    }
    // finite-sample overshoot outside [0,1] is clamped; the endpoints then
    // fall under the non-invertible-point modification
    p = std::clamp(p, 0.0, 1.0);
    return numerator / std_normal_quantile(modified_fraction(p, c_star));
}

AsymptoticBlocks make_blocks(const Quantizer& quantizer, double delta) {
    if (!(delta > 0.0)) {
        throw DomainError("make_blocks: delta must be positive");
    }
    const int m = quantizer.num_thresholds();
    const auto& c = quantizer.thresholds();

    Eigen::VectorXd big_f(m);
    Eigen::VectorXd small_f(m);
    for (int i = 0; i < m; ++i) {
        const double x = c[static_cast<std::size_t>(i)] / delta;
        big_f[i] = std_normal_cdf(x);
        small_f[i] = std_normal_pdf(x) * c[static_cast<std::size_t>(i)] /
                     (delta * delta);
    }

    AsymptoticBlocks blocks;
    blocks.U = small_f.asDiagonal();
    blocks.w = big_f;
    blocks.W.resize(m, m);
    for (int u = 0; u < m; ++u) {
        for (int v = 0; v < m; ++v) {
            blocks.W(u, v) = big_f[std::min(u, v)];
        }
    }
    blocks.G = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        if (c[static_cast<std::size_t>(j)] != 0.0) continue;
        if (j == 0) {
            blocks.G(m - 1, 0) = small_f[m - 1];
            blocks.G(0, 0) = -small_f[m - 1];
        } else {
            blocks.G(0, j) = small_f[0];
            blocks.G(j, j) = -small_f[0];
        }
    }
    return blocks;
}

AsymptoticBlocks build_blocks(const Quantizer& quantizer, double delta_prev,
                              double c) {
    if (!(delta_prev >= c && delta_prev <= 1.0 / c)) {
        throw DomainError("build_blocks: delta_prev outside projection band");
    }
    return make_blocks(quantizer, delta_prev);
}

Eigen::VectorXd compute_weights(const AsymptoticBlocks& blocks) {
    const auto m = blocks.w.size();
    if (m == 1) {
        return Eigen::VectorXd::Ones(1);
    }
    const Eigen::MatrixXd core = blocks.W - blocks.w * blocks.w.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(core);
    if (!lu.isInvertible()) {
        throw SingularMatrixError("compute_weights: W - ww^T is singular");
    }
    const Eigen::MatrixXd ug = blocks.U + blocks.G;
    const Eigen::VectorXd rhs = ug.transpose() * Eigen::VectorXd::Ones(m);
    Eigen::VectorXd mu = ug * lu.solve(rhs);
    const double denom = mu.sum();
    if (!std::isfinite(denom) || denom == 0.0) {
        throw SingularMatrixError("compute_weights: degenerate normalization");
    }
    mu /= denom;
    if (!mu.allFinite()) {
        throw SingularMatrixError("compute_weights: non-finite weights");
    }
    // pin the sum to one exactly
    mu[m - 1] = 1.0 - mu.head(m - 1).sum();
    return mu;
}

double cr_lower_bound(const Quantizer& quantizer, double delta, long long k) {
    if (!(delta > 0.0)) {
        throw DomainError("cr_lower_bound: delta must be positive");
    }
    if (k < 1) {
        throw DomainError("cr_lower_bound: k must be positive");
    }
    const int m = quantizer.num_thresholds();
    const auto& c = quantizer.thresholds();
    std::vector<double> big_f(static_cast<std::size_t>(m) + 2, 0.0);
    std::vector<double> small_f(static_cast<std::size_t>(m) + 2, 0.0);
    big_f[static_cast<std::size_t>(m) + 1] = 1.0;
    for (int i = 1; i <= m; ++i) {
        const double x = c[static_cast<std::size_t>(i - 1)] / delta;
        big_f[static_cast<std::size_t>(i)] = std_normal_cdf(x);
        small_f[static_cast<std::size_t>(i)] =
            std_normal_pdf(x) * c[static_cast<std::size_t>(i - 1)] /
            (delta * delta);
    }
    double info = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double df = small_f[static_cast<std::size_t>(i) + 1] -
                          small_f[static_cast<std::size_t>(i)];
        const double dF = big_f[static_cast<std::size_t>(i) + 1] -
                          big_f[static_cast<std::size_t>(i)];
        if (dF <= 0.0) {
            throw DomainError("cr_lower_bound: degenerate cell probability");
        }
        info += df * df / dF;
    }
    return 1.0 / (info * static_cast<double>(k));
}

Eigen::MatrixXd asymptotic_covariance_limit(const Quantizer& quantizer,
                                            double delta) {
    const AsymptoticBlocks blocks = make_blocks(quantizer, delta);
    const Eigen::MatrixXd core = blocks.W - blocks.w * blocks.w.transpose();
    const Eigen::MatrixXd ug = blocks.U + blocks.G;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(ug);
    if (!lu.isInvertible()) {
        throw SingularMatrixError("asymptotic_covariance_limit: U + G singular");
    }
    const Eigen::MatrixXd inv_ug = lu.inverse();
    return inv_ug.transpose() * core * inv_ug;
}

VarianceEstimator::VarianceEstimator(const Quantizer& quantizer,
                                     VarianceEstimatorOptions options)
    : quantizer_(quantizer),
      options_(options),
      hist_(quantizer.num_thresholds() + 1) {
    if (!(options_.c > 0.0 && options_.c < 1.0)) {
        throw DomainError("VarianceEstimator: c must lie in (0,1)");
    }
    if (!(options_.c_star > 0.0 && options_.c_star < 1.0) ||
        options_.c_star == 0.5) {
        throw DomainError(
            "VarianceEstimator: c_star must lie in (0,1) and differ from 1/2");
    }
    if (options_.weight_refresh < 1) {
        throw DomainError("VarianceEstimator: weight_refresh must be >= 1");
    }
    const int m = quantizer_.num_thresholds();
    per_threshold_ = Eigen::VectorXd::Zero(m);
    weights_ = Eigen::VectorXd::Constant(m, 1.0 / m);
    weights_[m - 1] = 1.0 - weights_.head(m - 1).sum();
    delta_ = project(options_.delta0, options_.c);
}

void VarianceEstimator::update(int level) {
    hist_.update(level);
    const double delta_prev = delta_;
    const int m = quantizer_.num_thresholds();
    for (int j = 1; j <= m; ++j) {
        per_threshold_[j - 1] =
            per_threshold_estimate(quantizer_, hist_, j, options_.c_star);
    }
    if ((hist_.step() - 1) % options_.weight_refresh == 0) {
        try {
            weights_ = compute_weights(
                build_blocks(quantizer_, delta_prev, options_.c));
        } catch (const SingularMatrixError&) {
            // transient degenerate plug-in (estimate pinned at the band
            // edge makes a cell probability underflow); keep the current
            // weights, they stay sum-one and the combination stays valid
        }
    }
    delta_ = project(per_threshold_.dot(weights_), options_.c);
}

} // namespace qident
