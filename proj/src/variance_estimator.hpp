#ifndef QIDENT_VARIANCE_ESTIMATOR_HPP
#define QIDENT_VARIANCE_ESTIMATOR_HPP

#include <vector>

#include <Eigen/Dense>

#include "quantizer.hpp"

namespace qident {

/// Running relative frequencies of quantizer levels.
///
/// Integer counts are the ground truth; every exposed fraction is a single
/// count/step division, so exact hits of 0, 1/2 and 1 are decidable and
/// step() * freq(i) always recovers an integer count.
class EmpiricalHistogram {
public:
    explicit EmpiricalHistogram(int num_levels);
    explicit EmpiricalHistogram(std::vector<long long> counts);

    /// Consume one observation; throws RangeError for a level outside 0..m.
    void update(int level);

    long long step() const { return step_; }
    int num_levels() const { return static_cast<int>(counts_.size()); }
    long long count(int level) const;

    /// S_k^i = count(i) / k (0 before the first observation).
    double freq(int level) const;

    /// Relative mass of the levels in [lo, hi), as one exact-count division.
    double frac_range(int lo, int hi) const;

private:
    std::vector<long long> counts_;
    long long step_ = 0;
};

/// Replace the non-invertible cumulative fractions 0, 1/2 and 1 by c_star;
/// everything else passes through.
double modified_fraction(double p, double c_star);

/// Clamp onto [c, 1/c] (nearest point of the band).
double project(double x, double c);

/// Single-threshold standard-deviation estimate obtained by inverting one
/// empirical CDF value. `j` is the 1-based threshold index. Zero thresholds
/// borrow a nonzero one as described by the two special branches; transient
/// out-of-range cumulative arguments are clamped into [0,1] before
/// modification so the inversion is total.
double per_threshold_estimate(const Quantizer& quantizer,
                              const EmpiricalHistogram& hist, int j,
                              double c_star);

/// Plug-in limit-covariance building blocks for the weight solve.
/// U is diagonal with entries f(C_i/d) C_i / d^2, w stacks F(C_i/d), W is the
/// running-minimum matrix W_{u,v} = F_{min(u,v)}, and G is the sparse
/// correction that a zero threshold induces.
struct AsymptoticBlocks {
    Eigen::MatrixXd U;
    Eigen::MatrixXd G;
    Eigen::MatrixXd W;
    Eigen::VectorXd w;
};

/// Blocks at a given standard deviation; delta must be positive.
AsymptoticBlocks make_blocks(const Quantizer& quantizer, double delta);

/// Blocks at the previous estimate; throws DomainError when delta_prev is
/// outside the projection band [c, 1/c].
AsymptoticBlocks build_blocks(const Quantizer& quantizer, double delta_prev,
                              double c);

/// Minimum-variance sum-one combination weights
///   mu = (U+G)(W-ww^T)^{-1}(U+G^T) 1 / (1^T (U+G)(W-ww^T)^{-1}(U+G^T) 1),
/// re-normalized so the components sum to one exactly.
/// Throws SingularMatrixError when the solve is numerically singular.
Eigen::VectorXd compute_weights(const AsymptoticBlocks& blocks);

/// Minimum variance of an unbiased standard-deviation estimate from k
/// quantized samples: (sum_i (f_{i+1}-f_i)^2 / (F_{i+1}-F_i))^{-1} / k with
/// the boundary conventions F_0 = 0, F_{m+1} = 1, f_0 = f_{m+1} = 0.
/// Throws DomainError when a cell probability underflows to zero.
double cr_lower_bound(const Quantizer& quantizer, double delta, long long k);

/// Limit of k * Cov of the per-threshold estimate vector:
/// (U+G^T)^{-1}(W-ww^T)(U+G)^{-1} evaluated at the true delta.
Eigen::MatrixXd asymptotic_covariance_limit(const Quantizer& quantizer,
                                            double delta);

struct VarianceEstimatorOptions {
    double delta0 = 1.0;   ///< initial estimate (projected into the band)
    double c = 1e-6;       ///< projection band is [c, 1/c]
    double c_star = 1e-6;  ///< replacement for non-invertible fractions
    int weight_refresh = 1; ///< recompute combination weights every N steps
};

/// Recursive estimator of the output standard deviation from quantized
/// observations: per-threshold CDF inversions combined with minimum-variance
/// weights and projected onto [c, 1/c].
///
/// Sequential state machine; one update at a time per instance, instances
/// independent and movable.
class VarianceEstimator {
public:
    VarianceEstimator(const Quantizer& quantizer,
                      VarianceEstimatorOptions options = {});

    /// Consume one quantized observation.
    void update(int level);

    /// Current estimate of the output standard deviation, inside [c, 1/c].
    double stddev() const { return delta_; }

    long long step() const { return hist_.step(); }
    const EmpiricalHistogram& histogram() const { return hist_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    const Eigen::VectorXd& per_threshold() const { return per_threshold_; }
    const VarianceEstimatorOptions& options() const { return options_; }
    const Quantizer& quantizer() const { return quantizer_; }

private:
    Quantizer quantizer_;
    VarianceEstimatorOptions options_;
    EmpiricalHistogram hist_;
    Eigen::VectorXd per_threshold_;
    Eigen::VectorXd weights_;
    double delta_;
};

} // namespace qident

#endif
