#ifndef QIDENT_OE_IDENT_HPP
#define QIDENT_OE_IDENT_HPP

#include <vector>

#include <Eigen/Dense>

#include "quantizer.hpp"
#include "variance_estimator.hpp"
#include "wls_estimator.hpp"

namespace qident {

/// Rational transfer-function model y = phi^T B(q)/A(q) + d with
/// A(q) = 1 + a_1 q^{-1} + ... + a_{na} q^{-na} (scalar) and
/// B(q) = b_0 + b_1 q^{-1} + ... + b_{nb} q^{-nb} (vector coefficients).
///
/// Construction validates stability (all characteristic roots strictly
/// inside the unit circle), a_{na} != 0 and b_{nb} != 0. na = 0 describes a
/// finite-impulse-response model.
class OeModel {
public:
    OeModel(Eigen::VectorXd a, std::vector<Eigen::VectorXd> b);

    int na() const { return static_cast<int>(a_.size()); }
    int nb() const { return static_cast<int>(b_.size()) - 1; }
    int input_dim() const { return static_cast<int>(b_.front().size()); }
    const Eigen::VectorXd& a() const { return a_; }
    const std::vector<Eigen::VectorXd>& b() const { return b_; }

    /// Stacked parameter vector [a_1..a_na, b_0^T, ..., b_nb^T]^T.
    Eigen::VectorXd theta_star() const;

private:
    Eigen::VectorXd a_;
    std::vector<Eigen::VectorXd> b_;
};

/// Moduli of the characteristic roots of 1 + a_1 x + ... + a_na x^na
/// expressed as roots of z^na + a_1 z^{na-1} + ... + a_na.
std::vector<double> characteristic_root_moduli(const Eigen::VectorXd& a);

/// True when the numerator does not vanish at any denominator root, i.e.
/// the rational form has no hidden pole/zero cancellation.
bool is_coprime(const OeModel& model, double tol = 1e-9);

/// First `count` impulse-response vectors of the model:
///   h_i = b_i - sum_j a_j h_{i-j}   (b_i = 0 past nb, h_i = 0 before 0).
std::vector<Eigen::VectorXd> impulse_response(const OeModel& model, int count);

/// Block-Toeplitz matrix of impulse-response vectors used to recover the
/// denominator: block row r holds [h_{nb+r}, h_{nb+r-1}, ..., h_{nb+r+1-na}],
/// r = 0..kappa-nb-1, entries with negative index zero. Shape
/// n(kappa-nb) x na. Throws DimensionError when kappa < na + nb.
Eigen::MatrixXd build_gamma_matrix(const std::vector<Eigen::VectorXd>& h,
                                   int na, int nb, int kappa);

/// Recover [a; b_0; ...; b_nb] from an impulse-response estimate of length
/// at least kappa+1.
///
/// The denominator solve uses the least-squares left inverse of the
/// block-Toeplitz matrix when it has full numerical rank (smallest singular
/// value above rank_tol_scale times the largest); otherwise the a-part is
/// zero. Numerator coefficients follow from the defining convolution. Total:
/// never throws for admissible shapes.
Eigen::VectorXd recover(const std::vector<Eigen::VectorXd>& h, int na, int nb,
                        int kappa, double rank_tol_scale = 1e-8);

struct DmOptions {
    int kappa = 0;           ///< truncation order; 0 picks 2*(na+nb)
    double p0_scale = 0.1;   ///< P0 = I * p0_scale for the inner regression
    double beta = 1.0;       ///< constant observation weight
    long long burn_in = 0;   ///< observations withheld from the std estimator
    int recover_refresh = 1; ///< refresh the parameter recovery every N steps
    VarianceEstimatorOptions variance{};
};

/// Two-stage recursive identifier for OeModel systems: the inner WLS
/// recursion estimates the (gain-scaled) truncated impulse response on the
/// stacked input window, the inner standard-deviation estimator unscales it,
/// and the rational coefficients are recovered algebraically.
class DmIdentifier {
public:
    DmIdentifier(const Quantizer& quantizer, int input_dim, int na, int nb,
                 DmOptions options = {});

    /// Push one input into the window and return the stacked regressor
    /// [phi_k^T, phi_{k-1}^T, ..., phi_{k-kappa}^T]^T (zeros before the
    /// start of the stream).
    Eigen::VectorXd build_regressor(const Eigen::VectorXd& phi);

    /// Consume one (input, level) observation.
    void update(const Eigen::VectorXd& phi, int level);

    const Eigen::VectorXd& theta_star() const { return theta_star_; }
    std::vector<Eigen::VectorXd> impulse_estimate() const;
    double stddev() const { return variance_.stddev(); }
    long long step() const { return step_; }
    int kappa() const { return kappa_; }
    int input_dim() const { return input_dim_; }
    int param_dim() const { return na_ + input_dim_ * (nb_ + 1); }
    const WlsEstimator& wls() const { return wls_; }
    const VarianceEstimator& variance_estimator() const { return variance_; }

private:
    Quantizer quantizer_;
    int input_dim_;
    int na_;
    int nb_;
    int kappa_;
    DmOptions options_;
    std::vector<Eigen::VectorXd> window_; // newest first, kappa+1 entries
    WlsEstimator wls_;
    VarianceEstimator variance_;
    Eigen::VectorXd theta_star_;
    long long step_ = 0;
};

} // namespace qident

#endif
