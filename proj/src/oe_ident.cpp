#include "oe_ident.hpp"

#include <cmath>
#include <complex>

#include "errors.hpp"

namespace qident {

std::vector<double> characteristic_root_moduli(const Eigen::VectorXd& a) {
    const int na = static_cast<int>(a.size());
    if (na == 0) return {};
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(na, na);
    for (int i = 0; i < na; ++i) companion(0, i) = -a[i];
    for (int i = 1; i < na; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    std::vector<double> moduli(static_cast<std::size_t>(na));
    for (int i = 0; i < na; ++i) {
        moduli[static_cast<std::size_t>(i)] = std::abs(solver.eigenvalues()[i]);
    }
    return moduli;
}

OeModel::OeModel(Eigen::VectorXd a, std::vector<Eigen::VectorXd> b)
    : a_(std::move(a)), b_(std::move(b)) {
    if (b_.empty()) throw DimensionError("OeModel: numerator is empty");
    const auto n = b_.front().size();
    if (n < 1) throw DimensionError("OeModel: input dimension must be >= 1");
    for (const auto& coeff : b_) {
        if (coeff.size() != n) {
            throw DimensionError("OeModel: numerator coefficient length mismatch");
        }
    }
    if (na() > 0 && a_[na() - 1] == 0.0) {
        throw DomainError("OeModel: leading denominator coefficient a_na is zero");
    }
    if (b_.back().norm() == 0.0) {
        throw DomainError("OeModel: leading numerator coefficient b_nb is zero");
    }
    for (double modulus : characteristic_root_moduli(a_)) {
        if (!(modulus < 1.0 - 1e-9)) {
            throw DomainError(
                "OeModel: unstable denominator (characteristic root on or "
                "outside the unit circle)");
        }
    }
}

Eigen::VectorXd OeModel::theta_star() const {
    Eigen::VectorXd out(na() + input_dim() * (nb() + 1));
    out.head(na()) = a_;
    for (int j = 0; j <= nb(); ++j) {
        out.segment(na() + j * input_dim(), input_dim()) =
            b_[static_cast<std::size_t>(j)];
    }
    return out;
}

bool is_coprime(const OeModel& model, double tol) {
    if (model.na() == 0) return true;
    // roots of 1 + a_1 x + ... + a_na x^na; numerator must not vanish there
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(model.na(), model.na());
    const auto& a = model.a();
    const double lead = a[model.na() - 1];
    for (int i = 0; i < model.na(); ++i) {
        const int power = model.na() - 1 - i; // coefficient of x^power
        const double coeff = power == 0 ? 1.0 : a[power - 1];
        companion(0, i) = -coeff / lead;
    }
    for (int i = 1; i < model.na(); ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    for (int r = 0; r < model.na(); ++r) {
        const std::complex<double> x = solver.eigenvalues()[r];
        Eigen::VectorXcd value =
            Eigen::VectorXcd::Zero(model.input_dim());
        std::complex<double> power(1.0, 0.0);
        for (int j = 0; j <= model.nb(); ++j) {
            value += power * model.b()[static_cast<std::size_t>(j)];
            power *= x;
        }
        if (value.norm() <= tol) return false;
    }
    return true;
}

std::vector<Eigen::VectorXd> impulse_response(const OeModel& model, int count) {
    std::vector<Eigen::VectorXd> h;
    h.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd value = i <= model.nb()
                                    ? model.b()[static_cast<std::size_t>(i)]
                                    : Eigen::VectorXd::Zero(model.input_dim());
        for (int j = 1; j <= model.na() && j <= i; ++j) {
            value -= model.a()[j - 1] * h[static_cast<std::size_t>(i - j)];
        }
        h.push_back(std::move(value));
    }
    return h;
}

namespace {

const Eigen::VectorXd& h_at(const std::vector<Eigen::VectorXd>& h, int index,
                            const Eigen::VectorXd& zero) {
    if (index < 0) return zero;
    return h[static_cast<std::size_t>(index)];
}

} // namespace

Eigen::MatrixXd build_gamma_matrix(const std::vector<Eigen::VectorXd>& h,
                                   int na, int nb, int kappa) {
    if (kappa < na + nb) {
        throw DimensionError("build_gamma_matrix: kappa must be >= na + nb");
    }
    if (static_cast<int>(h.size()) < kappa) {
        throw DimensionError("build_gamma_matrix: impulse sequence too short");
    }
    const int n = static_cast<int>(h.front().size());
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd gamma(n * (kappa - nb), na);
    for (int r = 0; r < kappa - nb; ++r) {
        for (int c = 0; c < na; ++c) {
            gamma.block(r * n, c, n, 1) = h_at(h, nb + r - c, zero);
        }
    }
    return gamma;
}

Eigen::VectorXd recover(const std::vector<Eigen::VectorXd>& h, int na, int nb,
                        int kappa, double rank_tol_scale) {
    if (kappa < na + nb) {
        throw DimensionError("recover: kappa must be >= na + nb");
    }
    if (static_cast<int>(h.size()) < kappa + 1) {
        throw DimensionError("recover: impulse sequence too short");
    }
    const int n = static_cast<int>(h.front().size());
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);

    Eigen::VectorXd a_hat = Eigen::VectorXd::Zero(na);
    if (na > 0) {
        const Eigen::MatrixXd gamma = build_gamma_matrix(h, na, nb, kappa);
        Eigen::VectorXd tail(n * (kappa - nb));
        for (int r = 0; r < kappa - nb; ++r) {
            tail.segment(r * n, n) = h[static_cast<std::size_t>(nb + 1 + r)];
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(
            gamma, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        const bool full_rank =
            sv.size() == na && sv[na - 1] > rank_tol_scale * sv[0];
        if (full_rank) {
            a_hat = -svd.solve(tail);
        }
    }

    Eigen::VectorXd theta(na + n * (nb + 1));
    theta.head(na) = a_hat;
    for (int j = 0; j <= nb; ++j) {
        Eigen::VectorXd b_j = h[static_cast<std::size_t>(j)];
        for (int i = 1; i <= na; ++i) {
            b_j += a_hat[i - 1] * h_at(h, j - i, zero);
        }
        theta.segment(na + j * n, n) = b_j;
    }
    return theta;
}

DmIdentifier::DmIdentifier(const Quantizer& quantizer, int input_dim, int na,
                           int nb, DmOptions options)
    : quantizer_(quantizer),
      input_dim_(input_dim),
      na_(na),
      nb_(nb),
      kappa_(options.kappa > 0 ? options.kappa : 2 * (na + nb)),
      options_(options),
      wls_(WlsEstimator::with_defaults(input_dim * (kappa_ + 1) > 0
                                           ? input_dim * (kappa_ + 1)
                                           : 1,
                                       options.p0_scale)),
      variance_(quantizer, options.variance) {
    if (input_dim_ < 1) {
        throw DimensionError("DmIdentifier: input dimension must be >= 1");
    }
    if (na_ < 0 || nb_ < 0) {
        throw DimensionError("DmIdentifier: negative polynomial order");
    }
    if (kappa_ < na_ + nb_) {
        throw DimensionError("DmIdentifier: kappa must be >= na + nb");
    }
    if (options_.recover_refresh < 1) {
        throw DomainError("DmIdentifier: recover_refresh must be >= 1");
    }
    if (options_.burn_in < 0) {
        throw DomainError("DmIdentifier: burn_in must be >= 0");
    }
    window_.assign(static_cast<std::size_t>(kappa_) + 1,
                   Eigen::VectorXd::Zero(input_dim_));
    theta_star_ = Eigen::VectorXd::Zero(param_dim());
}

Eigen::VectorXd DmIdentifier::build_regressor(const Eigen::VectorXd& phi) {
    if (phi.size() != input_dim_) {
        throw DimensionError("DmIdentifier: input length mismatch");
    }
    window_.pop_back();
    window_.insert(window_.begin(), phi);
    Eigen::VectorXd stacked(input_dim_ * (kappa_ + 1));
    for (int i = 0; i <= kappa_; ++i) {
        stacked.segment(i * input_dim_, input_dim_) =
            window_[static_cast<std::size_t>(i)];
    }
    return stacked;
}

std::vector<Eigen::VectorXd> DmIdentifier::impulse_estimate() const {
    const double gain = quantizer_.gain(variance_.stddev());
    std::vector<Eigen::VectorXd> h;
    h.reserve(static_cast<std::size_t>(kappa_) + 1);
    for (int i = 0; i <= kappa_; ++i) {
        h.push_back(wls_.estimate().segment(i * input_dim_, input_dim_) / gain);
    }
    return h;
}

void DmIdentifier::update(const Eigen::VectorXd& phi, int level) {
    const Eigen::VectorXd regressor = build_regressor(phi);
    wls_.update(regressor, static_cast<double>(level), options_.beta);
    ++step_;
    if (step_ > options_.burn_in) {
        variance_.update(level);
    }
    if ((step_ - 1) % options_.recover_refresh == 0 || step_ == 1) {
        theta_star_ = recover(impulse_estimate(), na_, nb_, kappa_);
    }
}

} // namespace qident
