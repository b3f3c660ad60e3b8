#include "gauss.hpp"

#include <cmath>

#include "errors.hpp"

namespace qident {

double std_normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

namespace {

// Wichura's AS 241 rational approximation to the normal quantile,
// accurate to ~1e-15 over the full open interval.
double quantile_as241(double p) {
    const double q = p - 0.5;
    if (std::abs(q) < 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r +
                    4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r +
                  1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r +
                3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r +
                    2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r +
                  6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r +
                1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r < 5.0) {
        r -= 1.6;
        x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r +
                 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r +
               5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r +
             1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r +
                 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r +
               1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r +
             1.0);
    } else {
        r -= 5.0;
        x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r +
                 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r +
               1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r +
             6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r +
                 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r +
               1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r +
             1.0);
    }
    return std::copysign(x, q);
}

} // namespace

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("std_normal_quantile: p must lie strictly in (0,1)");
    }
    double x = quantile_as241(p);
    // Newton polish; in the far tails the density underflows and the
    // rational value already carries full precision.
    for (int i = 0; i < 2; ++i) {
        const double d = std_normal_pdf(x);
        if (d <= 0.0) break;
        x -= (std_normal_cdf(x) - p) / d;
    }
    return x;
}

MvnSampler::MvnSampler(Eigen::VectorXd mean, const Eigen::MatrixXd& covariance,
                       std::uint64_t seed)
    : mean_(std::move(mean)), rng_(seed) {
    const auto n = mean_.size();
    if (covariance.rows() != n || covariance.cols() != n) {
        throw DimensionError("MvnSampler: covariance shape does not match mean");
    }
    const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw FactorizationError("MvnSampler: covariance is not symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(covariance);
    if (llt.info() != Eigen::Success) {
        throw FactorizationError("MvnSampler: covariance is not positive definite");
    }
    factor_ = llt.matrixL();
}

Eigen::VectorXd MvnSampler::sample() {
    Eigen::VectorXd z(dim());
    for (int i = 0; i < dim(); ++i) z[i] = rng_.normal();
    return mean_ + factor_ * z;
}

std::vector<Eigen::VectorXd> MvnSampler::sample(std::size_t count) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(sample());
    return out;
}

} // namespace qident
