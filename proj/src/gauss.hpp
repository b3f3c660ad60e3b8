#ifndef QIDENT_GAUSS_HPP
#define QIDENT_GAUSS_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace qident {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;

/// Standard normal density f(x) = exp(-x^2/2) / sqrt(2*pi).
double std_normal_pdf(double x);

/// Standard normal distribution function, evaluated through erfc so the
/// tails keep full relative precision.
double std_normal_cdf(double x);

/// Inverse of std_normal_cdf on the open interval (0,1).
///
/// A rational minimax initial guess is polished with Newton steps on the
/// CDF, giving |F(quantile(p)) - p| at machine-precision level. Throws
/// DomainError for p <= 0 or p >= 1.
double std_normal_quantile(double p);

/// Counter-based pseudo-random generator.
///
/// Output i is a 64-bit mix of (key + i * golden), so a stream is a pure
/// function of (seed, counter): the same seed always reproduces the same
/// stream bit-for-bit, nearby seeds are decorrelated by the mixer, and
/// replica streams can be derived by seed offsetting.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = key_ + (++counter_) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform draw strictly inside (0,1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    /// Standard normal draw by inverse-CDF transform.
    double normal() { return std_normal_quantile(uniform01()); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Seeded sampler for N(mean, covariance).
///
/// The covariance is factored as L*L^T at construction; sampling maps
/// independent standard normals through the factor. Construction throws
/// FactorizationError when the matrix is not symmetric positive definite.
class MvnSampler {
public:
    MvnSampler(Eigen::VectorXd mean, const Eigen::MatrixXd& covariance,
               std::uint64_t seed);

    int dim() const { return static_cast<int>(mean_.size()); }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& factor() const { return factor_; }

    Eigen::VectorXd sample();
    std::vector<Eigen::VectorXd> sample(std::size_t count);

private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd factor_;
    CounterRng rng_;
};

} // namespace qident

#endif
