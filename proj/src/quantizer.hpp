#ifndef QIDENT_QUANTIZER_HPP
#define QIDENT_QUANTIZER_HPP

#include <optional>
#include <string>
#include <vector>

namespace qident {

/// Identifiability verdict for a threshold set; `reason` is empty on accept.
struct IdentifiabilityVerdict {
    bool ok;
    std::string reason;
};

/// A single zero-crossing threshold carries only sign information, which is
/// invariant under scaling of the parameters, so that configuration is
/// rejected. Every other strictly increasing finite threshold set is fine.
IdentifiabilityVerdict check_identifiable(const std::vector<double>& thresholds);

/// Gain factor sum_i exp(-C_i^2 / (2 delta^2)) / (sqrt(2 pi) delta) relating
/// the quantized-output/input correlation to the parameter direction.
/// Pure formula; throws DomainError when delta <= 0.
double quantizer_gain(const std::vector<double>& thresholds, double delta);

/// Fixed-threshold quantizer mapping a real output to the index of the cell
/// (C_i, C_{i+1}] it falls in, with C_0 = -inf and C_{m+1} = +inf.
///
/// Immutable after construction and freely shareable. Construction validates
/// that the thresholds are finite, strictly increasing, and identifiable.
class Quantizer {
public:
    explicit Quantizer(std::vector<double> thresholds);

    int num_thresholds() const { return static_cast<int>(thresholds_.size()); }
    const std::vector<double>& thresholds() const { return thresholds_; }

    /// Cell index in {0,...,m}; a value equal to a threshold belongs to the
    /// lower cell.
    int quantize(double y) const;

    /// quantizer_gain evaluated on this threshold set.
    double gain(double delta) const;

private:
    std::vector<double> thresholds_;
};

} // namespace qident

#endif
