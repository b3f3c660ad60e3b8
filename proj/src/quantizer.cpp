#include "quantizer.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "gauss.hpp"

namespace qident {

IdentifiabilityVerdict check_identifiable(const std::vector<double>& thresholds) {
    if (thresholds.empty()) {
        return {false, "threshold set is empty"};
    }
    for (double c : thresholds) {
        if (!std::isfinite(c)) return {false, "thresholds must be finite"};
    }
    for (std::size_t i = 1; i < thresholds.size(); ++i) {
        if (!(thresholds[i - 1] < thresholds[i])) {
            return {false, "thresholds must be strictly increasing"};
        }
    }
    if (thresholds.size() == 1 && thresholds[0] == 0.0) {
        return {false,
                "unidentifiable quantizer: a single threshold at zero only "
                "preserves sign information, which is scale invariant"};
    }
    return {true, ""};
}

double quantizer_gain(const std::vector<double>& thresholds, double delta) {
    if (!(delta > 0.0)) {
        throw DomainError("quantizer_gain: delta must be positive");
    }
    double sum = 0.0;
    for (double c : thresholds) {
        sum += std::exp(-c * c / (2.0 * delta * delta));
    }
    return kInvSqrt2Pi * sum / delta;
}

Quantizer::Quantizer(std::vector<double> thresholds)
    : thresholds_(std::move(thresholds)) {
    auto verdict = check_identifiable(thresholds_);
    if (!verdict.ok) {
        throw DomainError("Quantizer: " + verdict.reason);
    }
}

int Quantizer::quantize(double y) const {
    // index of the first threshold with y <= C_i, i.e. count of C_i < y
    auto it = std::lower_bound(thresholds_.begin(), thresholds_.end(), y);
    return static_cast<int>(it - thresholds_.begin());
}

double Quantizer::gain(double delta) const {
    return quantizer_gain(thresholds_, delta);
}

} // namespace qident
