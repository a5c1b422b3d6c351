#include "bri/weighting.hpp"

#include "bri/error.hpp"

#include <cmath>
#include <string>

namespace bri {

WeightingScheme WeightingScheme::sigmoid(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw UsageError("gamma must lie strictly inside (0,1), got " + std::to_string(gamma));
    }
    return WeightingScheme(Kind::Sigmoid, gamma);
}

WeightingScheme WeightingScheme::parse(std::string_view name, double gamma) {
    if (name == "linear") return linear();
    if (name == "sigmoid") return sigmoid(gamma);
    throw UsageError("scheme must be linear or sigmoid, got '" + std::string(name) + "'");
}

std::string_view WeightingScheme::name() const noexcept {
    return kind_ == Kind::Linear ? "linear" : "sigmoid";
}

CoverageWeight coverage(const IndicatorVector& original) {
    const std::size_t n = original.size();
    const std::size_t missing = original.missing_count();
    if (n == 0) return {1.0, 0};
    return {static_cast<double>(n - missing) / static_cast<double>(n), missing};
}

double weight(const CoverageWeight& coverage, const WeightingScheme& scheme) noexcept {
    const double g = coverage.g;
    if (scheme.kind() == WeightingScheme::Kind::Linear) return g;
    if (g <= 0.0) return 0.0;
    if (g >= 1.0) return 1.0;
    const double gamma = scheme.gamma();
    const double ratio = (g * (1.0 - gamma)) / (gamma * (1.0 - g));
    return 1.0 / (1.0 + std::pow(ratio, -2.0));
}

} // namespace bri
