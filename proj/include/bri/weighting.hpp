#pragma once

#include "bri/types.hpp"

#include <string_view>

namespace bri {

/// How the coverage g of an entity penalizes its similarity score.
class WeightingScheme {
public:
    enum class Kind { Linear, Sigmoid };

    static WeightingScheme linear() noexcept { return WeightingScheme(Kind::Linear, 0.0); }
    /// gamma must lie strictly inside (0,1); the curve is singular at the ends.
    static WeightingScheme sigmoid(double gamma);
    /// "linear" or "sigmoid"; gamma is only checked for the sigmoid scheme.
    static WeightingScheme parse(std::string_view name, double gamma);

    Kind kind() const noexcept { return kind_; }
    double gamma() const noexcept { return gamma_; }
    std::string_view name() const noexcept;

    friend bool operator==(const WeightingScheme&, const WeightingScheme&) = default;

private:
    WeightingScheme(Kind kind, double gamma) noexcept : kind_(kind), gamma_(gamma) {}

    Kind kind_;
    double gamma_;
};

/// g = (N - n_missing) / N over the given (original, pre-imputation) mask.
/// An empty vector has full coverage.
CoverageWeight coverage(const IndicatorVector& original);

/// Linear: g. Sigmoid: (1 + (g(1-γ) / (γ(1-g)))^-2)^-1, equal to 0.5 at g = γ,
/// extended continuously with 0 at g = 0 and 1 at g = 1.
double weight(const CoverageWeight& coverage, const WeightingScheme& scheme) noexcept;

} // namespace bri
