#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bri {

using Cell = std::optional<double>;

/// Normalized indicator values of one entity. Present cells lie in [0,1].
class IndicatorVector {
public:
    IndicatorVector() = default;
    explicit IndicatorVector(std::vector<Cell> cells);

    static IndicatorVector complete(std::span<const double> values);

    std::size_t size() const noexcept { return cells_.size(); }
    const Cell& operator[](std::size_t i) const { return cells_[i]; }
    std::span<const Cell> cells() const noexcept { return cells_; }

    std::size_t missing_count() const noexcept;
    bool is_complete() const noexcept { return missing_count() == 0; }

    friend bool operator==(const IndicatorVector&, const IndicatorVector&) = default;

private:
    std::vector<Cell> cells_;
};

struct Entity {
    std::string name;
    IndicatorVector values;

    friend bool operator==(const Entity&, const Entity&) = default;
};

using Dataset = std::vector<Entity>;

/// Fraction of indicators that were actually observed.
struct CoverageWeight {
    double g = 1.0;
    std::size_t n_missing = 0;
};

/// Readiness class as annotated; the enumerator order is the tie-break order.
enum class Label { High = 0, Mid = 1, Low = 2 };

std::string_view to_string(Label label) noexcept;
std::optional<Label> parse_label(std::string_view text) noexcept;

} // namespace bri
