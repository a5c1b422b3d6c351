#include "bri/types.hpp"

#include "bri/error.hpp"

#include <algorithm>
#include <string>

namespace bri {

IndicatorVector::IndicatorVector(std::vector<Cell> cells) : cells_(std::move(cells)) {
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        const Cell& c = cells_[i];
        if (c && !(*c >= 0.0 && *c <= 1.0)) {
            throw UsageError("indicator " + std::to_string(i) + " value " + std::to_string(*c) +
                             " outside [0,1]");
        }
    }
}

IndicatorVector IndicatorVector::complete(std::span<const double> values) {
    return IndicatorVector(std::vector<Cell>(values.begin(), values.end()));
}

std::size_t IndicatorVector::missing_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(cells_.begin(), cells_.end(), [](const Cell& c) { return !c.has_value(); }));
}

std::string_view to_string(Label label) noexcept {
    switch (label) {
    case Label::High: return "high";
    case Label::Mid: return "mid";
    case Label::Low: return "low";
    }
    return "?";
}

std::optional<Label> parse_label(std::string_view text) noexcept {
    if (text == "high") return Label::High;
    if (text == "mid") return Label::Mid;
    if (text == "low") return Label::Low;
    return std::nullopt;
}

} // namespace bri
