#pragma once

#include "bri/types.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace bri {

enum class Metric { Cosine, Euclidean };

std::string_view to_string(Metric metric) noexcept;
/// Accepts "cosine" or "euclidean"; throws UsageError otherwise.
Metric parse_metric(std::string_view text);

/// Missing cells become 0.0, meaning "no information".
std::vector<double> zero_fill(const IndicatorVector& v);

/// Cosine of the angle between two non-negative vectors. Returns 0 when
/// either vector has zero norm. Throws UsageError on length mismatch.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// 1 / (1 + ||a - b||), so identical vectors score 1.
double euclidean_similarity(std::span<const double> a, std::span<const double> b);

double similarity(Metric metric, std::span<const double> a, std::span<const double> b);

} // namespace bri
