#include "bri/similarity.hpp"

#include "bri/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bri {

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw UsageError("vector length mismatch: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
    }
}

} // namespace

std::string_view to_string(Metric metric) noexcept {
    return metric == Metric::Cosine ? "cosine" : "euclidean";
}

Metric parse_metric(std::string_view text) {
    if (text == "cosine") return Metric::Cosine;
    if (text == "euclidean") return Metric::Euclidean;
    throw UsageError("metric must be cosine or euclidean, got '" + std::string(text) + "'");
}

std::vector<double> zero_fill(const IndicatorVector& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].value_or(0.0);
    return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b);
    double dot = 0.0;
    double norm_a = 0.0;
    double norm_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        norm_a += a[i] * a[i];
        norm_b += b[i] * b[i];
    }
    if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
    const double cos = dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
    // rounding can push self-similarity a hair above 1
    return std::clamp(cos, 0.0, 1.0);
}

double euclidean_similarity(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b);
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return 1.0 / (1.0 + std::sqrt(sq));
}

double similarity(Metric metric, std::span<const double> a, std::span<const double> b) {
    return metric == Metric::Cosine ? cosine_similarity(a, b) : euclidean_similarity(a, b);
}

} // namespace bri
