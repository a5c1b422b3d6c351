#include "bri/ranking.hpp"

#include "bri/error.hpp"
#include "bri/similarity.hpp"

#include <algorithm>
#include <cstddef>
#include <string>

namespace bri {

std::vector<double> ideal_country(std::span<const IndicatorVector> rows) {
    if (rows.empty()) throw UsageError("ideal country needs at least one row");
    const std::size_t n = rows.front().size();
    std::vector<double> ideal(n, 0.0);
    for (const IndicatorVector& row : rows) {
        if (row.size() != n) throw UsageError("ragged rows in ideal country computation");
        for (std::size_t i = 0; i < n; ++i) {
            if (row[i]) ideal[i] = std::max(ideal[i], *row[i]);
        }
    }
    return ideal;
}

ScoredCountry score(const ImputedEntity& entity, std::span<const double> ideal,
                    const WeightingScheme& scheme) {
    ScoredCountry out;
    out.name = entity.name;
    out.similarity = cosine_similarity(zero_fill(entity.values), ideal);
    out.coverage = coverage(entity.original);
    out.weight = weight(out.coverage, scheme);
    out.score = out.similarity * out.weight;
    return out;
}

std::size_t IndexResult::row_of(const std::string& name) const {
    for (std::size_t i = 0; i < imputation.rows.size(); ++i) {
        if (imputation.rows[i].name == name) return i;
    }
    return static_cast<std::size_t>(-1);
}

IndexResult build_index(const Dataset& dataset, const WeightingScheme& scheme,
                        const ImputationConfig& cfg, Execution exec) {
    if (dataset.empty()) throw UsageError("empty dataset");

    IndexResult result;
    result.imputation = impute(dataset, cfg, exec);

    std::vector<IndicatorVector> imputed;
    imputed.reserve(result.imputation.rows.size());
    for (const ImputedEntity& row : result.imputation.rows) imputed.push_back(row.values);
    result.ideal = ideal_country(imputed);

    const auto& rows = result.imputation.rows;
    result.ranking.resize(rows.size());
    const auto count = static_cast<std::ptrdiff_t>(rows.size());
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            const auto u = static_cast<std::size_t>(i);
            result.ranking[u] = score(rows[u], result.ideal, scheme);
        }
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            const auto u = static_cast<std::size_t>(i);
            result.ranking[u] = score(rows[u], result.ideal, scheme);
        }
    }

    std::sort(result.ranking.begin(), result.ranking.end(),
              [](const ScoredCountry& a, const ScoredCountry& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.name < b.name;
              });
    for (std::size_t i = 0; i < result.ranking.size(); ++i) result.ranking[i].rank = i + 1;
    return result;
}

std::vector<ScoredCountry> rank(const Dataset& dataset, const WeightingScheme& scheme,
                                const ImputationConfig& cfg, Execution exec) {
    return build_index(dataset, scheme, cfg, exec).ranking;
}

} // namespace bri
