#pragma once

#include "bri/execution.hpp"
#include "bri/imputation.hpp"
#include "bri/types.hpp"
#include "bri/weighting.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace bri {

struct ScoredCountry {
    std::string name;
    double similarity = 0.0;
    CoverageWeight coverage;
    double weight = 0.0;
    double score = 0.0;
    /// 1-based position; 0 until ranked.
    std::size_t rank = 0;
};

/// Element-wise maximum over present cells; a column with no present cell
/// yields 0. Throws UsageError on empty input or ragged rows.
std::vector<double> ideal_country(std::span<const IndicatorVector> rows);

/// Scores an imputed entity against the ideal vector.
ScoredCountry score(const ImputedEntity& entity, std::span<const double> ideal,
                    const WeightingScheme& scheme);

/// Everything the ranking pipeline computed, kept for detail views.
struct IndexResult {
    ImputationResult imputation;
    std::vector<double> ideal;
    /// Sorted by descending score, ties by ascending name.
    std::vector<ScoredCountry> ranking;

    /// Position of `name` in imputation.rows, or npos.
    std::size_t row_of(const std::string& name) const;
};

/// impute -> ideal over imputed rows -> score -> sort.
/// Throws UsageError on an empty dataset.
IndexResult build_index(const Dataset& dataset, const WeightingScheme& scheme,
                        const ImputationConfig& cfg, Execution exec = Execution::Parallel);

std::vector<ScoredCountry> rank(const Dataset& dataset, const WeightingScheme& scheme,
                                const ImputationConfig& cfg,
                                Execution exec = Execution::Parallel);

} // namespace bri
