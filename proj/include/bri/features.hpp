#pragma once

#include "bri/execution.hpp"
#include "bri/imputation.hpp"
#include "bri/ingest.hpp"
#include "bri/types.hpp"
#include "bri/weighting.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bri {

/// (weight, score) of one entity.
using Features = std::array<double, 2>;

struct LabeledPoint {
    std::string name;
    Features features{};
    Label label = Label::Low;
};

enum class Granularity { ThreeClass, TwoClass };

/// Label set of a granularity in tie-break order. Two-class drops Mid.
std::vector<Label> classes_of(Granularity granularity);
std::string_view to_string(Granularity granularity) noexcept;
/// "3" or "2".
Granularity parse_granularity(std::string_view text);

/// Points whose label belongs to the granularity, order preserved.
std::vector<LabeledPoint> restrict_to(std::span<const LabeledPoint> points, Granularity granularity);

/// Runs the ranking pipeline and pairs each labeled entity with
/// (weight(g), score). Output follows dataset order; unlabeled entities are
/// skipped. Throws UsageError naming a labeled country absent from the data.
std::vector<LabeledPoint> featurize(const Dataset& dataset, const LabelSet& labels,
                                    const WeightingScheme& scheme, const ImputationConfig& cfg,
                                    Execution exec = Execution::Parallel);

/// Same pipeline with weighting disabled: features (1, similarity).
std::vector<LabeledPoint> baseline2_featurize(const Dataset& dataset, const LabelSet& labels,
                                              const ImputationConfig& cfg,
                                              Execution exec = Execution::Parallel);

/// Accuracy of always predicting the most populous class of the
/// granularity-restricted points. Throws UsageError when nothing remains.
double baseline1_accuracy(std::span<const LabeledPoint> points, Granularity granularity);

} // namespace bri
