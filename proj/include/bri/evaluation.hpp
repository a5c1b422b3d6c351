#pragma once

#include "bri/execution.hpp"
#include "bri/features.hpp"
#include "bri/smo.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bri {

enum class ClassifierKind { NaiveBayes, Svm };

std::string_view to_string(ClassifierKind kind) noexcept;
/// "nb" or "svm".
ClassifierKind parse_classifier(std::string_view text);

struct EvalReport {
    std::vector<double> per_fold_accuracy;
    double mean_accuracy = 0.0;
    /// Row/column order of the confusion matrix.
    std::vector<Label> classes;
    /// confusion[true][predicted], pooled over folds.
    std::vector<std::vector<std::size_t>> confusion;
    std::size_t folds_requested = 0;
    /// Lowered to the smallest class count when that is below the request.
    std::size_t folds_used = 0;
    ClassifierKind classifier = ClassifierKind::Svm;
    Granularity granularity = Granularity::ThreeClass;
    std::uint64_t seed = 0;
    /// False when some SVM stopped at the pass cap.
    bool converged = true;

    std::size_t evaluated() const;
    /// Diagonal over total of the pooled confusion matrix.
    double pooled_accuracy() const;
};

/// Fold index of every point: each class is shuffled with the seed and dealt
/// round-robin, continuing the deal across classes so fold sizes stay level.
std::vector<std::size_t> stratified_folds(std::span<const LabeledPoint> points, std::size_t folds,
                                          std::uint64_t seed);

/// Stratified k-fold evaluation over the granularity-restricted points.
/// Throws UsageError on empty input or folds < 2, DegenerateTrainingSet when
/// some class has fewer than two members.
EvalReport cross_validate(std::span<const LabeledPoint> points, ClassifierKind classifier,
                          std::size_t folds, Granularity granularity, std::uint64_t seed,
                          Execution exec = Execution::Parallel, const SmoConfig& smo = {});

enum class SweepAxis { Gamma, Neighbors };

std::string_view to_string(SweepAxis axis) noexcept;
SweepAxis parse_axis(std::string_view text);

/// Parameter grid values reported for each axis.
std::vector<double> default_sweep_values(SweepAxis axis);

/// Either "lo:hi:step" or a comma-separated list.
std::vector<double> parse_sweep_values(std::string_view text);

struct SweepTable {
    SweepAxis axis = SweepAxis::Gamma;
    std::vector<double> values;
    std::vector<Granularity> granularities;
    /// cells[granularity][value]
    std::vector<std::vector<EvalReport>> cells;
};

/// Builds features for one axis value; must be safe to call concurrently.
using PointsBuilder = std::function<std::vector<LabeledPoint>(double value)>;

SweepTable sweep(const PointsBuilder& build, SweepAxis axis, std::span<const double> values,
                 std::span<const Granularity> granularities, ClassifierKind classifier,
                 std::size_t folds, std::uint64_t seed, Execution exec = Execution::Parallel);

/// Accuracy in percent with one decimal, e.g. "47.4".
std::string format_percent(double accuracy);

/// Plain-text grid: header row of axis values, one accuracy row per
/// granularity.
std::string format_sweep_table(const SweepTable& table);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const SweepTable& table);

} // namespace bri
