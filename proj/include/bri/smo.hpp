#pragma once

#include "bri/features.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace bri {

struct SmoConfig {
    /// Box constraint on every multiplier.
    double c = 1.0;
    /// KKT tolerance.
    double tolerance = 1e-3;
    /// Round-off epsilon: smaller multiplier moves count as no progress.
    double epsilon = 1e-12;
    /// Cap on outer passes over the training set.
    std::size_t max_passes = 10000;
    /// Record the dual objective after every successful step (O(n^2) each).
    bool record_objective = false;
};

/// Row-major training matrix with +1/-1 targets.
class TrainingSet {
public:
    TrainingSet(std::size_t dim, std::vector<double> rows, std::vector<int> targets);

    std::size_t size() const noexcept { return targets_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    std::span<const double> row(std::size_t i) const { return {rows_.data() + i * dim_, dim_}; }
    int target(std::size_t i) const { return targets_[i]; }
    std::span<const int> targets() const noexcept { return targets_; }

private:
    std::size_t dim_;
    std::vector<double> rows_;
    std::vector<int> targets_;
};

/// Linear kernel, i.e. the degree-1 polynomial kernel <a, b>.
double linear_kernel(std::span<const double> a, std::span<const double> b);

/// W(alpha) = sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
double dual_objective(const TrainingSet& data, std::span<const double> alpha);

/// Largest KKT violation of (alpha, bias) where f(x) = <w, x> + bias:
/// free multipliers need y f(x) = 1, zero ones y f(x) >= 1, bounded ones
/// y f(x) <= 1.
double kkt_violation(const TrainingSet& data, std::span<const double> alpha, double bias, double c);

/// Binary soft-margin SVM trained with sequential minimal optimization.
struct BinarySvm {
    std::vector<double> alpha;
    std::vector<double> weights;
    double bias = 0.0;
    bool converged = false;
    std::size_t passes = 0;
    std::size_t steps = 0;
    double max_kkt_violation = 0.0;
    /// Dual objective after each successful step when recorded.
    std::vector<double> objective_trace;

    double decision(std::span<const double> x) const;
    /// +1 when decision >= 0.
    int predict(std::span<const double> x) const { return decision(x) >= 0.0 ? 1 : -1; }
};

/// Platt's SMO: alternate full sweeps and sweeps over non-bound multipliers,
/// pairing each KKT violator with the partner maximizing |E1 - E2|.
/// Throws DegenerateTrainingSet with fewer than two points or one class.
BinarySvm train_smo(const TrainingSet& data, const SmoConfig& cfg = {});

/// Multiclass SVM by one-vs-one voting; vote ties go to the earlier label.
/// Features are min-max scaled to [0,1] with bounds taken from the training
/// set before any machine sees them; a constant feature scales to 0.
class SvmClassifier {
public:
    static SvmClassifier fit(std::span<const LabeledPoint> train, const SmoConfig& cfg = {});

    Label classify(const Features& x) const;
    /// True when every pairwise machine met the KKT conditions.
    bool converged() const noexcept;

    struct Machine {
        Label positive;
        Label negative;
        BinarySvm svm;
    };
    const std::vector<Machine>& machines() const noexcept { return machines_; }

    Features scale(const Features& x) const;

private:
    std::vector<Label> labels_;
    std::vector<Machine> machines_;
    Features lo_{};
    Features span_{};
};

} // namespace bri
