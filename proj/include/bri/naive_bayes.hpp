#pragma once

#include "bri/features.hpp"

#include <span>
#include <utility>
#include <vector>

namespace bri {

/// Gaussian naive Bayes over the two continuous features.
class GaussianNaiveBayes {
public:
    static constexpr double kVarianceFloor = 1e-9;

    /// Needs at least two classes with at least two points each; throws
    /// DegenerateTrainingSet otherwise.
    static GaussianNaiveBayes fit(std::span<const LabeledPoint> train);

    /// log P(class) + sum of per-feature log densities, per trained class in
    /// label order.
    std::vector<std::pair<Label, double>> log_joint(const Features& x) const;

    /// Highest log-joint; ties go to the earlier label (High < Mid < Low).
    Label classify(const Features& x) const;

    struct ClassStats {
        Label label;
        double log_prior;
        Features mean;
        Features variance;
    };
    const std::vector<ClassStats>& classes() const noexcept { return classes_; }

private:
    std::vector<ClassStats> classes_;
};

} // namespace bri
