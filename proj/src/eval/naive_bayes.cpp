#include "bri/naive_bayes.hpp"

#include "bri/error.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace bri {

GaussianNaiveBayes GaussianNaiveBayes::fit(std::span<const LabeledPoint> train) {
    struct Sums {
        std::size_t n = 0;
        Features sum{};
        Features sum_sq{};
    };
    std::map<Label, Sums> per_class;
    for (const LabeledPoint& p : train) {
        Sums& s = per_class[p.label];
        ++s.n;
        for (std::size_t f = 0; f < 2; ++f) s.sum[f] += p.features[f];
    }
    if (per_class.size() < 2) throw DegenerateTrainingSet("naive Bayes needs at least two classes");

    GaussianNaiveBayes model;
    for (const auto& [label, s] : per_class) {
        if (s.n < 2) {
            throw DegenerateTrainingSet("naive Bayes needs two points of class '" +
                                        std::string(to_string(label)) + "'");
        }
    }
    // second pass for the centered variance; it depends only on class sums
    for (const LabeledPoint& p : train) {
        Sums& s = per_class[p.label];
        for (std::size_t f = 0; f < 2; ++f) {
            const double d = p.features[f] - s.sum[f] / static_cast<double>(s.n);
            s.sum_sq[f] += d * d;
        }
    }
    const auto total = static_cast<double>(train.size());
    for (const auto& [label, s] : per_class) {
        ClassStats stats{label, std::log(static_cast<double>(s.n) / total), {}, {}};
        for (std::size_t f = 0; f < 2; ++f) {
            stats.mean[f] = s.sum[f] / static_cast<double>(s.n);
            stats.variance[f] = std::max(s.sum_sq[f] / static_cast<double>(s.n), kVarianceFloor);
        }
        model.classes_.push_back(stats);
    }
    return model;
}

std::vector<std::pair<Label, double>> GaussianNaiveBayes::log_joint(const Features& x) const {
    std::vector<std::pair<Label, double>> out;
    out.reserve(classes_.size());
    for (const ClassStats& c : classes_) {
        double lp = c.log_prior;
        for (std::size_t f = 0; f < 2; ++f) {
            const double d = x[f] - c.mean[f];
            lp += -0.5 * std::log(2.0 * std::numbers::pi * c.variance[f]) - d * d / (2.0 * c.variance[f]);
        }
        out.emplace_back(c.label, lp);
    }
    return out;
}

Label GaussianNaiveBayes::classify(const Features& x) const {
    const auto scores = log_joint(x);
    auto best = scores.front();
    for (const auto& s : scores) {
        if (s.second > best.second) best = s;
    }
    return best.first;
}

} // namespace bri
