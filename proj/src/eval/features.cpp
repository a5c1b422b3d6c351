#include "bri/features.hpp"

#include "bri/error.hpp"
#include "bri/ranking.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace bri {

std::vector<Label> classes_of(Granularity granularity) {
    if (granularity == Granularity::TwoClass) return {Label::High, Label::Low};
    return {Label::High, Label::Mid, Label::Low};
}

std::string_view to_string(Granularity granularity) noexcept {
    return granularity == Granularity::TwoClass ? "2-class" : "3-class";
}

Granularity parse_granularity(std::string_view text) {
    if (text == "3") return Granularity::ThreeClass;
    if (text == "2") return Granularity::TwoClass;
    throw UsageError("granularity must be 2 or 3, got '" + std::string(text) + "'");
}

std::vector<LabeledPoint> restrict_to(std::span<const LabeledPoint> points, Granularity granularity) {
    std::vector<LabeledPoint> out;
    for (const LabeledPoint& p : points) {
        if (granularity == Granularity::ThreeClass || p.label != Label::Mid) out.push_back(p);
    }
    return out;
}

namespace {

template <typename MakeFeatures>
std::vector<LabeledPoint> label_ranking(const Dataset& dataset, const LabelSet& labels,
                                        const std::vector<ScoredCountry>& ranking,
                                        MakeFeatures make) {
    std::unordered_map<std::string, const ScoredCountry*> by_name;
    for (const ScoredCountry& s : ranking) by_name.emplace(s.name, &s);

    std::unordered_map<std::string, Label> label_of;
    for (const auto& [name, label] : labels) {
        if (!by_name.count(name)) throw UsageError("labeled country '" + name + "' is not in the dataset");
        label_of.emplace(name, label);
    }

    std::vector<LabeledPoint> points;
    for (const Entity& e : dataset) {
        auto it = label_of.find(e.name);
        if (it == label_of.end()) continue;
        points.push_back({e.name, make(*by_name.at(e.name)), it->second});
    }
    return points;
}

} // namespace

std::vector<LabeledPoint> featurize(const Dataset& dataset, const LabelSet& labels,
                                    const WeightingScheme& scheme, const ImputationConfig& cfg,
                                    Execution exec) {
    const auto ranking = rank(dataset, scheme, cfg, exec);
    return label_ranking(dataset, labels, ranking,
                         [](const ScoredCountry& s) { return Features{s.weight, s.score}; });
}

std::vector<LabeledPoint> baseline2_featurize(const Dataset& dataset, const LabelSet& labels,
                                              const ImputationConfig& cfg, Execution exec) {
    const auto ranking = rank(dataset, WeightingScheme::linear(), cfg, exec);
    return label_ranking(dataset, labels, ranking,
                         [](const ScoredCountry& s) { return Features{1.0, s.similarity}; });
}

double baseline1_accuracy(std::span<const LabeledPoint> points, Granularity granularity) {
    const auto kept = restrict_to(points, granularity);
    if (kept.empty()) throw UsageError("no labeled points for baseline");
    std::map<Label, std::size_t> counts;
    for (const LabeledPoint& p : kept) ++counts[p.label];
    std::size_t best = 0;
    for (const auto& [label, n] : counts) best = std::max(best, n);
    return static_cast<double>(best) / static_cast<double>(kept.size());
}

} // namespace bri
