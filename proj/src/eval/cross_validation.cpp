#include "bri/evaluation.hpp"

#include "bri/error.hpp"
#include "bri/naive_bayes.hpp"
#include "bri/random.hpp"

#include <algorithm>
#include <exception>
#include <map>

namespace bri {

std::string_view to_string(ClassifierKind kind) noexcept {
    return kind == ClassifierKind::NaiveBayes ? "nb" : "svm";
}

ClassifierKind parse_classifier(std::string_view text) {
    if (text == "nb") return ClassifierKind::NaiveBayes;
    if (text == "svm") return ClassifierKind::Svm;
    throw UsageError("classifier must be nb or svm, got '" + std::string(text) + "'");
}

std::size_t EvalReport::evaluated() const {
    std::size_t total = 0;
    for (const auto& row : confusion) {
        for (std::size_t n : row) total += n;
    }
    return total;
}

double EvalReport::pooled_accuracy() const {
    const std::size_t total = evaluated();
    if (total == 0) return 0.0;
    std::size_t diagonal = 0;
    for (std::size_t i = 0; i < confusion.size(); ++i) diagonal += confusion[i][i];
    return static_cast<double>(diagonal) / static_cast<double>(total);
}

std::vector<std::size_t> stratified_folds(std::span<const LabeledPoint> points, std::size_t folds,
                                          std::uint64_t seed) {
    if (folds == 0) throw UsageError("fold count must be positive");
    std::map<Label, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < points.size(); ++i) members[points[i].label].push_back(i);

    Rng rng(seed);
    std::vector<std::size_t> fold_of(points.size(), 0);
    std::size_t deal = 0;
    for (auto& [label, idx] : members) {
        rng.shuffle(std::span<std::size_t>(idx));
        for (std::size_t i : idx) fold_of[i] = deal++ % folds;
    }
    return fold_of;
}

namespace {

struct FoldOutcome {
    double accuracy = 0.0;
    std::vector<std::pair<Label, Label>> predictions; // (truth, predicted)
    bool converged = true;
};

FoldOutcome run_fold(std::span<const LabeledPoint> points, std::span<const std::size_t> fold_of,
                     std::size_t fold, ClassifierKind kind, const SmoConfig& smo) {
    std::vector<LabeledPoint> train;
    std::vector<const LabeledPoint*> test;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (fold_of[i] == fold) {
            test.push_back(&points[i]);
        } else {
            train.push_back(points[i]);
        }
    }
    FoldOutcome out;
    auto evaluate = [&](const auto& model) {
        std::size_t correct = 0;
        for (const LabeledPoint* p : test) {
            const Label predicted = model.classify(p->features);
            out.predictions.emplace_back(p->label, predicted);
            if (predicted == p->label) ++correct;
        }
        out.accuracy = test.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(test.size());
    };
    if (kind == ClassifierKind::NaiveBayes) {
        evaluate(GaussianNaiveBayes::fit(train));
    } else {
        const auto model = SvmClassifier::fit(train, smo);
        out.converged = model.converged();
        evaluate(model);
    }
    return out;
}

} // namespace

EvalReport cross_validate(std::span<const LabeledPoint> points, ClassifierKind classifier,
                          std::size_t folds, Granularity granularity, std::uint64_t seed,
                          Execution exec, const SmoConfig& smo) {
    if (folds < 2) throw UsageError("cross-validation needs at least 2 folds");
    const std::vector<LabeledPoint> kept = restrict_to(points, granularity);
    if (kept.empty()) throw UsageError("no labeled points to evaluate");

    EvalReport report;
    report.classifier = classifier;
    report.granularity = granularity;
    report.seed = seed;
    report.folds_requested = folds;
    report.classes = classes_of(granularity);

    std::map<Label, std::size_t> counts;
    for (const LabeledPoint& p : kept) ++counts[p.label];
    std::size_t smallest = kept.size();
    for (const auto& [label, n] : counts) smallest = std::min(smallest, n);
    if (counts.size() < 2) throw DegenerateTrainingSet("cross-validation needs at least two classes");
    if (smallest < 2) throw DegenerateTrainingSet("every class needs at least two members");
    report.folds_used = std::min(folds, smallest);

    const std::vector<std::size_t> fold_of = stratified_folds(kept, report.folds_used, seed);
    std::vector<FoldOutcome> outcomes(report.folds_used);
    std::vector<std::exception_ptr> errors(report.folds_used);
    const auto count = static_cast<std::ptrdiff_t>(report.folds_used);
    auto kernel = [&](std::ptrdiff_t f) {
        const auto u = static_cast<std::size_t>(f);
        try {
            outcomes[u] = run_fold(kept, fold_of, u, classifier, smo);
        } catch (...) {
            errors[u] = std::current_exception();
        }
    };
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t f = 0; f < count; ++f) kernel(f);
    } else {
        for (std::ptrdiff_t f = 0; f < count; ++f) kernel(f);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::map<Label, std::size_t> index;
    for (std::size_t i = 0; i < report.classes.size(); ++i) index[report.classes[i]] = i;
    report.confusion.assign(report.classes.size(), std::vector<std::size_t>(report.classes.size(), 0));
    double sum = 0.0;
    for (const FoldOutcome& o : outcomes) {
        report.per_fold_accuracy.push_back(o.accuracy);
        sum += o.accuracy;
        report.converged = report.converged && o.converged;
        for (const auto& [truth, predicted] : o.predictions) {
            ++report.confusion[index.at(truth)][index.at(predicted)];
        }
    }
    report.mean_accuracy = sum / static_cast<double>(outcomes.size());
    return report;
}

} // namespace bri
