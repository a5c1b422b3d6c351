#include "fixtures.hpp"
#include "qp_oracle.hpp"

#include "bri/error.hpp"
#include "bri/evaluation.hpp"
#include "bri/features.hpp"
#include "bri/naive_bayes.hpp"
#include "bri/ranking.hpp"
#include "bri/smo.hpp"
#include "bri/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace bri;

namespace {

// Bayes rule by hand on the 4-point set below, query (0.6, 0.4):
// both classes have variance 0.01 per feature and prior 1/2.
constexpr double kLogJointHigh = -6.4258540609812;
constexpr double kLogJointLow = -4.4258540609812;
constexpr double kPosteriorHigh = 0.11920292202211755;

std::vector<LabeledPoint> four_points() {
    return {{"h1", {0.8, 0.9}, Label::High},
            {"h2", {0.6, 0.7}, Label::High},
            {"l1", {0.2, 0.1}, Label::Low},
            {"l2", {0.4, 0.3}, Label::Low}};
}

std::vector<LabeledPoint> clusters(Rng& rng, std::size_t per_class, double spread) {
    std::vector<LabeledPoint> out;
    const Label labels[] = {Label::High, Label::Mid, Label::Low};
    const double centers[] = {0.85, 0.5, 0.15};
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < per_class; ++i) {
            out.push_back({"p" + std::to_string(c) + "_" + std::to_string(i),
                           {centers[c] + spread * (rng.uniform() - 0.5), centers[c] + spread * (rng.uniform() - 0.5)},
                           labels[c]});
        }
    }
    return out;
}

std::vector<LabeledPoint> with_counts(std::size_t high, std::size_t mid, std::size_t low) {
    std::vector<LabeledPoint> out;
    for (std::size_t i = 0; i < high; ++i) out.push_back({"h" + std::to_string(i), {0.9, 0.9}, Label::High});
    for (std::size_t i = 0; i < mid; ++i) out.push_back({"m" + std::to_string(i), {0.5, 0.5}, Label::Mid});
    for (std::size_t i = 0; i < low; ++i) out.push_back({"l" + std::to_string(i), {0.1, 0.1}, Label::Low});
    return out;
}

} // namespace

TEST_CASE("naive bayes against a hand calculation") {
    const auto points = four_points();
    const auto nb = GaussianNaiveBayes::fit(points);
    REQUIRE(nb.classes().size() == 2);
    CHECK(nb.classes()[0].variance[0] == doctest::Approx(0.01).epsilon(1e-9));
    const auto joint = nb.log_joint({0.6, 0.4});
    REQUIRE(joint.size() == 2);
    CHECK(joint[0].first == Label::High);
    CHECK(joint[0].second == doctest::Approx(kLogJointHigh).epsilon(1e-9));
    CHECK(joint[1].second == doctest::Approx(kLogJointLow).epsilon(1e-9));
    const double posterior = 1.0 / (1.0 + std::exp(joint[1].second - joint[0].second));
    CHECK(posterior == doctest::Approx(kPosteriorHigh).epsilon(1e-9));
    CHECK(nb.classify({0.6, 0.4}) == Label::Low);
    // symmetric setup: the midpoint ties and goes to High
    CHECK(nb.classify({0.5, 0.5}) == Label::High);
}

TEST_CASE("naive bayes basics") {
    Rng rng(4);
    const auto pts = clusters(rng, 20, 0.1);
    const auto nb = GaussianNaiveBayes::fit(pts);
    for (const auto& p : pts) CHECK(nb.classify(p.features) == p.label);

    auto shuffled = pts;
    rng.shuffle(std::span(shuffled));
    const auto again = GaussianNaiveBayes::fit(shuffled);
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(again.classes()[c].mean[0] == doctest::Approx(nb.classes()[c].mean[0]).epsilon(1e-12));
        CHECK(again.classes()[c].variance[1] == doctest::Approx(nb.classes()[c].variance[1]).epsilon(1e-12));
    }

    // identical points: variance floor keeps the densities finite
    const std::vector<LabeledPoint> flat{{"a", {0.5, 0.5}, Label::High}, {"b", {0.5, 0.5}, Label::High},
                                         {"c", {0.2, 0.2}, Label::Low}, {"d", {0.2, 0.2}, Label::Low}};
    const auto f = GaussianNaiveBayes::fit(flat);
    CHECK(f.classes()[0].variance[0] == GaussianNaiveBayes::kVarianceFloor);
    CHECK(f.classify({0.49, 0.5}) == Label::High);

    CHECK_THROWS_AS(GaussianNaiveBayes::fit(std::vector<LabeledPoint>{{"a", {0.1, 0.1}, Label::High},
                                                                      {"b", {0.2, 0.2}, Label::High}}),
                    DegenerateTrainingSet);
    CHECK_THROWS_AS(GaussianNaiveBayes::fit(std::vector<LabeledPoint>{{"a", {0.1, 0.1}, Label::High},
                                                                      {"b", {0.2, 0.2}, Label::High},
                                                                      {"c", {0.2, 0.2}, Label::Low}}),
                    DegenerateTrainingSet);
}

TEST_CASE("brute-force dual reaches the known optimum") {
    // optimal objectives from an independent QP solver, C = 1
    const std::vector<double> known{25.0 / 74.0, 2.596538461538246, 8.17749999999994, 4.0 / 9.0, 40.0 / 81.0};
    const auto sets = oracle::hand_sets();
    REQUIRE(sets.size() == known.size());
    for (std::size_t s = 0; s < sets.size(); ++s) {
        CAPTURE(s);
        const auto exact = oracle::solve_dual(sets[s], 1.0);
        REQUIRE(exact.found);
        CHECK(exact.objective == doctest::Approx(known[s]).epsilon(1e-9));
    }
}

TEST_CASE("smo matches the brute-force dual on hand-crafted sets") {
    const auto sets = oracle::hand_sets();
    REQUIRE(sets.size() == 5);
    for (std::size_t s = 0; s < sets.size(); ++s) {
        CAPTURE(s);
        const TrainingSet& data = sets[s];
        const auto exact = oracle::solve_dual(data, 1.0);
        REQUIRE(exact.found);
        SmoConfig cfg;
        cfg.record_objective = true;
        const BinarySvm svm = train_smo(data, cfg);
        CHECK(svm.converged);
        CHECK(svm.max_kkt_violation <= cfg.tolerance);
        CHECK(kkt_violation(data, svm.alpha, svm.bias, cfg.c) <= cfg.tolerance);
        CHECK(dual_objective(data, svm.alpha) == doctest::Approx(exact.objective).epsilon(1e-3));
        for (double a : svm.alpha) {
            CHECK(a >= 0.0);
            CHECK(a <= cfg.c);
        }
        for (std::size_t i = 1; i < svm.objective_trace.size(); ++i) {
            CHECK(svm.objective_trace[i] >= svm.objective_trace[i - 1] - 1e-12);
        }
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double ref = exact.decision(data.row(i));
            CHECK(svm.decision(data.row(i)) == doctest::Approx(ref).epsilon(0.01).scale(1.0));
            if (std::abs(ref) > 1e-6) CHECK((svm.decision(data.row(i)) >= 0.0) == (ref >= 0.0));
        }
    }
}

TEST_CASE("smo edge cases") {
    SUBCASE("separable data is fit perfectly") {
        Rng rng(9);
        std::vector<double> rows;
        std::vector<int> y;
        for (int i = 0; i < 30; ++i) {
            const bool pos = i % 2 == 0;
            rows.push_back(pos ? 0.7 + 0.3 * rng.uniform() : 0.3 * rng.uniform());
            rows.push_back(rng.uniform());
            y.push_back(pos ? 1 : -1);
        }
        // C = 1 is too soft for a unit-scale gap; a hard-ish margin separates
        const TrainingSet data(2, rows, y);
        SmoConfig cfg;
        cfg.c = 100.0;
        const BinarySvm svm = train_smo(data, cfg);
        for (std::size_t i = 0; i < data.size(); ++i) CHECK(svm.predict(data.row(i)) == data.target(i));
    }
    SUBCASE("conflicting duplicates") {
        const TrainingSet data(2, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5}, {1, -1, 1, -1});
        const BinarySvm svm = train_smo(data);
        std::size_t right = 0;
        for (std::size_t i = 0; i < data.size(); ++i) right += svm.predict(data.row(i)) == data.target(i);
        CHECK(right <= 2);
        CHECK(svm.converged);
    }
    SUBCASE("pass cap reports non-convergence") {
        const auto data = oracle::hand_sets()[2];
        SmoConfig cfg;
        cfg.max_passes = 1;
        cfg.tolerance = 1e-12;
        const BinarySvm svm = train_smo(data, cfg);
        CHECK_FALSE(svm.converged);
        CHECK(svm.passes == 1);
    }
    SUBCASE("degenerate sets") {
        CHECK_THROWS_AS(train_smo(TrainingSet(1, {0.1}, {1})), DegenerateTrainingSet);
        CHECK_THROWS_AS(train_smo(TrainingSet(1, {0.1, 0.2}, {1, 1})), DegenerateTrainingSet);
        CHECK_THROWS_AS(TrainingSet(2, {0.1, 0.2, 0.3}, {1, -1}), UsageError);
        CHECK_THROWS_AS(TrainingSet(1, {0.1, 0.2}, {1, 0}), UsageError);
    }
}

TEST_CASE("multiclass svm") {
    Rng rng(12);
    const auto pts = clusters(rng, 15, 0.2);
    const auto svm = SvmClassifier::fit(pts);
    CHECK(svm.machines().size() == 3);
    CHECK(svm.converged());
    std::size_t right = 0;
    for (const auto& p : pts) right += svm.classify(p.features) == p.label;
    CHECK(right == pts.size());
    const Features scaled = svm.scale({0.85 + 0.1, 0.15 - 0.1});
    CHECK(scaled[0] >= 0.9);
    CHECK(scaled[1] <= 0.1);

    // two classes only, High and Low
    auto two = restrict_to(pts, Granularity::TwoClass);
    CHECK(SvmClassifier::fit(two).machines().size() == 1);
}

TEST_CASE("baseline 1") {
    const auto pts = with_counts(45, 55, 90);
    CHECK(baseline1_accuracy(pts, Granularity::ThreeClass) == doctest::Approx(90.0 / 190.0));
    CHECK(baseline1_accuracy(pts, Granularity::TwoClass) == doctest::Approx(90.0 / 135.0));
    CHECK(format_percent(baseline1_accuracy(pts, Granularity::ThreeClass)) == "47.4");
    CHECK(format_percent(baseline1_accuracy(pts, Granularity::TwoClass)) == "66.7");
    CHECK(baseline1_accuracy(with_counts(0, 4, 0), Granularity::ThreeClass) == 1.0);
    CHECK_THROWS_AS(baseline1_accuracy(with_counts(0, 4, 0), Granularity::TwoClass), UsageError);
}

TEST_CASE("features on the worked example") {
    const LabelSet labels{{"c0", Label::Low}, {"c1", Label::High}, {"c3", Label::Mid}};
    const auto pts = featurize(fixtures::four_countries(), labels, WeightingScheme::linear(), {2, Metric::Cosine});
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].name == "c0");
    CHECK(pts[0].features[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(pts[0].features[1] == doctest::Approx(0.6597704398234644).epsilon(1e-12));
    CHECK(pts[1].features[0] == 1.0);
    CHECK(pts[1].features[1] == doctest::Approx(0.9978313876828381).epsilon(1e-12));

    const auto b2 = baseline2_featurize(fixtures::four_countries(), labels, {2, Metric::Cosine});
    CHECK(b2[0].features[0] == 1.0);
    CHECK(b2[0].features[1] == doctest::Approx(0.9896556597351966).epsilon(1e-12));
    CHECK(b2[1].features == pts[1].features);

    CHECK_THROWS_AS(featurize(fixtures::four_countries(), {{"nowhere", Label::Low}}, WeightingScheme::linear(), {}),
                    UsageError);

    Dataset with_empty = fixtures::four_countries();
    with_empty.push_back({"blank", fixtures::vec({std::nullopt, std::nullopt, std::nullopt})});
    const LabelSet blank{{"blank", Label::Low}};
    CHECK(featurize(with_empty, blank, WeightingScheme::linear(), {2, Metric::Cosine})[0].features == Features{0.0, 0.0});
    CHECK(baseline2_featurize(with_empty, blank, {2, Metric::Cosine})[0].features == Features{1.0, 0.0});
}

TEST_CASE("stratified folds") {
    const auto pts = with_counts(12, 15, 23);
    const auto folds = stratified_folds(pts, 10, 5);
    REQUIRE(folds.size() == pts.size());
    std::vector<std::size_t> size(10, 0);
    for (std::size_t f : folds) ++size[f];
    CHECK(*std::max_element(size.begin(), size.end()) - *std::min_element(size.begin(), size.end()) <= 1);
    // each class spreads evenly as well
    for (Label l : {Label::High, Label::Mid, Label::Low}) {
        std::vector<std::size_t> per(10, 0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (pts[i].label == l) ++per[folds[i]];
        }
        CHECK(*std::max_element(per.begin(), per.end()) - *std::min_element(per.begin(), per.end()) <= 1);
    }
    CHECK(stratified_folds(pts, 10, 5) == folds);
}

TEST_CASE("cross validation") {
    Rng rng(31);
    SUBCASE("separable data") {
        const auto pts = clusters(rng, 20, 0.1);
        for (auto kind : {ClassifierKind::NaiveBayes, ClassifierKind::Svm}) {
            const auto r = cross_validate(pts, kind, 10, Granularity::ThreeClass, 1);
            CHECK(r.mean_accuracy >= 0.95);
        }
    }
    SUBCASE("report invariants and reproducibility") {
        const auto pts = clusters(rng, 17, 0.9);
        for (auto kind : {ClassifierKind::NaiveBayes, ClassifierKind::Svm}) {
            for (auto g : {Granularity::ThreeClass, Granularity::TwoClass}) {
                const auto r = cross_validate(pts, kind, 10, g, 99);
                const double mean = std::accumulate(r.per_fold_accuracy.begin(), r.per_fold_accuracy.end(), 0.0) /
                                    static_cast<double>(r.per_fold_accuracy.size());
                CHECK(r.mean_accuracy == doctest::Approx(mean).epsilon(1e-15));
                CHECK(r.evaluated() == restrict_to(pts, g).size());
                CHECK(r.classes == classes_of(g));
                std::size_t diag = 0;
                for (std::size_t i = 0; i < r.classes.size(); ++i) {
                    diag += r.confusion[i][i];
                    const auto row = std::accumulate(r.confusion[i].begin(), r.confusion[i].end(), std::size_t{0});
                    CHECK(row == 17);
                }
                CHECK(r.pooled_accuracy() == doctest::Approx(static_cast<double>(diag) / r.evaluated()));
                const auto again = cross_validate(pts, kind, 10, g, 99, Execution::Serial);
                CHECK(again.per_fold_accuracy == r.per_fold_accuracy);
                CHECK(again.confusion == r.confusion);
            }
        }
    }
    SUBCASE("folds shrink to the smallest class") {
        const auto pts = clusters(rng, 4, 0.1);
        const auto r = cross_validate(pts, ClassifierKind::NaiveBayes, 10, Granularity::ThreeClass, 1);
        CHECK(r.folds_requested == 10);
        CHECK(r.folds_used == 4);
        CHECK(r.per_fold_accuracy.size() == 4);
    }
    SUBCASE("two folds on four points test each point once") {
        const std::vector<LabeledPoint> pts{{"a", {0.1, 0.1}, Label::High}, {"b", {0.2, 0.2}, Label::High},
                                            {"c", {0.8, 0.8}, Label::Low}, {"d", {0.9, 0.9}, Label::Low}};
        const auto folds = stratified_folds(pts, 2, 3);
        CHECK(folds[0] != folds[1]);
        CHECK(folds[2] != folds[3]);
        const auto r = cross_validate(pts, ClassifierKind::Svm, 2, Granularity::TwoClass, 3);
        CHECK(r.evaluated() == 4);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(cross_validate({}, ClassifierKind::Svm, 10, Granularity::ThreeClass, 1), UsageError);
        const auto pts = clusters(rng, 5, 0.1);
        CHECK_THROWS_AS(cross_validate(pts, ClassifierKind::Svm, 1, Granularity::ThreeClass, 1), UsageError);
        auto lonely = pts;
        lonely.push_back({"odd", {0.3, 0.3}, Label::Mid});
        lonely.erase(std::remove_if(lonely.begin(), lonely.end(),
                                    [](const LabeledPoint& p) { return p.label == Label::Mid && p.name != "odd"; }),
                     lonely.end());
        CHECK_THROWS_AS(cross_validate(lonely, ClassifierKind::Svm, 10, Granularity::ThreeClass, 1),
                        DegenerateTrainingSet);
    }
    SUBCASE("serial and parallel folds agree bitwise") {
        const auto pts = clusters(rng, 30, 0.8);
        for (auto kind : {ClassifierKind::NaiveBayes, ClassifierKind::Svm}) {
            const auto s = cross_validate(pts, kind, 10, Granularity::ThreeClass, 4, Execution::Serial);
            const auto p = cross_validate(pts, kind, 10, Granularity::ThreeClass, 4, Execution::Parallel);
            CHECK(s.per_fold_accuracy == p.per_fold_accuracy);
            CHECK(s.confusion == p.confusion);
        }
    }
}

TEST_CASE("shuffled labels stay near the majority baseline") {
    // permutation expectation: with features unrelated to labels, accuracy
    // averages out close to always guessing the largest class
    SynthConfig cfg;
    cfg.seed = 17;
    const SynthData synth = generate(cfg);
    const Dataset data = normalize(synth.data);
    const auto base = featurize(data, synth.labels, WeightingScheme::linear(), {});
    for (auto kind : {ClassifierKind::NaiveBayes, ClassifierKind::Svm}) {
        double total = 0.0;
        const int seeds = 20;
        for (int seed = 0; seed < seeds; ++seed) {
            auto pts = base;
            std::vector<Label> labels;
            for (const auto& p : pts) labels.push_back(p.label);
            Rng rng(static_cast<std::uint64_t>(seed) + 100);
            rng.shuffle(std::span(labels));
            for (std::size_t i = 0; i < pts.size(); ++i) pts[i].label = labels[i];
            total += cross_validate(pts, kind, 10, Granularity::ThreeClass, static_cast<std::uint64_t>(seed))
                         .mean_accuracy;
        }
        CHECK(std::abs(total / seeds - baseline1_accuracy(base, Granularity::ThreeClass)) <= 0.1);
    }
}

TEST_CASE("sweep") {
    CHECK(default_sweep_values(SweepAxis::Gamma).size() == 9);
    CHECK(default_sweep_values(SweepAxis::Neighbors) == std::vector<double>{1, 2, 3, 5, 10, 15, 20, 30, 40});
    const auto grid = parse_sweep_values("0.1:0.9:0.1");
    REQUIRE(grid.size() == 9);
    CHECK(grid[2] == 0.3);
    CHECK(grid.back() == 0.9);
    CHECK(parse_sweep_values("1,2,5") == std::vector<double>{1, 2, 5});
    CHECK_THROWS_AS(parse_sweep_values("1:0:0.1"), UsageError);
    CHECK_THROWS_AS(parse_sweep_values("a,b"), UsageError);
    CHECK_THROWS_AS(parse_axis("beta"), UsageError);

    SynthConfig cfg;
    cfg.n_countries = 60;
    cfg.seed = 3;
    const SynthData synth = generate(cfg);
    const Dataset data = normalize(synth.data);
    const PointsBuilder build = [&](double gamma) {
        return featurize(data, synth.labels, WeightingScheme::sigmoid(gamma), {}, Execution::Serial);
    };
    const std::vector<Granularity> grans{Granularity::ThreeClass, Granularity::TwoClass};

    SUBCASE("single value equals a direct run") {
        const std::vector<double> one{0.7};
        const SweepTable t = sweep(build, SweepAxis::Gamma, one, grans, ClassifierKind::NaiveBayes, 10, 2);
        const auto direct = cross_validate(build(0.7), ClassifierKind::NaiveBayes, 10, Granularity::TwoClass, 2);
        CHECK(t.cells[1][0].per_fold_accuracy == direct.per_fold_accuracy);
    }
    SUBCASE("table layout") {
        const auto values = default_sweep_values(SweepAxis::Gamma);
        const SweepTable t = sweep(build, SweepAxis::Gamma, values, grans, ClassifierKind::NaiveBayes, 10, 2);
        const SweepTable s =
            sweep(build, SweepAxis::Gamma, values, grans, ClassifierKind::NaiveBayes, 10, 2, Execution::Serial);
        CHECK(t.cells[0][4].confusion == s.cells[0][4].confusion);
        const std::string text = format_sweep_table(t);
        std::vector<std::string> lines;
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);) lines.push_back(line);
        REQUIRE(lines.size() == 4);
        CHECK(lines[0].rfind("gamma", 0) == 0);
        CHECK(std::count(lines[0].begin(), lines[0].end(), '|') == 9);
        CHECK(lines[2].rfind("3-class", 0) == 0);
        CHECK(lines[3].rfind("2-class", 0) == 0);
        CHECK(std::count(lines[3].begin(), lines[3].end(), '|') == 9);
        const auto json = to_json(t);
        CHECK(json["rows"].size() == 2);
        CHECK(json["rows"][0]["cells"].size() == 9);
    }
    SUBCASE("errors propagate") {
        const PointsBuilder broken = [](double) -> std::vector<LabeledPoint> { throw UsageError("boom"); };
        const std::vector<double> values{0.1, 0.2};
        CHECK_THROWS_AS(sweep(broken, SweepAxis::Gamma, values, grans, ClassifierKind::Svm, 10, 1), UsageError);
    }
}
