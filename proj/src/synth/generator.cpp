#include "bri/synth.hpp"

#include "bri/error.hpp"
#include "bri/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace bri {

void SynthConfig::validate() const {
    if (n_countries == 0) throw UsageError("country count must be positive");
    if (n_indicators == 0) throw UsageError("indicator count must be positive");
    double total = 0.0;
    for (double p : class_proportions) {
        if (!(p >= 0.0)) throw UsageError("class proportions must be non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw UsageError("class proportions must sum to 1");
    if (!(missing_rate >= 0.0 && missing_rate < 1.0)) throw UsageError("missing rate must lie in [0,1)");
    if (!(class_separation > 0.0)) throw UsageError("class separation must be positive");
    if (!(missing_skew >= 0.0 && missing_skew <= 1.0)) throw UsageError("missing skew must lie in [0,1]");
    if (complete_quota > n_countries) {
        throw UsageError("cannot force " + std::to_string(complete_quota) + " complete countries out of " +
                         std::to_string(n_countries));
    }
}

std::array<std::size_t, 3> class_counts(std::size_t n, const std::array<double, 3>& proportions) {
    std::array<std::size_t, 3> counts{};
    std::array<double, 3> remainder{};
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < 3; ++c) {
        const double exact = proportions[c] * static_cast<double>(n);
        // proportions like 45/190 reproduce the integer up to rounding
        const double floored = std::floor(exact + 1e-9);
        counts[c] = static_cast<std::size_t>(floored);
        remainder[c] = exact - floored;
        assigned += counts[c];
    }
    std::array<std::size_t, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[order[i % 3]];
    return counts;
}

std::array<double, 3> class_missing_rates(const SynthConfig& cfg) {
    const std::array<double, 3> tilt{1.0 - cfg.missing_skew, 1.0, 1.0 + cfg.missing_skew};
    double mean_tilt = 0.0;
    for (std::size_t c = 0; c < 3; ++c) mean_tilt += cfg.class_proportions[c] * tilt[c];
    std::array<double, 3> rates{};
    for (std::size_t c = 0; c < 3; ++c) {
        rates[c] = mean_tilt > 0.0 ? std::min(cfg.missing_rate * tilt[c] / mean_tilt, 0.95) : 0.0;
    }
    return rates;
}

namespace {

std::string padded(std::size_t n, std::size_t width) {
    std::string digits = std::to_string(n);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return digits;
}

} // namespace

Schema synthetic_schema(std::size_t n_indicators) {
    Schema schema;
    for (std::size_t k = 0; k < n_indicators; ++k) {
        schema.push_back({"ind" + padded(k + 1, 2), "Synthetic indicator " + std::to_string(k + 1),
                          std::string(kPillars[k % kPillars.size()]), Direction::HigherIsBetter,
                          Bounds{0.0, 1.0}});
    }
    return schema;
}

namespace {

double truncated_normal(Rng& rng, double mean, double sd) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        const double v = mean + sd * rng.normal();
        if (v >= 0.0 && v <= 1.0) return v;
    }
    return std::clamp(mean + sd * rng.normal(), 0.0, 1.0);
}

} // namespace

SynthData generate(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    const auto counts = class_counts(cfg.n_countries, cfg.class_proportions);
    std::vector<Label> labels;
    for (std::size_t c = 0; c < 3; ++c) labels.insert(labels.end(), counts[c], static_cast<Label>(c));
    rng.shuffle(std::span<Label>(labels));

    const std::array<double, 3> means{0.75, 0.5, 0.25};
    const double sd = 1.0 / cfg.class_separation;
    const auto rates = class_missing_rates(cfg);
    const std::size_t width = std::max<std::size_t>(3, std::to_string(cfg.n_countries).size());

    std::vector<std::vector<double>> values(cfg.n_countries);
    std::vector<std::vector<bool>> masked(cfg.n_countries);
    for (std::size_t i = 0; i < cfg.n_countries; ++i) {
        const auto cls = static_cast<std::size_t>(labels[i]);
        for (std::size_t k = 0; k < cfg.n_indicators; ++k) {
            // six decimals keeps the CSV compact and exactly re-readable
            values[i].push_back(std::round(truncated_normal(rng, means[cls], sd) * 1e6) / 1e6);
        }
        for (std::size_t k = 0; k < cfg.n_indicators; ++k) masked[i].push_back(rng.bernoulli(rates[cls]));
    }

    std::vector<std::size_t> order(cfg.n_countries);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t q = 0; q < cfg.complete_quota; ++q) masked[order[q]].assign(cfg.n_indicators, false);
    for (auto& mask : masked) {
        if (std::all_of(mask.begin(), mask.end(), [](bool m) { return m; })) {
            mask[rng.below(cfg.n_indicators)] = false;
        }
    }

    SynthData out;
    out.data.schema = synthetic_schema(cfg.n_indicators);
    for (std::size_t i = 0; i < cfg.n_countries; ++i) {
        const std::string name = "Country" + padded(i + 1, width);
        RawRow row{name, {}};
        for (std::size_t k = 0; k < cfg.n_indicators; ++k) {
            row.values.push_back(masked[i][k] ? std::nullopt : std::optional<double>(values[i][k]));
        }
        out.data.rows.push_back(std::move(row));
        out.labels.emplace_back(name, labels[i]);
    }
    return out;
}

} // namespace bri
