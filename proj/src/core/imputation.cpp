#include "bri/imputation.hpp"

#include "bri/error.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>

namespace bri {

void ImputationConfig::validate() const {
    if (neighbors == 0) throw UsageError("neighbors must be a positive integer");
}

std::vector<Donor> complete_pool(const Dataset& dataset) {
    std::vector<Donor> pool;
    for (const Entity& e : dataset) {
        if (e.values.is_complete()) pool.push_back({e.name, zero_fill(e.values)});
    }
    return pool;
}

std::vector<std::size_t> select_donors(const IndicatorVector& target, std::span<const Donor> pool,
                                       std::size_t k, Metric metric) {
    if (pool.empty()) throw NoDonors();
    if (k == 0) throw UsageError("neighbors must be a positive integer");

    const std::vector<double> query = zero_fill(target);
    std::vector<double> sims(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) sims[i] = similarity(metric, query, pool[i].values);

    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t take = std::min(k, pool.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (sims[a] != sims[b]) return sims[a] > sims[b];
                          return pool[a].name < pool[b].name;
                      });
    order.resize(take);
    return order;
}

std::vector<std::string> select_donor_names(const IndicatorVector& target,
                                            std::span<const Donor> pool, std::size_t k,
                                            Metric metric) {
    std::vector<std::string> names;
    for (std::size_t i : select_donors(target, pool, k, metric)) names.push_back(pool[i].name);
    return names;
}

namespace {

bool nothing_observed(const IndicatorVector& v) {
    return v.size() > 0 && v.missing_count() == v.size();
}

// no observed cell means no evidence to pick donors with; keep the zero fill
ImputedEntity zero_filled(const Entity& e) {
    return {e.name, IndicatorVector::complete(zero_fill(e.values)), e.values};
}

ImputedEntity impute_from_donors(const Entity& e, std::span<const Donor> pool,
                                 const ImputationConfig& cfg) {
    if (e.values.is_complete()) return {e.name, e.values, e.values};
    if (nothing_observed(e.values)) return zero_filled(e);

    const std::vector<std::size_t> donors = select_donors(e.values, pool, cfg.neighbors, cfg.metric);
    std::vector<Cell> cells(e.values.cells().begin(), e.values.cells().end());
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (cells[k]) continue;
        double sum = 0.0;
        double lo = 1.0;
        double hi = 0.0;
        for (std::size_t d : donors) {
            const double v = pool[d].values[k];
            sum += v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        // the mean of donor values never leaves their range; clamp away rounding
        cells[k] = std::clamp(sum / static_cast<double>(donors.size()), lo, hi);
    }
    return {e.name, IndicatorVector(std::move(cells)), e.values};
}

ImputedEntity impute_from_columns(const Entity& e, std::span<const Cell> column_means) {
    if (e.values.is_complete()) return {e.name, e.values, e.values};
    if (nothing_observed(e.values)) return zero_filled(e);
    std::vector<Cell> cells(e.values.cells().begin(), e.values.cells().end());
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (!cells[k]) cells[k] = column_means[k].value_or(0.0);
    }
    return {e.name, IndicatorVector(std::move(cells)), e.values};
}

std::vector<Cell> column_means(const Dataset& dataset, std::size_t n) {
    std::vector<double> sum(n, 0.0);
    std::vector<std::size_t> count(n, 0);
    std::vector<double> lo(n, 1.0);
    std::vector<double> hi(n, 0.0);
    for (const Entity& e : dataset) {
        for (std::size_t k = 0; k < n; ++k) {
            if (const Cell& c = e.values[k]) {
                sum[k] += *c;
                ++count[k];
                lo[k] = std::min(lo[k], *c);
                hi[k] = std::max(hi[k], *c);
            }
        }
    }
    std::vector<Cell> means(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (count[k] > 0) means[k] = std::clamp(sum[k] / static_cast<double>(count[k]), lo[k], hi[k]);
    }
    return means;
}

} // namespace

ImputationResult impute(const Dataset& dataset, const ImputationConfig& cfg, Execution exec) {
    cfg.validate();
    ImputationResult result;
    if (dataset.empty()) return result;

    const std::size_t n = dataset.front().values.size();
    for (const Entity& e : dataset) {
        if (e.values.size() != n) {
            throw UsageError("entity '" + e.name + "' has " + std::to_string(e.values.size()) +
                             " indicators, expected " + std::to_string(n));
        }
    }

    const std::vector<Donor> pool = complete_pool(dataset);
    std::vector<Cell> fallback;
    if (pool.empty()) {
        fallback = column_means(dataset, n);
        result.used_column_means = true;
    }

    result.rows.resize(dataset.size());
    const auto count = static_cast<std::ptrdiff_t>(dataset.size());
    auto kernel = [&](std::ptrdiff_t i) {
        const Entity& e = dataset[static_cast<std::size_t>(i)];
        result.rows[static_cast<std::size_t>(i)] =
            pool.empty() ? impute_from_columns(e, fallback) : impute_from_donors(e, pool, cfg);
    };

    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (std::ptrdiff_t i = 0; i < count; ++i) kernel(i);
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i) kernel(i);
    }

    for (const Entity& e : dataset) {
        if (nothing_observed(e.values)) {
            for (std::size_t k = 0; k < n; ++k) {
                result.warnings.push_back({e.name, k, "entity has no observed indicator; imputed 0"});
            }
            continue;
        }
        if (!result.used_column_means) continue;
        for (std::size_t k = 0; k < n; ++k) {
            if (!e.values[k] && !fallback[k]) {
                result.warnings.push_back({e.name, k, "indicator observed by no entity; imputed 0"});
            }
        }
    }
    return result;
}

} // namespace bri
