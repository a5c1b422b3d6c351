#pragma once

#include "bri/execution.hpp"
#include "bri/similarity.hpp"
#include "bri/types.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace bri {

struct ImputationConfig {
    /// Size of the donor set averaged per missing indicator.
    std::size_t neighbors = 10;
    Metric metric = Metric::Cosine;

    /// Throws UsageError when neighbors == 0.
    void validate() const;
};

/// A fully observed entity eligible to donate values.
struct Donor {
    std::string name;
    std::vector<double> values;
};

/// Entity after imputation. `values` is complete; `original` keeps the mask
/// that was observed before anything was filled in.
struct ImputedEntity {
    std::string name;
    IndicatorVector values;
    IndicatorVector original;
};

/// Emitted when a cell had to be imputed with 0: nobody observed the
/// indicator, or the entity observed nothing.
struct ImputationWarning {
    std::string entity;
    std::size_t indicator = 0;
    std::string message;
};

struct ImputationResult {
    std::vector<ImputedEntity> rows;
    std::vector<ImputationWarning> warnings;
    /// True when no complete entity existed and column means were used.
    bool used_column_means = false;
};

/// Entities with no missing cell, in dataset order.
std::vector<Donor> complete_pool(const Dataset& dataset);

/// Indices into `pool` of the k entries most similar to zero_fill(target),
/// ordered by descending similarity with ties broken by ascending name.
/// Returns the whole pool when it holds fewer than k entries.
/// Throws NoDonors on an empty pool.
std::vector<std::size_t> select_donors(const IndicatorVector& target, std::span<const Donor> pool,
                                       std::size_t k, Metric metric);

/// Name-returning convenience wrapper over select_donors.
std::vector<std::string> select_donor_names(const IndicatorVector& target,
                                            std::span<const Donor> pool, std::size_t k,
                                            Metric metric);

/// Fills every missing indicator with the mean of that indicator over the
/// entity's donor set. Donors come only from the original complete pool.
/// Complete entities pass through untouched. An entity with no observed
/// indicator keeps its zero fill (with warnings), since there is nothing to
/// measure donor similarity against.
ImputationResult impute(const Dataset& dataset, const ImputationConfig& cfg,
                        Execution exec = Execution::Parallel);

} // namespace bri
