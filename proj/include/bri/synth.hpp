#pragma once

#include "bri/ingest.hpp"

#include <array>
#include <cstddef>
#include <cstdint>

namespace bri {

struct SynthConfig {
    std::size_t n_countries = 190;
    /// (high, mid, low); must sum to 1.
    std::array<double, 3> class_proportions{45.0 / 190.0, 55.0 / 190.0, 90.0 / 190.0};
    std::size_t n_indicators = 16;
    /// Overall probability that a cell is missing, in [0,1).
    double missing_rate = 0.25;
    /// Per-class indicator std is 1 / class_separation.
    double class_separation = 4.0;
    /// Tilts missingness toward lower classes while keeping the overall
    /// rate: class rates scale with 1 - skew, 1, 1 + skew for high, mid,
    /// low. 0 gives class-independent masking. In [0,1].
    double missing_skew = 0.8;
    /// Countries forced fully observed so donors always exist.
    std::size_t complete_quota = 10;
    std::uint64_t seed = 7;

    /// Throws UsageError for out-of-range fields or an unreachable quota.
    void validate() const;
};

struct SynthData {
    RawDataset data;
    LabelSet labels;
};

/// Largest-remainder split of n over the proportions.
std::array<std::size_t, 3> class_counts(std::size_t n, const std::array<double, 3>& proportions);

/// Probability of masking a cell for each class (high, mid, low).
std::array<double, 3> class_missing_rates(const SynthConfig& cfg);

/// Schema of the generated data: ids ind01.., pillars cycled, declared
/// bounds [0,1].
Schema synthetic_schema(std::size_t n_indicators);

/// Draws each indicator from a class-centered Gaussian (means 0.75, 0.5,
/// 0.25 for high, mid, low) truncated to [0,1], then masks cells. Every
/// country keeps at least one observed cell. Deterministic in the seed.
SynthData generate(const SynthConfig& cfg);

} // namespace bri
