#pragma once

#include "bri/ingest.hpp"
#include "bri/ranking.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

namespace httplib {
class Server;
}

namespace bri {

/// Parameters shared by the CLI flags and the /ranking query string.
struct RankingParams {
    WeightingScheme scheme = WeightingScheme::linear();
    double gamma = 0.7;
    ImputationConfig imputation;
};

/// Builds params from textual values; throws UsageError on bad input.
/// gamma is range-checked for both schemes so a typo never passes silently.
RankingParams make_ranking_params(const std::string& scheme, double gamma, std::size_t neighbors,
                                  const std::string& metric);

nlohmann::json to_json(const ScoredCountry& s);
nlohmann::json to_json(const RankingParams& p);

/// Immutable normalized dataset. Rankings are memoized per parameter tuple.
class DatasetSnapshot {
public:
    DatasetSnapshot(Schema schema, Dataset dataset, std::uint64_t generation,
                    std::chrono::system_clock::time_point loaded_at);

    const Schema& schema() const noexcept { return schema_; }
    const Dataset& dataset() const noexcept { return dataset_; }
    std::uint64_t generation() const noexcept { return generation_; }
    std::chrono::system_clock::time_point loaded_at() const noexcept { return loaded_at_; }

    std::shared_ptr<const IndexResult> index(const RankingParams& params) const;

private:
    using Key = std::tuple<int, double, std::size_t, int>;

    Schema schema_;
    Dataset dataset_;
    std::uint64_t generation_;
    std::chrono::system_clock::time_point loaded_at_;
    mutable std::mutex memo_mutex_;
    mutable std::map<Key, std::shared_ptr<const IndexResult>> memo_;
};

struct HttpResponse {
    int status = 200;
    std::string body;
};

using QueryParams = std::multimap<std::string, std::string>;

/// Read-only ranking API over a snapshot that is only ever swapped whole.
class RankingService {
public:
    void load(Schema schema, Dataset dataset);
    std::shared_ptr<const DatasetSnapshot> snapshot() const;

    HttpResponse ranking(const QueryParams& query) const;
    HttpResponse country(const std::string& name, const QueryParams& query) const;
    HttpResponse health() const;

    /// Registers GET /ranking, /countries/{name} and /health.
    void mount(httplib::Server& server) const;

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const DatasetSnapshot> snapshot_;
    std::uint64_t generation_ = 0;
    std::chrono::system_clock::time_point last_loaded_{};
};

/// ISO-8601 UTC with microseconds.
std::string format_timestamp(std::chrono::system_clock::time_point t);

} // namespace bri
