#include "bri/service.hpp"

#include "bri/error.hpp"

#include <httplib.h>

#include <charconv>
#include <cmath>
#include <ctime>

namespace bri {

RankingParams make_ranking_params(const std::string& scheme, double gamma, std::size_t neighbors,
                                  const std::string& metric) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw UsageError("gamma must lie strictly inside (0,1), got " + std::to_string(gamma));
    }
    RankingParams p;
    p.scheme = WeightingScheme::parse(scheme, gamma);
    p.gamma = gamma;
    p.imputation.neighbors = neighbors;
    p.imputation.metric = parse_metric(metric);
    p.imputation.validate();
    return p;
}

nlohmann::json to_json(const ScoredCountry& s) {
    return {{"rank", s.rank},           {"country", s.name},
            {"score", s.score},         {"similarity", s.similarity},
            {"g", s.coverage.g},        {"weight", s.weight},
            {"n_missing", s.coverage.n_missing}};
}

nlohmann::json to_json(const RankingParams& p) {
    return {{"scheme", std::string(p.scheme.name())},
            {"gamma", p.gamma},
            {"neighbors", p.imputation.neighbors},
            {"metric", std::string(to_string(p.imputation.metric))}};
}

std::string format_timestamp(std::chrono::system_clock::time_point t) {
    using namespace std::chrono;
    const auto us = duration_cast<microseconds>(t.time_since_epoch()).count();
    const std::time_t secs = static_cast<std::time_t>(us / 1000000);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%06lldZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                  static_cast<long long>(us % 1000000));
    return buf;
}

DatasetSnapshot::DatasetSnapshot(Schema schema, Dataset dataset, std::uint64_t generation,
                                 std::chrono::system_clock::time_point loaded_at)
    : schema_(std::move(schema)), dataset_(std::move(dataset)), generation_(generation),
      loaded_at_(loaded_at) {}

std::shared_ptr<const IndexResult> DatasetSnapshot::index(const RankingParams& params) const {
    const Key key{static_cast<int>(params.scheme.kind()), params.gamma, params.imputation.neighbors,
                  static_cast<int>(params.imputation.metric)};
    {
        std::lock_guard lock(memo_mutex_);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    auto computed = std::make_shared<const IndexResult>(
        build_index(dataset_, params.scheme, params.imputation, Execution::Serial));
    std::lock_guard lock(memo_mutex_);
    return memo_.emplace(key, std::move(computed)).first->second;
}

namespace {

HttpResponse json_response(int status, const nlohmann::json& body) {
    return {status, body.dump()};
}

HttpResponse error_response(int status, const std::string& message) {
    return json_response(status, {{"error", message}});
}

const std::string* last_value(const QueryParams& query, const std::string& key) {
    const std::string* found = nullptr;
    auto [lo, hi] = query.equal_range(key);
    for (auto it = lo; it != hi; ++it) found = &it->second;
    return found;
}

double parse_real(const std::string& key, const std::string& text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw UsageError(key + " must be a number, got '" + text + "'");
    }
    return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || v == 0) {
        throw UsageError(key + " must be a positive integer, got '" + text + "'");
    }
    return v;
}

RankingParams params_from_query(const QueryParams& query) {
    const std::string* scheme = last_value(query, "scheme");
    const std::string* gamma = last_value(query, "gamma");
    const std::string* neighbors = last_value(query, "neighbors");
    const std::string* metric = last_value(query, "metric");
    return make_ranking_params(scheme ? *scheme : "linear", gamma ? parse_real("gamma", *gamma) : 0.7,
                               neighbors ? parse_count("neighbors", *neighbors) : 10,
                               metric ? *metric : "cosine");
}

} // namespace

void RankingService::load(Schema schema, Dataset dataset) {
    std::lock_guard lock(mutex_);
    auto now = std::chrono::system_clock::now();
    // keep load times strictly increasing even on a coarse clock
    if (now <= last_loaded_) now = last_loaded_ + std::chrono::microseconds(1);
    last_loaded_ = now;
    snapshot_ = std::make_shared<const DatasetSnapshot>(std::move(schema), std::move(dataset),
                                                        ++generation_, now);
}

std::shared_ptr<const DatasetSnapshot> RankingService::snapshot() const {
    std::lock_guard lock(mutex_);
    return snapshot_;
}

HttpResponse RankingService::ranking(const QueryParams& query) const {
    const auto snap = snapshot();
    if (!snap) return error_response(503, "no dataset loaded");
    try {
        const RankingParams params = params_from_query(query);
        const auto index = snap->index(params);
        nlohmann::json rows = nlohmann::json::array();
        for (const ScoredCountry& s : index->ranking) rows.push_back(to_json(s));
        return json_response(200, {{"config", to_json(params)}, {"ranking", std::move(rows)}});
    } catch (const UsageError& e) {
        return error_response(400, e.what());
    }
}

HttpResponse RankingService::country(const std::string& name, const QueryParams& query) const {
    const auto snap = snapshot();
    if (!snap) return error_response(503, "no dataset loaded");
    try {
        const RankingParams params = params_from_query(query);
        const auto index = snap->index(params);
        const std::size_t row = index->row_of(name);
        if (row == static_cast<std::size_t>(-1)) return error_response(404, "unknown country '" + name + "'");
        const ImputedEntity& entity = index->imputation.rows[row];
        const ScoredCountry* scored = nullptr;
        for (const ScoredCountry& s : index->ranking) {
            if (s.name == name) scored = &s;
        }

        nlohmann::json indicators = nlohmann::json::array();
        for (std::size_t k = 0; k < snap->schema().size(); ++k) {
            const IndicatorDef& def = snap->schema()[k];
            const Cell& observed = entity.original[k];
            indicators.push_back({{"id", def.id},
                                  {"display_name", def.display_name},
                                  {"pillar", def.pillar},
                                  {"observed", observed.has_value()},
                                  {"value", observed ? nlohmann::json(*observed) : nlohmann::json(nullptr)},
                                  {"imputed_value", *entity.values[k]}});
        }
        nlohmann::json body = to_json(*scored);
        body["config"] = to_json(params);
        body["indicators"] = std::move(indicators);
        return json_response(200, body);
    } catch (const UsageError& e) {
        return error_response(400, e.what());
    }
}

HttpResponse RankingService::health() const {
    const auto snap = snapshot();
    if (!snap) return json_response(200, {{"status", "ok"}, {"loaded", false}});
    return json_response(200, {{"status", "ok"},
                               {"loaded", true},
                               {"generation", snap->generation()},
                               {"loaded_at", format_timestamp(snap->loaded_at())},
                               {"countries", snap->dataset().size()},
                               {"indicators", snap->schema().size()}});
}

void RankingService::mount(httplib::Server& server) const {
    auto reply = [](httplib::Response& res, const HttpResponse& r) {
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    auto params_of = [](const httplib::Request& req) {
        return QueryParams(req.params.begin(), req.params.end());
    };
    server.Get("/ranking", [this, reply, params_of](const httplib::Request& req, httplib::Response& res) {
        reply(res, ranking(params_of(req)));
    });
    server.Get(R"(/countries/(.+))",
               [this, reply, params_of](const httplib::Request& req, httplib::Response& res) {
                   reply(res, country(req.matches[1].str(), params_of(req)));
               });
    server.Get("/health", [this, reply](const httplib::Request&, httplib::Response& res) {
        reply(res, health());
    });
}

} // namespace bri
