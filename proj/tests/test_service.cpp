#include "fixtures.hpp"

#include "bri/ingest.hpp"
#include "bri/service.hpp"

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <thread>

using namespace bri;
using nlohmann::json;

namespace {

void load_fixture(RankingService& service) {
    const Schema schema = parse_schema(fixtures::kFourCountriesSchema);
    service.load(schema, normalize(parse_data(fixtures::kFourCountriesCsv, schema)));
}

} // namespace

TEST_CASE("nothing loaded") {
    RankingService service;
    CHECK(service.ranking({}).status == 503);
    CHECK(service.country("c0", {}).status == 503);
    const HttpResponse h = service.health();
    CHECK(h.status == 200);
    CHECK(json::parse(h.body)["loaded"] == false);
}

TEST_CASE("ranking endpoint") {
    RankingService service;
    load_fixture(service);
    const HttpResponse r = service.ranking({{"neighbors", "2"}});
    REQUIRE(r.status == 200);
    const json body = json::parse(r.body);
    CHECK(body["config"]["scheme"] == "linear");
    CHECK(body["config"]["gamma"] == 0.7);
    CHECK(body["config"]["neighbors"] == 2);
    REQUIRE(body["ranking"].size() == 4);
    CHECK(body["ranking"][0]["country"] == "c1");
    CHECK(body["ranking"][3]["country"] == "c0");
    CHECK(body["ranking"][3]["n_missing"] == 1);
    CHECK(body["ranking"][3]["score"].get<double>() == doctest::Approx(0.6597704398234644).epsilon(1e-12));

    CHECK(service.ranking({{"gamma", "2"}}).status == 400);
    CHECK(json::parse(service.ranking({{"gamma", "2"}}).body).contains("error"));
    CHECK(service.ranking({{"scheme", "cubic"}}).status == 400);
    CHECK(service.ranking({{"neighbors", "0"}}).status == 400);
    CHECK(service.ranking({{"neighbors", "two"}}).status == 400);
    CHECK(service.ranking({{"metric", "manhattan"}}).status == 400);
    CHECK(service.ranking({{"gamma", "0.5x"}}).status == 400);
}

TEST_CASE("sigmoid centred at the coverage gives weight one half") {
    RankingService service;
    // g = 0.5 needs an even indicator count
    Schema four = parse_schema(fixtures::kFourCountriesSchema);
    four.push_back({"i4", "Indicator 4", "Research", Direction::HigherIsBetter, Bounds{0.0, 1.0}});
    const RawDataset raw = parse_data("country,i1,i2,i3,i4\nhalf,0.5,0.4,,\nfull,0.2,0.3,0.4,0.5\n", four);
    service.load(four, normalize(raw));
    const json body = json::parse(service.ranking({{"scheme", "sigmoid"}, {"gamma", "0.5"}}).body);
    for (const auto& row : body["ranking"]) {
        if (row["country"] == "half") {
            CHECK(row["g"] == 0.5);
            CHECK(row["weight"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
        }
    }
}

TEST_CASE("country endpoint") {
    RankingService service;
    load_fixture(service);
    const HttpResponse r = service.country("c0", {{"neighbors", "2"}});
    REQUIRE(r.status == 200);
    const json body = json::parse(r.body);
    CHECK(body["n_missing"] == 1);
    CHECK(body["g"].get<double>() == doctest::Approx(2.0 / 3.0));
    REQUIRE(body["indicators"].size() == 3);
    CHECK(body["indicators"][2]["observed"] == false);
    CHECK(body["indicators"][2]["value"].is_null());
    CHECK(body["indicators"][2]["imputed_value"] == 0.25);
    CHECK(body["indicators"][0]["pillar"] == "Technology");

    CHECK(json::parse(service.country("c1", {}).body)["g"] == 1.0);
    CHECK(service.country("atlantis", {}).status == 404);
    CHECK(service.country("c0", {{"gamma", "-1"}}).status == 400);
}

TEST_CASE("health and reload") {
    RankingService service;
    load_fixture(service);
    const json first = json::parse(service.health().body);
    CHECK(first["loaded"] == true);
    CHECK(first["countries"] == 4);
    CHECK(first["indicators"] == 3);
    const auto old_snapshot = service.snapshot();

    const Schema schema = parse_schema(fixtures::kFourCountriesSchema);
    service.load(schema, normalize(parse_data("country,i1,i2,i3\nsolo,0.1,0.2,0.3\n", schema)));
    const json second = json::parse(service.health().body);
    CHECK(second["generation"].get<int>() == first["generation"].get<int>() + 1);
    CHECK(second["loaded_at"] != first["loaded_at"]);
    CHECK(second["countries"] == 1);
    // an earlier snapshot stays intact for readers still holding it
    CHECK(old_snapshot->dataset().size() == 4);
}

TEST_CASE("memoized rankings are shared") {
    RankingService service;
    load_fixture(service);
    const auto snap = service.snapshot();
    const RankingParams p = make_ranking_params("sigmoid", 0.4, 3, "euclidean");
    CHECK(snap->index(p).get() == snap->index(p).get());
    CHECK(snap->index(p).get() != snap->index(make_ranking_params("linear", 0.4, 3, "euclidean")).get());
}

TEST_CASE("timestamp format") {
    const auto t = std::chrono::system_clock::time_point(std::chrono::microseconds(1'600'000'000'123'456LL));
    CHECK(format_timestamp(t) == "2020-09-13T12:26:40.123456Z");
}

TEST_CASE("over HTTP") {
    RankingService service;
    const Schema schema = parse_schema(fixtures::kFourCountriesSchema);
    const std::string csv = std::string(fixtures::kFourCountriesCsv) + "\"Korea, South\",0.3,0.3,0.3\n";
    service.load(schema, normalize(parse_data(csv, schema)));

    httplib::Server server;
    service.mount(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto health = client.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(health->get_header_value("Content-Type") == "application/json");

    auto ranking = client.Get("/ranking?scheme=sigmoid&gamma=0.6&neighbors=2");
    REQUIRE(ranking);
    CHECK(ranking->status == 200);
    CHECK(ranking->body == service.ranking({{"scheme", "sigmoid"}, {"gamma", "0.6"}, {"neighbors", "2"}}).body);

    auto bad = client.Get("/ranking?gamma=2");
    REQUIRE(bad);
    CHECK(bad->status == 400);

    auto korea = client.Get("/countries/Korea%2C%20South");
    REQUIRE(korea);
    CHECK(korea->status == 200);
    CHECK(json::parse(korea->body)["country"] == "Korea, South");

    auto missing = client.Get("/countries/nowhere");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    server.stop();
    worker.join();
}
