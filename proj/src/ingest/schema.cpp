#include "bri/ingest.hpp"

#include "bri/error.hpp"

#include <json.hpp>

#include <set>
#include <sstream>

namespace bri {

const std::vector<std::string_view> kPillars = {
    "Government Regulation", "Research", "Technology", "Industry", "User Engagement"};

namespace {

using nlohmann::json;

std::string field_error(std::size_t index, const std::string& field, const std::string& what) {
    return "schema entry " + std::to_string(index) + ": field '" + field + "' " + what;
}

std::string required_string(const json& entry, std::size_t index, const std::string& key) {
    auto it = entry.find(key);
    if (it == entry.end()) throw ParseError(field_error(index, key, "is required"));
    if (!it->is_string()) throw ParseError(field_error(index, key, "must be a string"));
    return it->get<std::string>();
}

std::optional<double> optional_number(const json& entry, std::size_t index, const std::string& key) {
    auto it = entry.find(key);
    if (it == entry.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) throw ParseError(field_error(index, key, "must be a number"));
    return it->get<double>();
}

} // namespace

Schema parse_schema(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("schema is not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("schema must be a JSON array of indicator objects");

    Schema schema;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& entry = doc[i];
        if (!entry.is_object()) throw ParseError("schema entry " + std::to_string(i) + " is not an object");

        IndicatorDef def;
        def.id = required_string(entry, i, "id");
        if (def.id.empty() || def.id == "country") {
            throw ParseError(field_error(i, "id", "must be non-empty and not 'country'"));
        }
        if (!seen.insert(def.id).second) {
            throw ParseError(field_error(i, "id", "duplicates '" + def.id + "'"));
        }
        def.display_name = entry.contains("display_name") ? required_string(entry, i, "display_name") : def.id;
        def.pillar = entry.contains("pillar") ? required_string(entry, i, "pillar") : "";

        const std::string direction =
            entry.contains("direction") ? required_string(entry, i, "direction") : "higher";
        if (direction == "higher") {
            def.direction = Direction::HigherIsBetter;
        } else if (direction == "lower") {
            def.direction = Direction::LowerIsBetter;
        } else {
            throw ParseError(field_error(i, "direction", "must be \"higher\" or \"lower\", got \"" + direction + "\""));
        }

        const auto lo = optional_number(entry, i, "min");
        const auto hi = optional_number(entry, i, "max");
        if (lo.has_value() != hi.has_value()) {
            throw ParseError(field_error(i, lo ? "max" : "min", "is required when the other bound is given"));
        }
        if (lo) {
            if (!(*lo < *hi)) throw ParseError(field_error(i, "min", "must be below max"));
            def.bounds = Bounds{*lo, *hi};
        }
        schema.push_back(std::move(def));
    }
    return schema;
}

std::string write_schema(const Schema& schema) {
    json doc = json::array();
    for (const IndicatorDef& def : schema) {
        json entry = {{"id", def.id},
                      {"display_name", def.display_name},
                      {"pillar", def.pillar},
                      {"direction", def.direction == Direction::HigherIsBetter ? "higher" : "lower"}};
        if (def.bounds) {
            entry["min"] = def.bounds->min;
            entry["max"] = def.bounds->max;
        }
        doc.push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

Schema infer_schema(std::string_view csv_document) {
    std::istringstream in{std::string(csv_document)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto header = csv::split_record(line);
        if (header.empty() || header.front() != "country") {
            throw ParseError("data header must start with 'country'");
        }
        Schema schema;
        for (std::size_t i = 1; i < header.size(); ++i) {
            schema.push_back({header[i], header[i], "", Direction::HigherIsBetter, std::nullopt});
        }
        return schema;
    }
    return {};
}

} // namespace bri
