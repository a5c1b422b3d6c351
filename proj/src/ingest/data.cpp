#include "bri/ingest.hpp"

#include "bri/error.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace bri {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string> fields;
};

std::vector<Line> records(std::string_view document) {
    std::vector<Line> out;
    std::istringstream in{std::string(document)};
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back({number, csv::split_record(line)});
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(number) + ": " + e.what());
        }
    }
    // tolerate a UTF-8 byte order mark on the header
    if (!out.empty() && !out.front().fields.empty()) {
        std::string& first = out.front().fields.front();
        if (first.rfind("\xEF\xBB\xBF", 0) == 0) first.erase(0, 3);
    }
    return out;
}

std::string where(std::size_t line, const std::string& column) {
    return "line " + std::to_string(line) + ", column '" + column + "'";
}

std::optional<double> parse_cell(const std::string& text, std::size_t line, const std::string& column) {
    if (text.empty()) return std::nullopt;
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ParseError(where(line, column) + ": '" + text + "' is not a number");
    }
    return v;
}

} // namespace

RawDataset parse_data(std::string_view document, const Schema& schema) {
    RawDataset out;
    out.schema = schema;
    const std::vector<Line> lines = records(document);
    if (lines.empty()) return out;

    const Line& header = lines.front();
    if (header.fields.front() != "country") {
        throw ParseError("line " + std::to_string(header.number) + ": first header must be 'country'");
    }

    std::unordered_map<std::string, std::size_t> schema_pos;
    for (std::size_t i = 0; i < schema.size(); ++i) schema_pos.emplace(schema[i].id, i);

    // column index in file -> position in schema
    std::vector<std::size_t> slot(header.fields.size(), 0);
    std::set<std::string> seen;
    for (std::size_t c = 1; c < header.fields.size(); ++c) {
        const std::string& id = header.fields[c];
        auto it = schema_pos.find(id);
        if (it == schema_pos.end()) {
            throw ParseError(where(header.number, id) + ": unknown column");
        }
        if (!seen.insert(id).second) throw ParseError(where(header.number, id) + ": duplicate column");
        slot[c] = it->second;
    }
    for (const IndicatorDef& def : schema) {
        if (!seen.count(def.id)) throw ParseError("header is missing schema column '" + def.id + "'");
    }

    std::set<std::string> countries;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const Line& line = lines[r];
        if (line.fields.size() != header.fields.size()) {
            throw ParseError("line " + std::to_string(line.number) + ": expected " +
                             std::to_string(header.fields.size()) + " fields, got " +
                             std::to_string(line.fields.size()));
        }
        RawRow row;
        row.country = line.fields.front();
        if (row.country.empty()) throw ParseError(where(line.number, "country") + ": empty country name");
        if (!countries.insert(row.country).second) {
            throw ParseError(where(line.number, "country") + ": duplicate country '" + row.country + "'");
        }
        row.values.resize(schema.size());
        for (std::size_t c = 1; c < line.fields.size(); ++c) {
            row.values[slot[c]] = parse_cell(line.fields[c], line.number, header.fields[c]);
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::string write_data(const RawDataset& data) {
    std::string out = "country";
    for (const IndicatorDef& def : data.schema) out += "," + csv::escape(def.id);
    out += "\n";
    for (const RawRow& row : data.rows) {
        out += csv::escape(row.country);
        for (const auto& v : row.values) {
            out += ",";
            if (v) out += csv::format_double(*v);
        }
        out += "\n";
    }
    return out;
}

LabelSet parse_labels(std::string_view document) {
    LabelSet out;
    const std::vector<Line> lines = records(document);
    if (lines.empty()) return out;
    const Line& header = lines.front();
    if (header.fields.size() != 2 || header.fields[0] != "country" || header.fields[1] != "label") {
        throw ParseError("labels header must be 'country,label'");
    }
    std::set<std::string> seen;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const Line& line = lines[r];
        if (line.fields.size() != 2) {
            throw ParseError("line " + std::to_string(line.number) + ": expected 2 fields");
        }
        auto label = parse_label(line.fields[1]);
        if (!label) {
            throw ParseError(where(line.number, "label") + ": '" + line.fields[1] +
                             "' is not one of high, mid, low");
        }
        if (!seen.insert(line.fields[0]).second) {
            throw ParseError(where(line.number, "country") + ": duplicate country '" + line.fields[0] + "'");
        }
        out.emplace_back(line.fields[0], *label);
    }
    return out;
}

std::string write_labels(const LabelSet& labels) {
    std::string out = "country,label\n";
    for (const auto& [name, label] : labels) {
        out += csv::escape(name) + "," + std::string(to_string(label)) + "\n";
    }
    return out;
}

Dataset normalize(const RawDataset& raw) {
    const std::size_t n = raw.schema.size();
    std::vector<Bounds> bounds(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (raw.schema[k].bounds) {
            bounds[k] = *raw.schema[k].bounds;
            continue;
        }
        bool any = false;
        for (const RawRow& row : raw.rows) {
            if (const auto& v = row.values[k]) {
                if (!any) {
                    bounds[k] = {*v, *v};
                    any = true;
                } else {
                    bounds[k].min = std::min(bounds[k].min, *v);
                    bounds[k].max = std::max(bounds[k].max, *v);
                }
            }
        }
    }

    Dataset out;
    out.reserve(raw.rows.size());
    for (const RawRow& row : raw.rows) {
        std::vector<Cell> cells(n);
        for (std::size_t k = 0; k < n; ++k) {
            const auto& v = row.values[k];
            if (!v) continue;
            const auto [lo, hi] = bounds[k];
            if (!(hi > lo)) {
                cells[k] = 1.0;
                continue;
            }
            const double t = raw.schema[k].direction == Direction::HigherIsBetter ? (*v - lo) / (hi - lo)
                                                                                  : (hi - *v) / (hi - lo);
            cells[k] = std::clamp(t, 0.0, 1.0);
        }
        out.push_back({row.country, IndicatorVector(std::move(cells))});
    }
    return out;
}

} // namespace bri
