#pragma once

#include "bri/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bri {

enum class Direction { HigherIsBetter, LowerIsBetter };

struct Bounds {
    double min = 0.0;
    double max = 1.0;
};

struct IndicatorDef {
    std::string id;
    std::string display_name;
    std::string pillar;
    Direction direction = Direction::HigherIsBetter;
    std::optional<Bounds> bounds;
};

/// Order defines vector index positions.
using Schema = std::vector<IndicatorDef>;

struct RawRow {
    std::string country;
    std::vector<std::optional<double>> values;
};

struct RawDataset {
    Schema schema;
    std::vector<RawRow> rows;
};

using LabelSet = std::vector<std::pair<std::string, Label>>;

/// The five thematic pillars indicators are grouped under.
extern const std::vector<std::string_view> kPillars;

/// JSON array of {id, display_name, pillar, direction: "higher"|"lower",
/// optional min, max}. Throws ParseError naming the offending field.
Schema parse_schema(std::string_view document);
std::string write_schema(const Schema& schema);

/// Schema taken from a data CSV header when no schema file is supplied:
/// every column higher-is-better with observed bounds.
Schema infer_schema(std::string_view csv_document);

/// CSV with first header `country`, remaining headers the schema ids in any
/// order. Empty cells are missing. A header-only or empty document yields an
/// empty dataset.
RawDataset parse_data(std::string_view document, const Schema& schema);
/// Columns in schema order; values written in shortest round-trip form.
std::string write_data(const RawDataset& data);

/// CSV `country,label` with label in {high, mid, low}.
LabelSet parse_labels(std::string_view document);
std::string write_labels(const LabelSet& labels);

/// Min-max per indicator into [0,1], reflected for lower-is-better columns.
/// Declared bounds take precedence over observed ones; values are clipped;
/// constant columns map to 1.0; missing stays missing.
Dataset normalize(const RawDataset& raw);

/// Reads a whole file; throws ParseError when it cannot be opened.
std::string read_file(const std::string& path);

struct LoadedData {
    RawDataset raw;
    Dataset dataset;
};

/// Reads and normalizes a data file. An empty schema path infers the schema
/// from the data header.
LoadedData load_data_files(const std::string& data_path, const std::string& schema_path);

namespace csv {

/// Splits one CSV record, honoring double-quoted fields.
std::vector<std::string> split_record(std::string_view line);
/// Quotes a field when it holds a comma, quote or newline.
std::string escape(std::string_view field);
/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

} // namespace csv

} // namespace bri
