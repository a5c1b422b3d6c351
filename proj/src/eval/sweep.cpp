#include "bri/evaluation.hpp"

#include "bri/error.hpp"
#include "bri/ingest.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <sstream>

namespace bri {

std::string_view to_string(SweepAxis axis) noexcept {
    return axis == SweepAxis::Gamma ? "gamma" : "neighbors";
}

SweepAxis parse_axis(std::string_view text) {
    if (text == "gamma") return SweepAxis::Gamma;
    if (text == "neighbors") return SweepAxis::Neighbors;
    throw UsageError("axis must be gamma or neighbors, got '" + std::string(text) + "'");
}

std::vector<double> default_sweep_values(SweepAxis axis) {
    if (axis == SweepAxis::Gamma) return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    return {1, 2, 3, 5, 10, 15, 20, 30, 40};
}

namespace {

double parse_number(std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw UsageError("'" + std::string(text) + "' is not a number");
    }
    return v;
}

} // namespace

std::vector<double> parse_sweep_values(std::string_view text) {
    std::vector<double> values;
    if (text.find(':') != std::string_view::npos) {
        const auto first = text.find(':');
        const auto second = text.find(':', first + 1);
        if (second == std::string_view::npos) throw UsageError("range must be lo:hi:step");
        const double lo = parse_number(text.substr(0, first));
        const double hi = parse_number(text.substr(first + 1, second - first - 1));
        const double step = parse_number(text.substr(second + 1));
        if (!(step > 0.0) || hi < lo) throw UsageError("range needs lo <= hi and a positive step");
        const auto steps = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
        for (std::size_t i = 0; i <= steps; ++i) {
            // round to 12 decimals so 0.1 + 2 * 0.1 prints as 0.3
            values.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
        }
    } else {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto comma = text.find(',', pos);
            const auto piece = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
            if (piece.empty()) throw UsageError("empty entry in value list");
            values.push_back(parse_number(piece));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
    }
    if (values.empty()) throw UsageError("no sweep values given");
    return values;
}

SweepTable sweep(const PointsBuilder& build, SweepAxis axis, std::span<const double> values,
                 std::span<const Granularity> granularities, ClassifierKind classifier,
                 std::size_t folds, std::uint64_t seed, Execution exec) {
    if (values.empty()) throw UsageError("no sweep values given");
    SweepTable table;
    table.axis = axis;
    table.values.assign(values.begin(), values.end());
    table.granularities.assign(granularities.begin(), granularities.end());
    table.cells.assign(granularities.size(), std::vector<EvalReport>(values.size()));

    const std::size_t n_values = values.size();
    const auto count = static_cast<std::ptrdiff_t>(n_values);
    std::vector<std::exception_ptr> errors(n_values);
    auto kernel = [&](std::ptrdiff_t v) {
        const auto u = static_cast<std::size_t>(v);
        try {
            const auto points = build(values[u]);
            for (std::size_t g = 0; g < granularities.size(); ++g) {
                table.cells[g][u] = cross_validate(points, classifier, folds, granularities[g], seed,
                                                   Execution::Serial);
            }
        } catch (...) {
            errors[u] = std::current_exception();
        }
    };
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t v = 0; v < count; ++v) kernel(v);
    } else {
        for (std::ptrdiff_t v = 0; v < count; ++v) kernel(v);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return table;
}

std::string format_percent(double accuracy) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", accuracy * 100.0);
    return buf;
}

std::string format_sweep_table(const SweepTable& table) {
    const std::string head = table.axis == SweepAxis::Gamma ? "gamma" : "|T_c|";
    constexpr int kFirst = 9;
    constexpr int kCell = 6;
    std::ostringstream out;
    out << std::left << std::setw(kFirst) << head;
    for (double v : table.values) out << " | " << std::right << std::setw(kCell) << csv::format_double(v);
    out << "\n";
    out << std::string(kFirst, '-');
    for (std::size_t i = 0; i < table.values.size(); ++i) out << "-+-" << std::string(kCell, '-');
    out << "\n";
    for (std::size_t g = 0; g < table.granularities.size(); ++g) {
        out << std::left << std::setw(kFirst) << to_string(table.granularities[g]);
        for (const EvalReport& r : table.cells[g]) {
            out << " | " << std::right << std::setw(kCell) << format_percent(r.mean_accuracy);
        }
        out << "\n";
    }
    return out.str();
}

nlohmann::json to_json(const EvalReport& report) {
    nlohmann::json classes = nlohmann::json::array();
    for (Label l : report.classes) classes.push_back(std::string(to_string(l)));
    return {{"classifier", std::string(to_string(report.classifier))},
            {"granularity", report.granularity == Granularity::ThreeClass ? 3 : 2},
            {"seed", report.seed},
            {"folds_requested", report.folds_requested},
            {"folds_used", report.folds_used},
            {"stratified", true},
            {"converged", report.converged},
            {"per_fold_accuracy", report.per_fold_accuracy},
            {"mean_accuracy", report.mean_accuracy},
            {"mean_accuracy_percent", format_percent(report.mean_accuracy)},
            {"classes", classes},
            {"confusion", report.confusion}};
}

nlohmann::json to_json(const SweepTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t g = 0; g < table.granularities.size(); ++g) {
        nlohmann::json cells = nlohmann::json::array();
        for (std::size_t v = 0; v < table.values.size(); ++v) {
            nlohmann::json cell = to_json(table.cells[g][v]);
            cell["value"] = table.values[v];
            cells.push_back(std::move(cell));
        }
        rows.push_back({{"granularity", table.granularities[g] == Granularity::ThreeClass ? 3 : 2},
                        {"cells", std::move(cells)}});
    }
    return {{"axis", std::string(to_string(table.axis))}, {"values", table.values}, {"rows", rows}};
}

} // namespace bri
