#include "bri/cli.hpp"

#include "bri/error.hpp"
#include "bri/evaluation.hpp"
#include "bri/features.hpp"
#include "bri/ingest.hpp"
#include "bri/ranking.hpp"
#include "bri/service.hpp"
#include "bri/synth.hpp"

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace bri::cli {

namespace {

struct Options {
    std::string data;
    std::string schema;
    std::string labels;
    std::string scheme = "linear";
    double gamma = 0.7;
    std::size_t neighbors = 10;
    std::string metric = "cosine";
    std::string granularity;
    std::string classifier = "svm";
    std::size_t folds = 10;
    std::uint64_t seed = 1;
    std::string out;
    bool emit_imputed = false;

    std::string axis = "gamma";
    std::string values;

    std::size_t countries = 190;
    std::size_t indicators = 16;
    double missing_rate = 0.25;
    double separation = 4.0;
    double missing_skew = 0.8;
    std::size_t complete_quota = 10;
    std::string proportions = "45,55,90";

    std::string host = "127.0.0.1";
    int port = 8080;
};

void write_text(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + path + "'");
    file << content;
    if (!file) throw UsageError("failed writing '" + path + "'");
}

/// Sidecar path for the text table next to a JSON report.
std::string text_path(const std::string& json_path) {
    std::filesystem::path p(json_path);
    p.replace_extension(".txt");
    return p.string();
}

std::vector<Granularity> granularities(const Options& o) {
    if (o.granularity.empty()) return {Granularity::ThreeClass, Granularity::TwoClass};
    return {parse_granularity(o.granularity)};
}

LoadedData load(const Options& o) {
    LoadedData loaded = load_data_files(o.data, o.schema);
    return loaded;
}

void report_warnings(const ImputationResult& imputation, std::ostream& err) {
    for (const auto& w : imputation.warnings) {
        err << "warning: " << w.entity << " indicator " << w.indicator << ": " << w.message << "\n";
    }
}

int run_rank(const Options& o, std::ostream& out, std::ostream& err) {
    const RankingParams params = make_ranking_params(o.scheme, o.gamma, o.neighbors, o.metric);
    const LoadedData loaded = load(o);
    const IndexResult index = build_index(loaded.dataset, params.scheme, params.imputation);
    report_warnings(index.imputation, err);

    std::ostringstream csv_out;
    csv_out << "rank,country,score,similarity,g,weight,n_missing";
    if (o.emit_imputed) {
        for (const IndicatorDef& def : loaded.raw.schema) csv_out << "," << csv::escape(def.id);
    }
    csv_out << "\n";
    for (const ScoredCountry& s : index.ranking) {
        csv_out << s.rank << "," << csv::escape(s.name) << "," << csv::format_double(s.score) << ","
                << csv::format_double(s.similarity) << "," << csv::format_double(s.coverage.g) << ","
                << csv::format_double(s.weight) << "," << s.coverage.n_missing;
        if (o.emit_imputed) {
            const ImputedEntity& row = index.imputation.rows[index.row_of(s.name)];
            for (std::size_t k = 0; k < row.values.size(); ++k) csv_out << "," << csv::format_double(*row.values[k]);
        }
        csv_out << "\n";
    }

    if (o.out.empty()) {
        out << csv_out.str();
        return kExitOk;
    }
    write_text(o.out, csv_out.str());
    const ScoredCountry& top = index.ranking.front();
    out << "ranked " << index.ranking.size() << " countries (scheme=" << params.scheme.name()
        << ", gamma=" << params.gamma << ", neighbors=" << params.imputation.neighbors
        << ", metric=" << to_string(params.imputation.metric) << ")\n"
        << "top: " << top.name << " score=" << csv::format_double(top.score) << "\n"
        << "wrote " << o.out << "\n";
    return kExitOk;
}

int run_impute(const Options& o, std::ostream& out, std::ostream& err) {
    const RankingParams params = make_ranking_params(o.scheme, o.gamma, o.neighbors, o.metric);
    const LoadedData loaded = load(o);
    const ImputationResult result = impute(loaded.dataset, params.imputation);
    report_warnings(result, err);

    RawDataset filled;
    filled.schema = loaded.raw.schema;
    for (const ImputedEntity& row : result.rows) {
        RawRow raw{row.name, {}};
        for (const Cell& c : row.values.cells()) raw.values.push_back(c);
        filled.rows.push_back(std::move(raw));
    }
    const std::string text = write_data(filled);
    if (o.out.empty()) {
        out << text;
    } else {
        write_text(o.out, text);
        std::size_t filled_cells = 0;
        for (const Entity& e : loaded.dataset) filled_cells += e.values.missing_count();
        out << "imputed " << filled_cells << " cells across " << result.rows.size() << " countries\n"
            << "wrote " << o.out << "\n";
    }
    return kExitOk;
}

std::string format_confusion(const EvalReport& r) {
    std::ostringstream s;
    s << std::left << std::setw(12) << "true\\pred";
    for (Label l : r.classes) s << std::right << std::setw(8) << to_string(l);
    s << "\n";
    for (std::size_t i = 0; i < r.classes.size(); ++i) {
        s << std::left << std::setw(12) << to_string(r.classes[i]);
        for (std::size_t n : r.confusion[i]) s << std::right << std::setw(8) << n;
        s << "\n";
    }
    return s.str();
}

int run_evaluate(const Options& o, const std::vector<std::string>& schemes, std::ostream& out) {
    const ClassifierKind classifier = parse_classifier(o.classifier);
    std::vector<RankingParams> params;
    for (const std::string& name : schemes) {
        params.push_back(make_ranking_params(name, o.gamma, o.neighbors, o.metric));
    }
    const LoadedData loaded = load(o);
    const LabelSet labels = parse_labels(read_file(o.labels));

    const auto base2 = baseline2_featurize(loaded.dataset, labels, params.front().imputation);
    std::vector<std::vector<LabeledPoint>> proposed;
    for (const RankingParams& p : params) {
        proposed.push_back(featurize(loaded.dataset, labels, p.scheme, p.imputation));
    }

    nlohmann::json results = nlohmann::json::array();
    std::ostringstream table;
    constexpr int kFirst = 18;
    constexpr int kCol = 9;
    table << std::left << std::setw(kFirst) << "Features";
    for (const std::string& name : schemes) {
        table << " | " << std::right << std::setw(kCol) << (name == "linear" ? "Linear" : "Sigmoid");
    }
    table << "\n";
    std::ostringstream confusions;

    for (Granularity g : granularities(o)) {
        const double b1 = baseline1_accuracy(proposed.front(), g);
        const EvalReport b2 = cross_validate(base2, classifier, o.folds, g, o.seed);
        std::vector<EvalReport> prop;
        for (std::size_t s = 0; s < params.size(); ++s) {
            prop.push_back(cross_validate(proposed[s], classifier, o.folds, g, o.seed));
            results.push_back({{"granularity", g == Granularity::ThreeClass ? 3 : 2},
                               {"scheme", schemes[s]},
                               {"baseline1", {{"accuracy", b1}, {"accuracy_percent", format_percent(b1)}}},
                               {"baseline2", to_json(b2)},
                               {"proposed", to_json(prop.back())}});
            confusions << "Confusion matrix, " << to_string(g) << ", " << schemes[s]
                       << " (rows = true class)\n"
                       << format_confusion(prop.back()) << "\n";
        }

        table << std::left << std::setw(kFirst) << to_string(g) << "\n";
        auto row = [&](const std::string& name, auto value) {
            table << std::left << std::setw(kFirst) << name;
            for (std::size_t s = 0; s < params.size(); ++s) {
                table << " | " << std::right << std::setw(kCol) << value(s);
            }
            table << "\n";
        };
        row("Baseline 1", [&](std::size_t) { return format_percent(b1); });
        row("Baseline 2", [&](std::size_t) { return format_percent(b2.mean_accuracy); });
        row("Proposed features", [&](std::size_t s) { return format_percent(prop[s].mean_accuracy); });
    }

    nlohmann::json config = {{"neighbors", o.neighbors},
                             {"gamma", o.gamma},
                             {"metric", o.metric},
                             {"classifier", o.classifier},
                             {"folds", o.folds},
                             {"seed", o.seed},
                             {"schemes", schemes}};
    const nlohmann::json report = {{"config", config}, {"results", results}};
    const std::string text = table.str() + "\n" + confusions.str();
    out << text;
    if (!o.out.empty()) {
        write_text(o.out, report.dump(2) + "\n");
        write_text(text_path(o.out), text);
        out << "wrote " << o.out << " and " << text_path(o.out) << "\n";
    }
    return kExitOk;
}

int run_sweep(const Options& o, std::ostream& out) {
    const SweepAxis axis = parse_axis(o.axis);
    const ClassifierKind classifier = parse_classifier(o.classifier);
    const std::vector<double> values = o.values.empty() ? default_sweep_values(axis) : parse_sweep_values(o.values);
    // validate every grid point up front so a bad value is a usage error
    for (double v : values) {
        if (axis == SweepAxis::Gamma) {
            make_ranking_params("sigmoid", v, o.neighbors, o.metric);
        } else if (v < 1.0 || v != std::floor(v)) {
            throw UsageError("neighbors values must be positive integers");
        }
    }
    const RankingParams base = make_ranking_params(axis == SweepAxis::Gamma ? "sigmoid" : o.scheme,
                                                   o.gamma, o.neighbors, o.metric);
    const LoadedData loaded = load(o);
    const LabelSet labels = parse_labels(read_file(o.labels));

    const PointsBuilder build = [&](double v) {
        RankingParams p = base;
        if (axis == SweepAxis::Gamma) {
            p.scheme = WeightingScheme::sigmoid(v);
        } else {
            p.imputation.neighbors = static_cast<std::size_t>(v);
        }
        return featurize(loaded.dataset, labels, p.scheme, p.imputation, Execution::Serial);
    };
    const auto grans = granularities(o);
    const SweepTable table = sweep(build, axis, values, grans, classifier, o.folds, o.seed);

    const std::string text = format_sweep_table(table);
    out << text;
    if (!o.out.empty()) {
        nlohmann::json report = to_json(table);
        report["config"] = {{"scheme", std::string(base.scheme.name())},
                            {"gamma", o.gamma},
                            {"neighbors", o.neighbors},
                            {"metric", o.metric},
                            {"classifier", o.classifier},
                            {"folds", o.folds},
                            {"seed", o.seed}};
        write_text(o.out, report.dump(2) + "\n");
        write_text(text_path(o.out), text);
        out << "wrote " << o.out << " and " << text_path(o.out) << "\n";
    }
    return kExitOk;
}

std::array<double, 3> parse_proportions(const std::string& text) {
    const std::vector<double> parts = parse_sweep_values(text);
    if (parts.size() != 3) throw UsageError("proportions need three values: high,mid,low");
    const double total = parts[0] + parts[1] + parts[2];
    if (!(total > 0.0)) throw UsageError("proportions must have a positive total");
    return {parts[0] / total, parts[1] / total, parts[2] / total};
}

int run_synth(const Options& o, std::ostream& out) {
    SynthConfig cfg;
    cfg.n_countries = o.countries;
    cfg.n_indicators = o.indicators;
    cfg.missing_rate = o.missing_rate;
    cfg.class_separation = o.separation;
    cfg.missing_skew = o.missing_skew;
    cfg.complete_quota = o.complete_quota;
    cfg.class_proportions = parse_proportions(o.proportions);
    cfg.seed = o.seed;
    const SynthData synth = generate(cfg);

    std::filesystem::create_directories(o.out);
    const std::filesystem::path dir(o.out);
    write_text((dir / "data.csv").string(), write_data(synth.data));
    write_text((dir / "labels.csv").string(), write_labels(synth.labels));
    write_text((dir / "schema.json").string(), write_schema(synth.data.schema));
    const auto counts = class_counts(cfg.n_countries, cfg.class_proportions);
    out << "generated " << cfg.n_countries << " countries (high " << counts[0] << ", mid " << counts[1]
        << ", low " << counts[2] << ") x " << cfg.n_indicators << " indicators into " << o.out << "\n";
    return kExitOk;
}

int run_serve(const Options& o, std::ostream& out) {
    const LoadedData loaded = load(o);
    RankingService service;
    service.load(loaded.raw.schema, loaded.dataset);
    httplib::Server server;
    service.mount(server);
    out << "serving " << loaded.dataset.size() << " countries on http://" << o.host << ":" << o.port << "\n";
    out.flush();
    if (!server.listen(o.host, o.port)) throw UsageError("cannot listen on " + o.host + ":" + std::to_string(o.port));
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Composite readiness index: ranking, imputation and evaluation"};
    app.require_subcommand(1);

    auto data_flags = [&](CLI::App* cmd) {
        cmd->add_option("--data", o.data, "indicator CSV (country + indicator columns)")->required();
        cmd->add_option("--schema", o.schema, "indicator schema JSON; inferred from the header when absent");
    };
    auto index_flags = [&](CLI::App* cmd) {
        cmd->add_option("--scheme", o.scheme, "linear|sigmoid")->check(CLI::IsMember({"linear", "sigmoid"}));
        cmd->add_option("--gamma", o.gamma, "sigmoid centre, strictly inside (0,1)");
        cmd->add_option("--neighbors", o.neighbors, "donors averaged per missing indicator");
        cmd->add_option("--metric", o.metric, "cosine|euclidean donor similarity");
    };
    auto eval_flags = [&](CLI::App* cmd) {
        cmd->add_option("--labels", o.labels, "labels CSV (country,label)")->required();
        cmd->add_option("--granularity", o.granularity, "2 or 3; both when absent");
        cmd->add_option("--classifier", o.classifier, "nb|svm");
        cmd->add_option("--folds", o.folds, "cross-validation folds");
        cmd->add_option("--seed", o.seed, "fold shuffling seed");
    };

    auto* rank_cmd = app.add_subcommand("rank", "rank countries by weighted similarity to the ideal");
    data_flags(rank_cmd);
    index_flags(rank_cmd);
    rank_cmd->add_option("--out", o.out, "ranking CSV path; stdout when absent");
    rank_cmd->add_flag("--emit-imputed", o.emit_imputed, "append imputed indicator columns");

    auto* impute_cmd = app.add_subcommand("impute", "fill missing indicators from similar countries");
    data_flags(impute_cmd);
    index_flags(impute_cmd);
    impute_cmd->add_option("--out", o.out, "imputed CSV path; stdout when absent");

    auto* eval_cmd = app.add_subcommand("evaluate", "cross-validated accuracy against both baselines");
    data_flags(eval_cmd);
    index_flags(eval_cmd);
    eval_flags(eval_cmd);
    eval_cmd->add_option("--out", o.out, "JSON report path; a .txt table is written alongside");

    auto* sweep_cmd = app.add_subcommand("sweep", "accuracy over a gamma or neighbors grid");
    data_flags(sweep_cmd);
    index_flags(sweep_cmd);
    eval_flags(sweep_cmd);
    sweep_cmd->add_option("--axis", o.axis, "gamma|neighbors")->check(CLI::IsMember({"gamma", "neighbors"}));
    sweep_cmd->add_option("--values", o.values, "lo:hi:step or comma list; default grid when absent");
    sweep_cmd->add_option("--out", o.out, "JSON report path; a .txt table is written alongside");

    auto* synth_cmd = app.add_subcommand("synth", "generate a labeled synthetic dataset");
    synth_cmd->add_option("--countries", o.countries, "number of countries");
    synth_cmd->add_option("--indicators", o.indicators, "number of indicators");
    synth_cmd->add_option("--missing-rate", o.missing_rate, "overall fraction of missing cells, in [0,1)");
    synth_cmd->add_option("--separation", o.separation, "class separation (indicator std = 1/separation)");
    synth_cmd->add_option("--missing-skew", o.missing_skew, "tilt of missingness toward low classes, in [0,1]");
    synth_cmd->add_option("--complete-quota", o.complete_quota, "countries forced fully observed");
    synth_cmd->add_option("--proportions", o.proportions, "high,mid,low class weights");
    synth_cmd->add_option("--seed", o.seed, "generator seed");
    synth_cmd->add_option("--out", o.out, "output directory")->required();

    auto* serve_cmd = app.add_subcommand("serve", "read-only HTTP ranking service");
    data_flags(serve_cmd);
    serve_cmd->add_option("--host", o.host, "bind address");
    serve_cmd->add_option("--port", o.port, "TCP port");

    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (rank_cmd->parsed()) return run_rank(o, out, err);
        if (impute_cmd->parsed()) return run_impute(o, out, err);
        if (eval_cmd->parsed()) {
            std::vector<std::string> schemes{"linear", "sigmoid"};
            if (eval_cmd->get_option("--scheme")->count() > 0) schemes = {o.scheme};
            return run_evaluate(o, schemes, out);
        }
        if (sweep_cmd->parsed()) return run_sweep(o, out);
        if (synth_cmd->parsed()) return run_synth(o, out);
        if (serve_cmd->parsed()) return run_serve(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DegenerateTrainingSet& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}

} // namespace bri::cli
