// Pipeline entry point: corpus-build, measure, score, report.
// Exit codes: 0 success, 1 configuration or input error, 2 measurement
// degraded (some metric unavailable; records still written).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "greencap/corpus.hpp"
#include "greencap/harness.hpp"
#include "greencap/manifest.hpp"
#include "greencap/report.hpp"

namespace fs = std::filesystem;
using namespace greencap;

namespace {

struct CliConfig {
    fs::path corpus_dir = "corpus";
    fs::path records_path = "records.jsonl";
    fs::path report_dir = "reports";
    ProbeConfig probe;
    bool verbose = false;
};

void load_config_file(CliConfig& cfg, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw PathError("config file not readable: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ParseFail("config " + path.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseFail("config " + path.string() + ": not an object");

    for (const auto& [key, value] : doc.items()) {
        if (key == "corpus_dir") {
            cfg.corpus_dir = value.get<std::string>();
        } else if (key == "records_path") {
            cfg.records_path = value.get<std::string>();
        } else if (key == "report_dir") {
            cfg.report_dir = value.get<std::string>();
        } else if (key == "log_level") {
            const std::string level = value.get<std::string>();
            if (level != "quiet" && level != "verbose")
                throw InvalidInput("config: log_level must be quiet or verbose");
            cfg.verbose = (level == "verbose");
        } else if (key == "probe") {
            for (const auto& [pk, pv] : value.items()) {
                if (pk == "sampling_rounds")
                    cfg.probe.sampling_rounds = pv.get<std::uint32_t>();
                else if (pk == "energy_domain")
                    cfg.probe.energy_domain = pv.get<std::string>();
                else if (pk == "flops_event")
                    cfg.probe.flops_event = pv.get<std::string>();
                else if (pk == "provider_order")
                    cfg.probe.provider_order = pv.get<std::vector<std::string>>();
                else if (pk == "allow_fallback")
                    cfg.probe.allow_fallback = pv.get<bool>();
                else if (pk == "timeout_s")
                    cfg.probe.timeout_s = pv.get<double>();
                else
                    throw InvalidInput("config: unknown probe key '" + pk + "'");
            }
        } else {
            throw InvalidInput("config: unknown key '" + key + "'");
        }
    }
}

// --probe hardware | replay:<fixture>; GREENCAP_PROBE wins over both the
// flag and the config file.
void apply_probe_selection(ProbeConfig& probe, std::string selection) {
    if (const char* env = std::getenv("GREENCAP_PROBE"); env && *env) selection = env;
    if (selection.empty()) return;
    if (selection == "hardware") {
        probe.provider_order.clear();
        return;
    }
    if (selection.rfind("replay:", 0) == 0 && selection.size() > 7) {
        probe.provider_order = {selection};
        return;
    }
    throw InvalidInput("probe must be 'hardware' or 'replay:<fixture>', got '" +
                       selection + "'");
}

bool is_replay(const ProbeConfig& probe) {
    for (const std::string& p : probe.provider_order)
        if (p.rfind("replay:", 0) == 0) return true;
    return false;
}

void write_text(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PathError("cannot write " + path.string());
    out << bytes;
}

int cmd_corpus_build(const CliConfig& cfg, std::uint64_t seed, std::uint32_t cases,
                     const fs::path& out_dir) {
    const auto summary = build_corpus(out_dir, seed, cases);
    std::printf("built %u cases per problem (seed %llu) in %s\n", cases,
                static_cast<unsigned long long>(seed), out_dir.string().c_str());
    if (cfg.verbose)
        for (const auto& [problem, entries] : summary.cases)
            std::fprintf(stderr, "[greencap] %s: %zu cases\n", problem.c_str(),
                         entries.size());
    return 0;
}

int cmd_measure(const CliConfig& cfg, const fs::path& manifest_path) {
    const Manifest manifest = load_manifest(manifest_path, !is_replay(cfg.probe));
    const CorpusView corpus = CorpusView::load(cfg.corpus_dir);

    EvaluationConfig eval;
    eval.probe = cfg.probe;
    eval.records_path = cfg.records_path;
    if (cfg.verbose)
        eval.log = [](const std::string& msg) {
            std::fprintf(stderr, "[greencap] %s\n", msg.c_str());
        };

    const EvaluationOutcome outcome = run_evaluation(manifest, corpus, eval);
    std::printf("wrote %zu records to %s\n", outcome.records.size(),
                cfg.records_path.string().c_str());
    if (outcome.degraded) {
        std::fprintf(stderr, "warning: some metrics were unavailable; records carry "
                             "the reasons\n");
        return 2;
    }
    return 0;
}

int cmd_score(const fs::path& records_path, const fs::path& out) {
    const auto records = load_records(records_path);
    const auto reports = score_all(records);
    if (!out.parent_path().empty()) fs::create_directories(out.parent_path());
    save_reports(out, reports);
    std::fputs(emit_gc_table_csv(reports).c_str(), stdout);
    std::fprintf(stderr, "wrote %zu reports to %s\n", reports.size(),
                 out.string().c_str());
    return 0;
}

int cmd_report(const CliConfig& cfg, const fs::path& reports_path,
               const std::string& format) {
    std::vector<ReportFormat> formats;
    std::string part;
    std::istringstream split(format);
    while (std::getline(split, part, ',')) {
        if (part == "csv")
            formats.push_back(ReportFormat::Csv);
        else if (part == "svg")
            formats.push_back(ReportFormat::Svg);
        else
            throw InvalidInput("format must be csv, svg, or csv,svg; got '" + part + "'");
    }
    if (formats.empty()) throw InvalidInput("no output format selected");

    const auto reports = load_reports(reports_path);
    fs::create_directories(cfg.report_dir);

    std::size_t files = 0;
    for (ReportFormat fmt : formats) {
        const std::string ext = fmt == ReportFormat::Csv ? ".csv" : ".svg";
        write_text(cfg.report_dir / ("gc_table" + ext), emit_gc_table(reports, fmt));
        ++files;
        for (MetricKind metric : kAllMetricKinds) {
            write_text(
                cfg.report_dir / ("heatmap_" + std::string(to_string(metric)) + ext),
                emit_heatmap(reports, metric, fmt));
            ++files;
        }
    }
    std::printf("wrote %zu report files to %s\n", files, cfg.report_dir.string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"green capacity measurement pipeline"};
    app.require_subcommand(1);

    std::string config_path, probe_sel, format = "csv";
    std::string manifest_path, records_flag, corpus_flag, out_flag, reports_flag;
    bool verbose = false;
    std::uint64_t seed = 42;
    std::uint32_t cases = 200;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file (json)");
        sub->add_flag("--verbose", verbose, "log progress to stderr");
    };

    CLI::App* build = app.add_subcommand("corpus-build", "generate problem cases");
    add_common(build);
    build->add_option("--seed", seed, "corpus seed");
    build->add_option("--cases", cases, "cases per problem");
    build->add_option("--out", out_flag, "corpus output directory");

    CLI::App* measure = app.add_subcommand("measure", "judge and measure variants");
    add_common(measure);
    measure->add_option("--manifest", manifest_path, "variant manifest")->required();
    measure->add_option("--corpus", corpus_flag, "corpus directory");
    measure->add_option("--records", records_flag, "records output path");
    measure->add_option("--probe", probe_sel, "hardware | replay:<fixture>");

    CLI::App* score = app.add_subcommand("score", "fold records into gc reports");
    add_common(score);
    score->add_option("--records", records_flag, "records input path");
    score->add_option("--out", out_flag, "reports output path");

    CLI::App* report = app.add_subcommand("report", "render tables and heatmaps");
    add_common(report);
    report->add_option("--reports", reports_flag, "reports input path");
    report->add_option("--format", format, "csv | svg | csv,svg");
    report->add_option("--out-dir", out_flag, "report output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        CliConfig cfg;
        if (!config_path.empty()) load_config_file(cfg, config_path);
        if (verbose) cfg.verbose = true;
        if (!corpus_flag.empty()) cfg.corpus_dir = corpus_flag;
        if (!records_flag.empty()) cfg.records_path = records_flag;
        apply_probe_selection(cfg.probe, probe_sel);

        if (build->parsed()) {
            const fs::path out = out_flag.empty() ? cfg.corpus_dir : fs::path(out_flag);
            return cmd_corpus_build(cfg, seed, cases, out);
        }
        if (measure->parsed()) return cmd_measure(cfg, manifest_path);
        if (score->parsed()) {
            const fs::path out =
                out_flag.empty() ? cfg.report_dir / "gc_reports.jsonl" : fs::path(out_flag);
            return cmd_score(cfg.records_path, out);
        }
        if (report->parsed()) {
            if (!out_flag.empty()) cfg.report_dir = out_flag;
            const fs::path in = reports_flag.empty()
                                    ? cfg.report_dir / "gc_reports.jsonl"
                                    : fs::path(reports_flag);
            return cmd_report(cfg, in, format);
        }
        std::fprintf(stderr, "error: no subcommand\n");
        return 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
