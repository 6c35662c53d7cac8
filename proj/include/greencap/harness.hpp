#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "greencap/corpus.hpp"
#include "greencap/errors.hpp"
#include "greencap/manifest.hpp"
#include "greencap/metrics.hpp"
#include "greencap/probes.hpp"
#include "greencap/process.hpp"

namespace greencap {

/// Everything needed to execute one variant: the judging case set plus the
/// measurement case and loop parameters.
struct RunPlan {
    VariantDescriptor variant;
    std::uint32_t iterations = 1;
    std::vector<std::uint32_t> case_ids;
    std::uint32_t measurement_case = 0;
    std::uint32_t rounds = 10;
};

inline RunPlan make_run_plan(const VariantDescriptor& variant, const CorpusView& corpus,
                             std::uint32_t iterations, std::uint32_t rounds) {
    if (iterations < 1 || iterations > 1000000)
        throw InvalidInput("iterations must lie in [1, 1000000], got " +
                           std::to_string(iterations));
    RunPlan plan;
    plan.variant = variant;
    plan.iterations = iterations;
    plan.rounds = rounds;
    for (const CorpusCaseEntry& e : corpus.cases_for(variant.problem))
        plan.case_ids.push_back(e.case_id);
    if (plan.case_ids.empty()) throw InvalidInput("no cases for " + variant.problem);
    plan.measurement_case = corpus.largest_case(variant.problem).case_id;
    return plan;
}

// ---- correctness judging -------------------------------------------------

struct JudgeCaseResult {
    std::uint32_t case_id = 0;
    bool passed = false;
    std::string diagnostic;
};

struct JudgeResult {
    bool correct = false;
    std::vector<JudgeCaseResult> cases;

    std::vector<std::uint32_t> failing_ids() const {
        std::vector<std::uint32_t> ids;
        for (const JudgeCaseResult& c : cases)
            if (!c.passed) ids.push_back(c.case_id);
        return ids;
    }
};

namespace detail_harness {

inline std::string trim_diag(std::string text, std::size_t limit = 200) {
    for (char& c : text)
        if (c == '\n' || c == '\r') c = ' ';
    if (text.size() > limit) {
        text.resize(limit);
        text += "...";
    }
    return text;
}

inline CommandSpec variant_command(const VariantDescriptor& variant,
                                   const std::filesystem::path& case_path,
                                   std::uint32_t iterations) {
    CommandSpec cmd;
    cmd.exec_path = variant.exec_path.string();
    cmd.args = {"--case", case_path.string(), "--iterations", std::to_string(iterations)};
    cmd.variant_key = variant.key();
    return cmd;
}

}  // namespace detail_harness

/// Run the variant over every corpus case at one iteration each. Crashes,
/// timeouts, and unparseable output are case failures, never harness errors.
inline JudgeResult judge_correctness(const VariantDescriptor& variant,
                                     const ProblemSpec& problem, const CorpusView& corpus,
                                     double timeout_s = 60.0) {
    JudgeResult result;
    result.correct = true;
    for (const CorpusCaseEntry& entry : corpus.cases_for(std::string(problem.name))) {
        JudgeCaseResult cr;
        cr.case_id = entry.case_id;
        const CommandSpec cmd = detail_harness::variant_command(
            variant, corpus.input_path(std::string(problem.name), entry.case_id), 1);
        RunOptions opts;
        opts.timeout_s = timeout_s;
        const RunResult run = run_child(cmd, opts);
        if (run.timed_out) {
            cr.diagnostic = "timeout after " + std::to_string(timeout_s) + " s";
        } else if (!run.exited_normally()) {
            cr.diagnostic = "crashed (terminated by signal)";
        } else if (run.exit_code() != 0) {
            cr.diagnostic = "exit status " + std::to_string(run.exit_code()) + ": " +
                            detail_harness::trim_diag(run.err);
        } else {
            try {
                cr.passed = compare_outputs(
                    problem, corpus.expected_blob(std::string(problem.name), entry.case_id),
                    run.out);
                if (!cr.passed) cr.diagnostic = "wrong answer";
            } catch (const ParseFail& e) {
                cr.diagnostic = detail_harness::trim_diag(e.what());
            }
        }
        if (!cr.passed) result.correct = false;
        result.cases.push_back(std::move(cr));
    }
    return result;
}

// ---- iteration calibration -------------------------------------------------

struct CalibrationResult {
    std::uint32_t iterations = 1000;
    std::vector<std::string> flags;
    double last_trial_wall_s = 0.0;
};

/// Pick the smallest menu value whose single-trial wall time on the given
/// case lands inside [window_lo_s, window_hi_s].
inline CalibrationResult calibrate_iterations(const VariantDescriptor& variant,
                                              const std::filesystem::path& case_path,
                                              double window_lo_s = 0.5,
                                              double window_hi_s = 120.0) {
    static constexpr std::uint32_t kMenu[3] = {1000, 10000, 100000};

    CalibrationResult result;
    std::uint32_t previous = kMenu[0];
    for (std::uint32_t menu_value : kMenu) {
        const CommandSpec cmd =
            detail_harness::variant_command(variant, case_path, menu_value);
        RunOptions opts;
        opts.timeout_s = window_hi_s + 60.0;
        const RunResult run = run_child(cmd, opts);
        if (!run.timed_out && (!run.exited_normally() || run.exit_code() != 0))
            throw ChildFailed(run.exit_code(), run.err,
                              "calibration trial failed for " + variant.key());
        const double wall = run.timed_out ? opts.timeout_s : run.wall_s;
        result.last_trial_wall_s = wall;
        if (wall > window_hi_s) {
            // Larger menu values can only be slower; settle below the window.
            result.iterations = (menu_value == kMenu[0]) ? kMenu[0] : previous;
            result.flags.push_back("slow-variant");
            return result;
        }
        if (wall >= window_lo_s) {
            result.iterations = menu_value;
            return result;
        }
        previous = menu_value;
    }
    // Even the full menu stays under the window floor.
    result.iterations = kMenu[2];
    result.flags.push_back("fast-floor");
    return result;
}

/// Calibrate against the largest corpus case, mirroring the measurement
/// workload.
inline CalibrationResult calibrate_iterations(const VariantDescriptor& variant,
                                              const ProblemSpec& problem,
                                              const CorpusView& corpus,
                                              double window_lo_s = 0.5,
                                              double window_hi_s = 120.0) {
    const std::string name(problem.name);
    return calibrate_iterations(variant,
                                corpus.input_path(name, corpus.largest_case(name).case_id),
                                window_lo_s, window_hi_s);
}

// ---- record (de)serialization ----------------------------------------------

inline nlohmann::json series_to_json(const MetricSeries& s) {
    return nlohmann::json{{"mean", s.mean}, {"samples", s.samples}, {"stddev", s.stddev}};
}

inline MetricSeries series_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("mean") || !j.contains("samples") ||
        !j.contains("stddev"))
        throw ParseFail(where + ": metric series needs mean, samples, stddev");
    MetricSeries s;
    s.mean = j["mean"].get<double>();
    s.stddev = j["stddev"].get<double>();
    for (const auto& x : j["samples"]) s.samples.push_back(x.get<double>());
    if (s.mean < 0.0 || s.stddev < 0.0)
        throw ParseFail(where + ": negative metric statistics");
    for (double x : s.samples)
        if (x < 0.0) throw ParseFail(where + ": negative sample");
    return s;
}

inline nlohmann::json record_to_json(const MeasurementRecord& r) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["method"] = r.method;
    j["problem"] = r.problem;
    j["prompt"] = std::string(to_string(r.prompt));
    j["label"] = r.label;
    j["correct"] = r.correct;
    j["iterations"] = r.iterations;
    if (r.runtime_s) j["runtime_s"] = series_to_json(*r.runtime_s);
    if (r.energy_j) j["energy_j"] = series_to_json(*r.energy_j);
    if (r.flops) j["flops"] = *r.flops;
    if (r.mem_peak_kib) j["mem_peak_kib"] = *r.mem_peak_kib;
    nlohmann::json env;
    env["os_kernel"] = r.environment.os_kernel;
    env["cpu_model"] = r.environment.cpu_model;
    env["timestamp_utc"] = r.environment.timestamp_utc;
    env["provider_versions"] = r.environment.provider_versions;
    if (r.environment.load_hint) env["load_hint"] = *r.environment.load_hint;
    j["environment"] = env;
    j["flags"] = r.flags;
    return j;
}

inline MeasurementRecord record_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw ParseFail(where + ": record is not an object");
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
        j["schema_version"].get<int>() != 1)
        throw ParseFail(where + ": unsupported schema_version");
    for (const char* field : {"method", "problem", "prompt", "label"})
        if (!j.contains(field) || !j[field].is_string())
            throw ParseFail(where + ": missing string field '" + field + "'");
    if (!j.contains("correct") || !j["correct"].is_boolean())
        throw ParseFail(where + ": missing boolean field 'correct'");

    MeasurementRecord r;
    r.method = j["method"].get<std::string>();
    r.problem = j["problem"].get<std::string>();
    r.prompt = prompt_class_from_string(j["prompt"].get<std::string>());
    r.label = j["label"].get<std::string>();
    r.correct = j["correct"].get<bool>();
    r.iterations = j.value("iterations", 1u);
    if (r.iterations < 1) throw ParseFail(where + ": iterations must be positive");
    if (j.contains("runtime_s")) r.runtime_s = series_from_json(j["runtime_s"], where);
    if (j.contains("energy_j")) r.energy_j = series_from_json(j["energy_j"], where);
    if (j.contains("flops")) {
        if (!j["flops"].is_number_unsigned())
            throw ParseFail(where + ": flops must be a nonnegative integer");
        r.flops = j["flops"].get<std::uint64_t>();
    }
    if (j.contains("mem_peak_kib")) {
        r.mem_peak_kib = j["mem_peak_kib"].get<double>();
        if (*r.mem_peak_kib < 0.0) throw ParseFail(where + ": negative mem_peak_kib");
    }
    if (j.contains("environment") && j["environment"].is_object()) {
        const auto& env = j["environment"];
        r.environment.os_kernel = env.value("os_kernel", "");
        r.environment.cpu_model = env.value("cpu_model", "");
        r.environment.timestamp_utc = env.value("timestamp_utc", "");
        if (env.contains("load_hint")) r.environment.load_hint = env["load_hint"].get<double>();
        if (env.contains("provider_versions"))
            for (const auto& [k, v] : env["provider_versions"].items())
                r.environment.provider_versions[k] = v.get<std::string>();
    }
    if (j.contains("flags"))
        for (const auto& f : j["flags"]) r.flags.push_back(f.get<std::string>());
    return r;
}

inline std::vector<MeasurementRecord> load_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PathError("records file not readable: " + path.string());
    std::vector<MeasurementRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw ParseFail(where + ": " + e.what());
        }
        records.push_back(record_from_json(j, where));
    }
    return records;
}

/// Append-only JSONL sink, flushed per record so a crash loses at most the
/// record being written.
class RecordWriter {
public:
    RecordWriter() = default;
    explicit RecordWriter(const std::filesystem::path& path) {
        if (path.empty()) return;
        out_.open(path, std::ios::binary | std::ios::trunc);
        if (!out_) throw PathError("cannot write records file: " + path.string());
    }

    void append(const MeasurementRecord& record) {
        if (!out_.is_open()) return;
        out_ << record_to_json(record).dump() << "\n";
        out_.flush();
    }

private:
    std::ofstream out_;
};

// ---- full evaluation ---------------------------------------------------------

struct EvaluationConfig {
    ProbeConfig probe;
    std::filesystem::path records_path;
    double judge_timeout_s = 60.0;
    double calibration_lo_s = 0.5;
    double calibration_hi_s = 120.0;
    std::function<void(const std::string&)> log;
};

struct EvaluationOutcome {
    std::vector<MeasurementRecord> records;
    /// True when any metric was dropped for availability or permission
    /// reasons; the CLI maps this to its degraded exit status.
    bool degraded = false;
};

namespace detail_harness {

struct Pin {
    std::uint32_t iterations = 1;
    std::vector<std::string> flags;
};

}  // namespace detail_harness

/// Judge, calibrate, and measure every manifest variant, in manifest order,
/// strictly serially. Probe unavailability drops only the affected metric;
/// fixture misses and exec errors abort, since they mean the evaluation is
/// misconfigured.
inline EvaluationOutcome run_evaluation(const Manifest& manifest, const CorpusView& corpus,
                                        const EvaluationConfig& cfg) {
    const ProbeSet probes = ProbeSet::create(cfg.probe);
    RecordWriter writer(cfg.records_path);
    EvaluationOutcome outcome;

    const auto log = [&](const std::string& msg) {
        if (cfg.log) cfg.log(msg);
    };

    // Judge results are cached: iteration pinning may judge a variant ahead
    // of its manifest position.
    std::map<std::string, JudgeResult> judged;
    const auto judge_of = [&](const VariantDescriptor& v) -> const JudgeResult& {
        auto it = judged.find(v.key());
        if (it == judged.end()) {
            log("judging " + v.key());
            it = judged
                     .emplace(v.key(), judge_correctness(v, problem_by_name(v.problem),
                                                         corpus, cfg.judge_timeout_s))
                     .first;
        }
        return it->second;
    };

    // Per-problem iteration pin: manifest override, else calibration on the
    // first Init variant (in manifest order) that judges correct.
    std::map<std::string, detail_harness::Pin> pins;
    const auto pin_for = [&](const std::string& problem) -> const detail_harness::Pin& {
        auto it = pins.find(problem);
        if (it != pins.end()) return it->second;

        detail_harness::Pin pin;
        const auto pinned = manifest.iterations.find(problem);
        if (pinned != manifest.iterations.end()) {
            pin.iterations = pinned->second;
        } else if (probes.replay()) {
            // Replay runs nothing, so there is nothing to calibrate against;
            // fixtures are recorded at the problem default unless pinned.
            pin.iterations = problem_by_name(problem).default_iterations;
        } else {
            bool calibrated = false;
            for (const VariantDescriptor& v : manifest.variants) {
                if (v.problem != problem || v.prompt != PromptClass::Init) continue;
                if (!judge_of(v).correct) continue;
                log("calibrating on " + v.key());
                const CalibrationResult cal = calibrate_iterations(
                    v, problem_by_name(problem), corpus, cfg.calibration_lo_s,
                    cfg.calibration_hi_s);
                pin.iterations = cal.iterations;
                pin.flags = cal.flags;
                calibrated = true;
                break;
            }
            if (!calibrated) {
                pin.iterations = problem_by_name(problem).default_iterations;
                pin.flags.push_back("uncalibrated");
            }
        }
        return pins.emplace(problem, std::move(pin)).first->second;
    };

    for (const VariantDescriptor& v : manifest.variants) {
        const detail_harness::Pin& pin = pin_for(v.problem);

        MeasurementRecord rec;
        rec.method = v.method;
        rec.problem = v.problem;
        rec.prompt = v.prompt;
        rec.label = v.label;
        rec.iterations = pin.iterations;
        rec.environment = probes.environment();
        rec.flags = pin.flags;

        if (probes.replay()) {
            if (!probes.fixture()->has_variant(v.key()))
                throw FixtureMiss(v.key(), "correct", -1);
            const std::optional<bool> correct = probes.fixture()->correct(v.key());
            if (!correct) throw FixtureMiss(v.key(), "correct", 0);
            rec.correct = *correct;
        } else {
            const JudgeResult& jr = judge_of(v);
            rec.correct = jr.correct;
            if (!jr.correct) {
                const auto failing = jr.failing_ids();
                std::string summary = "judge-failed: " + std::to_string(failing.size()) +
                                      "/" + std::to_string(jr.cases.size()) + " cases";
                std::string ids = "";
                for (std::size_t i = 0; i < failing.size() && i < 8; ++i)
                    ids += (i ? "," : "") + std::to_string(failing[i]);
                if (!ids.empty()) summary += " (first: " + ids + ")";
                rec.flags.push_back(summary);
                for (const JudgeCaseResult& c : jr.cases)
                    if (!c.passed && !c.diagnostic.empty()) {
                        rec.flags.push_back("judge-diagnostic: case " +
                                            std::to_string(c.case_id) + ": " + c.diagnostic);
                        break;
                    }
            }
        }

        if (rec.correct) {
            const std::uint32_t case_id = corpus.largest_case(v.problem).case_id;
            const CommandSpec cmd = detail_harness::variant_command(
                v, corpus.input_path(v.problem, case_id), pin.iterations);

            const auto guard = [&](const char* metric, const std::function<void()>& fn) {
                try {
                    fn();
                } catch (const EnergyUnavailable& e) {
                    rec.flags.push_back(std::string(metric) + "-unavailable: " + e.what());
                    outcome.degraded = true;
                } catch (const FlopsUnavailable& e) {
                    rec.flags.push_back(std::string(metric) + "-unavailable: " + e.what());
                    outcome.degraded = true;
                } catch (const MemoryUnavailable& e) {
                    rec.flags.push_back(std::string(metric) + "-unavailable: " + e.what());
                    outcome.degraded = true;
                } catch (const PermissionDenied& e) {
                    rec.flags.push_back(std::string(metric) + "-unavailable: " + e.what());
                    outcome.degraded = true;
                } catch (const MeasurementTimeout& e) {
                    rec.flags.push_back("measurement-timeout: " + std::string(metric) +
                                        ": " + e.what());
                    outcome.degraded = true;
                } catch (const ChildFailed& e) {
                    rec.flags.push_back("measurement-failed: " + std::string(metric) +
                                        ": " + e.what());
                    outcome.degraded = true;
                }
            };

            const auto merge_flags = [&](const std::vector<ProbeSample>& samples) {
                for (const ProbeSample& s : samples)
                    for (const std::string& f : s.flags)
                        if (std::find(rec.flags.begin(), rec.flags.end(), f) ==
                            rec.flags.end())
                            rec.flags.push_back(f);
            };

            log("measuring " + v.key() + " at " + std::to_string(pin.iterations) +
                " iterations");
            guard("runtime", [&] {
                const auto samples = probes.measure_runtime(cmd);
                std::vector<double> values;
                for (const auto& s : samples) values.push_back(s.value);
                rec.runtime_s = MetricSeries::from_samples(values);
                merge_flags(samples);
            });
            guard("energy", [&] {
                const auto samples = probes.measure_energy(cmd);
                std::vector<double> values;
                for (const auto& s : samples) values.push_back(s.value);
                rec.energy_j = MetricSeries::from_samples(values);
                merge_flags(samples);
            });
            guard("flops", [&] {
                const ProbeSample s = probes.measure_flops(cmd);
                rec.flops = static_cast<std::uint64_t>(s.value);
                merge_flags({s});
            });
            guard("memory", [&] {
                const ProbeSample s = probes.measure_memory(cmd);
                rec.mem_peak_kib = s.value;
                merge_flags({s});
            });
        }

        writer.append(rec);
        outcome.records.push_back(std::move(rec));
    }
    return outcome;
}

}  // namespace greencap
