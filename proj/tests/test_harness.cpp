#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "greencap/corpus.hpp"
#include "greencap/harness.hpp"
#include "greencap/manifest.hpp"

using namespace greencap;
namespace fs = std::filesystem;

namespace {

const std::string kFixtureDir = GREENCAP_FIXTURE_BIN_DIR;
const std::string kSolutionDir = GREENCAP_SOLUTION_BIN_DIR;

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() /
                         ("greencap_harness_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// One corpus shared across the suite; four cases keep judging fast while
// still spanning the size schedule up to each generation cap.
const fs::path& shared_corpus_dir() {
    static const fs::path dir = [] {
        const fs::path d = temp_dir("corpus");
        build_corpus(d, 20260817, 4);
        return d;
    }();
    return dir;
}

CorpusView shared_corpus() { return CorpusView::load(shared_corpus_dir()); }

VariantDescriptor variant_of(const std::string& method, const std::string& problem,
                             PromptClass prompt, const std::string& exec_path) {
    VariantDescriptor v;
    v.method = method;
    v.problem = problem;
    v.prompt = prompt;
    v.exec_path = exec_path;
    return v;
}

nlohmann::json manifest_entry(const std::string& method, const std::string& problem,
                              const std::string& prompt, const std::string& path) {
    return {{"method", method}, {"problem", problem}, {"prompt", prompt}, {"path", path}};
}

bool has_flag_with(const std::vector<std::string>& flags, const std::string& needle) {
    for (const std::string& f : flags)
        if (f.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("manifest: full grid loads with resolved paths and labels") {
    const fs::path dir = temp_dir("manifest_ok");
    fs::copy_file(kFixtureDir + "/noop", dir / "local_noop",
                  fs::copy_options::overwrite_existing);

    nlohmann::json doc;
    doc["variants"] = nlohmann::json::array();
    for (const std::string method : {"alpha", "beta"})
        for (const std::string prompt : {"init", "runtime", "memory", "energy", "flops"})
            doc["variants"].push_back(
                manifest_entry(method, "search", prompt, kFixtureDir + "/noop"));
    doc["variants"].push_back(manifest_entry("alpha", "sort", "human", "local_noop"));
    doc["variants"].back()["label"] = "volunteer #3";
    doc["iterations"] = {{"search", 5000}};
    write_file(dir / "manifest.json", doc.dump());

    const Manifest m = load_manifest(dir / "manifest.json");
    CHECK(m.variants.size() == 11);
    CHECK(m.iterations.at("search") == 5000);

    const VariantDescriptor& human = m.variants.back();
    CHECK(human.prompt == PromptClass::Human);
    CHECK(human.label == "volunteer #3");
    CHECK(human.exec_path.is_absolute());
    CHECK(human.exec_path == dir / "local_noop");
    CHECK(human.key() == "alpha/sort/human");

    CHECK(m.variants.front().prompt == PromptClass::Init);
}

TEST_CASE("manifest: schema violations are named errors") {
    const fs::path dir = temp_dir("manifest_bad");
    const std::string noop = kFixtureDir + "/noop";

    SUBCASE("duplicate triple") {
        nlohmann::json doc;
        doc["variants"] = {manifest_entry("a", "sort", "init", noop),
                           manifest_entry("a", "sort", "init", noop)};
        write_file(dir / "m.json", doc.dump());
        CHECK_THROWS_WITH_AS(load_manifest(dir / "m.json"),
                             doctest::Contains("a/sort/init"), ManifestError);
    }
    SUBCASE("unknown problem") {
        nlohmann::json doc;
        doc["variants"] = {manifest_entry("a", "knapsack", "init", noop)};
        write_file(dir / "m.json", doc.dump());
        CHECK_THROWS_AS(load_manifest(dir / "m.json"), ManifestError);
    }
    SUBCASE("unknown prompt") {
        nlohmann::json doc;
        doc["variants"] = {manifest_entry("a", "sort", "speed", noop)};
        write_file(dir / "m.json", doc.dump());
        CHECK_THROWS_AS(load_manifest(dir / "m.json"), ManifestError);
    }
    SUBCASE("missing field") {
        nlohmann::json doc;
        doc["variants"] = {{{"method", "a"}, {"problem", "sort"}, {"prompt", "init"}}};
        write_file(dir / "m.json", doc.dump());
        CHECK_THROWS_AS(load_manifest(dir / "m.json"), ManifestError);
    }
    SUBCASE("missing binary") {
        nlohmann::json doc;
        doc["variants"] = {manifest_entry("a", "sort", "init", "no_such_binary")};
        write_file(dir / "m.json", doc.dump());
        CHECK_THROWS_AS(load_manifest(dir / "m.json"), PathError);
        CHECK_NOTHROW(load_manifest(dir / "m.json", false));
    }
    SUBCASE("non-executable path") {
        write_file(dir / "plain.txt", "not a program\n");
        nlohmann::json doc;
        doc["variants"] = {manifest_entry("a", "sort", "init", "plain.txt")};
        write_file(dir / "m.json", doc.dump());
        CHECK_THROWS_AS(load_manifest(dir / "m.json"), PathError);
    }
    SUBCASE("iterations for unknown problem") {
        nlohmann::json doc;
        doc["variants"] = {manifest_entry("a", "sort", "init", noop)};
        doc["iterations"] = {{"knapsack", 10}};
        write_file(dir / "m.json", doc.dump());
        CHECK_THROWS_AS(load_manifest(dir / "m.json"), ManifestError);
    }
    SUBCASE("iterations out of range") {
        nlohmann::json doc;
        doc["variants"] = {manifest_entry("a", "sort", "init", noop)};
        doc["iterations"] = {{"sort", 0}};
        write_file(dir / "m.json", doc.dump());
        CHECK_THROWS_AS(load_manifest(dir / "m.json"), ManifestError);
    }
}

TEST_CASE("run plan enumerates all cases and pins the largest for measurement") {
    const CorpusView corpus = shared_corpus();
    const VariantDescriptor v =
        variant_of("ref", "search", PromptClass::Init, kSolutionDir + "/search");

    const RunPlan plan = make_run_plan(v, corpus, 5000, 10);
    CHECK(plan.case_ids.size() == 4);
    CHECK(plan.iterations == 5000);
    CHECK(plan.rounds == 10);
    CHECK(plan.measurement_case == corpus.largest_case("search").case_id);

    CHECK_THROWS_AS(make_run_plan(v, corpus, 0, 10), InvalidInput);
    CHECK_THROWS_AS(make_run_plan(v, corpus, 2000000, 10), InvalidInput);
}

TEST_CASE("judging: reference solutions pass every corpus case") {
    const CorpusView corpus = shared_corpus();
    for (const ProblemSpec& p : all_problems()) {
        CAPTURE(p.name);
        const VariantDescriptor v = variant_of("ref", std::string(p.name),
                                               PromptClass::Init,
                                               kSolutionDir + "/" + std::string(p.name));
        const JudgeResult jr = judge_correctness(v, p, corpus);
        CHECK(jr.correct);
        CHECK(jr.cases.size() == 4);
        for (const JudgeCaseResult& c : jr.cases) {
            CAPTURE(c.case_id);
            CAPTURE(c.diagnostic);
            CHECK(c.passed);
        }
    }
}

TEST_CASE("judging: insertion-point mutant is caught") {
    const CorpusView corpus = shared_corpus();
    const VariantDescriptor v = variant_of("mut", "search", PromptClass::Init,
                                           kFixtureDir + "/broken_search");
    const JudgeResult jr = judge_correctness(v, problem_by_name("search"), corpus);
    CHECK_FALSE(jr.correct);
    const auto failing = jr.failing_ids();
    CHECK(!failing.empty());
    for (const JudgeCaseResult& c : jr.cases)
        if (!c.passed) CHECK(c.diagnostic == "wrong answer");
}

TEST_CASE("judging: unparseable output is a case failure with a diagnostic") {
    const CorpusView corpus = shared_corpus();
    const VariantDescriptor v = variant_of("junk", "cookies", PromptClass::Init,
                                           kFixtureDir + "/garbage_printer");
    const JudgeResult jr = judge_correctness(v, problem_by_name("cookies"), corpus);
    CHECK_FALSE(jr.correct);
    REQUIRE(!jr.cases.empty());
    CHECK(jr.cases.front().diagnostic.find("expected integer") != std::string::npos);
}

TEST_CASE("judging: crashes and timeouts are case failures, not harness errors") {
    const CorpusView corpus = shared_corpus();

    SUBCASE("nonzero exit") {
        const VariantDescriptor v =
            variant_of("bad", "sort", PromptClass::Init, kFixtureDir + "/fail");
        const JudgeResult jr = judge_correctness(v, problem_by_name("sort"), corpus);
        CHECK_FALSE(jr.correct);
        CHECK(jr.cases.front().diagnostic.find("exit status 3") != std::string::npos);
        CHECK(jr.cases.front().diagnostic.find("deliberate failure") != std::string::npos);
    }
    SUBCASE("timeout") {
        const VariantDescriptor v =
            variant_of("hang", "sort", PromptClass::Init, kFixtureDir + "/stall");
        const JudgeResult jr = judge_correctness(v, problem_by_name("sort"), corpus, 0.3);
        CHECK_FALSE(jr.correct);
        CHECK(jr.cases.front().diagnostic.find("timeout") != std::string::npos);
    }
}

TEST_CASE("calibration picks the smallest in-window menu value") {
    const fs::path dir = temp_dir("cal");
    const VariantDescriptor spin =
        variant_of("cal", "search", PromptClass::Init, kFixtureDir + "/cal_spin");
    // Shrunk window so each regime is reachable in test time.
    const double lo = 0.05, hi = 0.4;

    SUBCASE("all trials under the floor") {
        write_file(dir / "zero.in", "0\n");
        const CalibrationResult r = calibrate_iterations(spin, dir / "zero.in", lo, hi);
        CHECK(r.iterations == 100000);
        REQUIRE(r.flags.size() == 1);
        CHECK(r.flags[0] == "fast-floor");
    }
    SUBCASE("first menu value lands in the window") {
        write_file(dir / "mid.in", "100\n");
        const CalibrationResult r = calibrate_iterations(spin, dir / "mid.in", lo, hi);
        CHECK(r.iterations == 1000);
        CHECK(r.flags.empty());
        CHECK(r.last_trial_wall_s >= lo);
        CHECK(r.last_trial_wall_s <= hi);
    }
    SUBCASE("second menu value lands in the window") {
        write_file(dir / "fast.in", "10\n");
        const CalibrationResult r = calibrate_iterations(spin, dir / "fast.in", lo, hi);
        CHECK(r.iterations == 10000);
        CHECK(r.flags.empty());
    }
    SUBCASE("slow variant settles at the smallest menu value") {
        write_file(dir / "slow.in", "1000\n");
        const CalibrationResult r = calibrate_iterations(spin, dir / "slow.in", lo, hi);
        CHECK(r.iterations == 1000);
        REQUIRE(r.flags.size() == 1);
        CHECK(r.flags[0] == "slow-variant");
        CHECK(r.last_trial_wall_s > hi);
    }
}

TEST_CASE("measurement records round-trip through json") {
    MeasurementRecord r;
    r.method = "alpha";
    r.problem = "three_sum";
    r.prompt = PromptClass::EnergyOpt;
    r.label = "variant 7";
    r.correct = true;
    r.iterations = 12345;
    r.runtime_s = MetricSeries::from_samples({0.5, 0.75, 1.0});
    r.energy_j = MetricSeries::from_samples({10.0, 10.5});
    r.flops = 987654321;
    r.mem_peak_kib = 2048.0;
    r.environment.os_kernel = "Linux test";
    r.environment.cpu_model = "Imaginary CPU";
    r.environment.timestamp_utc = "2026-08-17T00:00:00Z";
    r.environment.provider_versions = {{"runtime", "walltime"}};
    r.environment.load_hint = 0.25;
    r.flags = {"multiplexed"};

    const nlohmann::json j = record_to_json(r);
    CHECK(j["schema_version"] == 1);
    const MeasurementRecord back = record_from_json(j, "test");

    CHECK(back.method == r.method);
    CHECK(back.problem == r.problem);
    CHECK(back.prompt == r.prompt);
    CHECK(back.label == r.label);
    CHECK(back.correct == r.correct);
    CHECK(back.iterations == r.iterations);
    REQUIRE(back.runtime_s.has_value());
    CHECK(back.runtime_s->samples == r.runtime_s->samples);
    CHECK(back.runtime_s->mean == doctest::Approx(r.runtime_s->mean));
    REQUIRE(back.energy_j.has_value());
    CHECK(back.flops == r.flops);
    CHECK(back.mem_peak_kib == r.mem_peak_kib);
    CHECK(back.environment.cpu_model == "Imaginary CPU");
    CHECK(back.environment.load_hint == 0.25);
    CHECK(back.flags == r.flags);

    // Serialization is deterministic: same record, same bytes.
    CHECK(record_to_json(back).dump() == j.dump());

    SUBCASE("absent metrics stay absent") {
        MeasurementRecord lean;
        lean.method = "a";
        lean.problem = "sort";
        lean.prompt = PromptClass::Init;
        lean.correct = false;
        const nlohmann::json jl = record_to_json(lean);
        CHECK(!jl.contains("runtime_s"));
        CHECK(!jl.contains("flops"));
        const MeasurementRecord lb = record_from_json(jl, "test");
        CHECK(!lb.runtime_s.has_value());
        CHECK(!lb.flops.has_value());
        CHECK(!lb.mem_peak_kib.has_value());
    }
    SUBCASE("schema violations are parse failures") {
        nlohmann::json bad = j;
        bad["schema_version"] = 2;
        CHECK_THROWS_AS(record_from_json(bad, "test"), ParseFail);

        bad = j;
        bad["runtime_s"]["samples"][0] = -1.0;
        CHECK_THROWS_AS(record_from_json(bad, "test"), ParseFail);

        bad = j;
        bad["flops"] = -5;
        CHECK_THROWS_AS(record_from_json(bad, "test"), ParseFail);

        bad = j;
        bad.erase("correct");
        CHECK_THROWS_AS(record_from_json(bad, "test"), ParseFail);
    }
}

TEST_CASE("record writer appends jsonl that load_records reads back") {
    const fs::path dir = temp_dir("records");
    const fs::path path = dir / "records.jsonl";

    MeasurementRecord r;
    r.method = "a";
    r.problem = "sort";
    r.prompt = PromptClass::Init;
    r.correct = true;
    r.iterations = 10;

    {
        RecordWriter w(path);
        w.append(r);
        r.prompt = PromptClass::RuntimeOpt;
        w.append(r);
    }
    // Blank lines are tolerated.
    std::ofstream(path, std::ios::app) << "\n";

    const auto records = load_records(path);
    REQUIRE(records.size() == 2);
    CHECK(records[0].prompt == PromptClass::Init);
    CHECK(records[1].prompt == PromptClass::RuntimeOpt);

    SUBCASE("broken line reports its number") {
        std::ofstream(path, std::ios::app) << "{not json\n";
        CHECK_THROWS_WITH_AS(load_records(path), doctest::Contains(":4"), ParseFail);
    }
    SUBCASE("missing file is a path error") {
        CHECK_THROWS_AS(load_records(dir / "nope.jsonl"), PathError);
    }
}

namespace {

fs::path write_replay_fixture(const fs::path& dir) {
    nlohmann::json fx;
    fx["schema"] = "greencap-fixture-v1";
    fx["variants"] = {
        {"ref/search/init",
         {{"correct", true},
          {"runtime", {1.0, 2.0, 3.0}},
          {"energy", {50.0, 55.0, 60.0}},
          {"flops", 1234.0},
          {"memory", 512.0}}},
        {"ref/search/runtime",
         {{"correct", true},
          {"runtime", {0.5, 0.5, 0.5}},
          {"energy", {20.0, 20.0, 20.0}},
          {"flops", 1000.0},
          {"memory", 256.0}}},
        {"mut/search/init", {{"correct", false}}},
    };
    const fs::path path = dir / "fixture.json";
    write_file(path, fx.dump());
    return path;
}

}  // namespace

TEST_CASE("replay evaluation is deterministic and never degraded") {
    const fs::path dir = temp_dir("replay_eval");
    const fs::path fixture = write_replay_fixture(dir);

    Manifest m;
    m.variants = {
        variant_of("ref", "search", PromptClass::Init, "unused"),
        variant_of("ref", "search", PromptClass::RuntimeOpt, "unused"),
        variant_of("mut", "search", PromptClass::Init, "unused"),
    };

    EvaluationConfig cfg;
    cfg.probe.sampling_rounds = 3;
    cfg.probe.provider_order = {"replay:" + fixture.string()};
    cfg.records_path = dir / "records.jsonl";

    const CorpusView corpus = shared_corpus();
    const EvaluationOutcome out = run_evaluation(m, corpus, cfg);

    REQUIRE(out.records.size() == 3);
    CHECK_FALSE(out.degraded);

    const MeasurementRecord& init = out.records[0];
    CHECK(init.correct);
    CHECK(init.iterations == problem_by_name("search").default_iterations);
    REQUIRE(init.runtime_s.has_value());
    CHECK(init.runtime_s->samples == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(init.runtime_s->mean == doctest::Approx(2.0));
    REQUIRE(init.energy_j.has_value());
    CHECK(init.flops == 1234);
    CHECK(init.mem_peak_kib == 512.0);
    CHECK(init.environment.timestamp_utc == "1970-01-01T00:00:00Z");

    const MeasurementRecord& mut = out.records[2];
    CHECK_FALSE(mut.correct);
    CHECK(!mut.runtime_s.has_value());
    CHECK(!mut.flops.has_value());

    // Re-running replays to the byte.
    const EvaluationOutcome again = run_evaluation(m, corpus, cfg);
    REQUIRE(again.records.size() == out.records.size());
    for (std::size_t i = 0; i < out.records.size(); ++i)
        CHECK(record_to_json(again.records[i]).dump() ==
              record_to_json(out.records[i]).dump());

    const auto persisted = load_records(cfg.records_path);
    REQUIRE(persisted.size() == 3);
    CHECK(record_to_json(persisted[1]).dump() == record_to_json(out.records[1]).dump());
}

TEST_CASE("replay evaluation refuses a manifest variant the fixture lacks") {
    const fs::path dir = temp_dir("replay_miss");
    const fs::path fixture = write_replay_fixture(dir);

    Manifest m;
    m.variants = {variant_of("ghost", "search", PromptClass::Init, "unused")};

    EvaluationConfig cfg;
    cfg.probe.sampling_rounds = 3;
    cfg.probe.provider_order = {"replay:" + fixture.string()};

    CHECK_THROWS_AS(run_evaluation(m, shared_corpus(), cfg), FixtureMiss);
}

TEST_CASE("hardware evaluation measures what the host can provide") {
    const fs::path dir = temp_dir("hw_eval");

    Manifest m;
    m.variants = {
        variant_of("ref", "search", PromptClass::Init, kSolutionDir + "/search")};
    m.iterations["search"] = 200;

    EvaluationConfig cfg;
    cfg.probe.sampling_rounds = 3;
    cfg.records_path = dir / "records.jsonl";

    const EvaluationOutcome out = run_evaluation(m, shared_corpus(), cfg);
    REQUIRE(out.records.size() == 1);
    const MeasurementRecord& rec = out.records[0];

    CHECK(rec.correct);
    CHECK(rec.iterations == 200);
    REQUIRE(rec.runtime_s.has_value());
    CHECK(rec.runtime_s->samples.size() == 3);
    for (double s : rec.runtime_s->samples) CHECK(s > 0.0);
    REQUIRE(rec.mem_peak_kib.has_value());
    CHECK(*rec.mem_peak_kib > 0.0);
    CHECK(rec.environment.timestamp_utc != "1970-01-01T00:00:00Z");

    // Energy and counter availability depend on the host; either the value
    // is present or the record says why not and the run is degraded.
    if (rec.energy_j.has_value()) {
        CHECK(rec.energy_j->samples.size() == 3);
    } else {
        CHECK(has_flag_with(rec.flags, "energy-unavailable"));
        CHECK(out.degraded);
    }
    if (!rec.flops.has_value()) {
        CHECK(has_flag_with(rec.flags, "flops-unavailable"));
        CHECK(out.degraded);
    }

    const auto persisted = load_records(cfg.records_path);
    CHECK(persisted.size() == 1);
}

TEST_CASE("hardware evaluation calibrates when no pin is given") {
    Manifest m;
    m.variants = {
        variant_of("ref", "search", PromptClass::Init, kSolutionDir + "/search")};

    EvaluationConfig cfg;
    cfg.probe.sampling_rounds = 2;

    const EvaluationOutcome out = run_evaluation(m, shared_corpus(), cfg);
    REQUIRE(out.records.size() == 1);
    // A binary search over 1e5 elements stays far below the window floor
    // even at the top of the menu.
    CHECK(out.records[0].iterations == 100000);
    CHECK(has_flag_with(out.records[0].flags, "fast-floor"));
}

TEST_CASE("evaluation without a correct init falls back to defaults") {
    Manifest m;
    m.variants = {
        variant_of("mut", "search", PromptClass::Init, kFixtureDir + "/broken_search")};

    EvaluationConfig cfg;
    cfg.probe.sampling_rounds = 2;

    const EvaluationOutcome out = run_evaluation(m, shared_corpus(), cfg);
    REQUIRE(out.records.size() == 1);
    const MeasurementRecord& rec = out.records[0];
    CHECK_FALSE(rec.correct);
    CHECK(rec.iterations == problem_by_name("search").default_iterations);
    CHECK(has_flag_with(rec.flags, "uncalibrated"));
    CHECK(has_flag_with(rec.flags, "judge-failed"));
    CHECK(!rec.runtime_s.has_value());
}
