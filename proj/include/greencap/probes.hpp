#pragma once

#include <linux/perf_event.h>
#include <sys/syscall.h>
#include <sys/utsname.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "greencap/errors.hpp"
#include "greencap/metrics.hpp"
#include "greencap/process.hpp"

namespace greencap {

/// One reading from one provider.
struct ProbeSample {
    MetricKind kind = MetricKind::Runtime;
    double value = 0.0;
    std::uint32_t round = 0;
    std::string provider;
    std::vector<std::string> flags;
};

struct ProbeConfig {
    std::uint32_t sampling_rounds = 10;
    std::string energy_domain = "energy-pkg";
    std::string flops_event = "fp_arith_inst_retired.scalar_double";
    /// Empty means default discovery: hardware counters first, the powercap
    /// file tree only when allow_fallback is set. An entry "replay:<path>"
    /// switches every metric to fixture replay.
    std::vector<std::string> provider_order;
    bool allow_fallback = false;
    double timeout_s = 600.0;
};

/// Counter delta with wrap-around correction against the counter's range.
inline double wrap_corrected_delta(double start, double end, double range) {
    if (end >= start) return end - start;
    return end + range - start;
}

/// Last well-formed `GREENCAP-MEM-PEAK-KIB: <n>` line on the metrics stream.
inline std::optional<double> parse_mem_peak_line(const std::string& metrics_text) {
    static constexpr std::string_view kPrefix = "GREENCAP-MEM-PEAK-KIB: ";
    std::optional<double> peak;
    std::size_t pos = 0;
    while (pos < metrics_text.size()) {
        std::size_t eol = metrics_text.find('\n', pos);
        if (eol == std::string::npos) eol = metrics_text.size();
        const std::string_view line(metrics_text.data() + pos, eol - pos);
        if (line.size() > kPrefix.size() && line.substr(0, kPrefix.size()) == kPrefix) {
            const std::string_view digits = line.substr(kPrefix.size());
            if (!digits.empty() &&
                digits.find_first_not_of("0123456789") == std::string_view::npos) {
                double value = 0.0;
                for (char c : digits) value = value * 10.0 + (c - '0');
                peak = value;
            }
        }
        pos = eol + 1;
    }
    return peak;
}

namespace detail {

inline std::optional<std::string> read_sysfs_line(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string line;
    std::getline(in, line);
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r' || line.back() == ' '))
        line.pop_back();
    return line;
}

inline int perf_event_open(perf_event_attr* attr, pid_t pid, int cpu, int group_fd,
                           unsigned long flags) {
    return static_cast<int>(::syscall(SYS_perf_event_open, attr, pid, cpu, group_fd, flags));
}

/// RAII perf counter. read_scaled() compensates for multiplexing and reports
/// whether it happened.
class PerfCounter {
public:
    PerfCounter() = default;
    explicit PerfCounter(int fd) : fd_(fd) {}
    PerfCounter(const PerfCounter&) = delete;
    PerfCounter& operator=(const PerfCounter&) = delete;
    PerfCounter(PerfCounter&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    PerfCounter& operator=(PerfCounter&& other) noexcept {
        if (this != &other) {
            reset();
            fd_ = other.fd_;
            other.fd_ = -1;
        }
        return *this;
    }
    ~PerfCounter() { reset(); }

    bool valid() const { return fd_ >= 0; }
    void reset() {
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
    }

    struct Reading {
        std::uint64_t value = 0;
        std::uint64_t time_enabled = 0;
        std::uint64_t time_running = 0;
    };

    Reading read() const {
        Reading r;
        std::uint64_t buf[3] = {0, 0, 0};
        const ssize_t n = ::read(fd_, buf, sizeof buf);
        if (n < static_cast<ssize_t>(sizeof(std::uint64_t)))
            throw Error("perf counter read failed: " + std::string(std::strerror(errno)));
        r.value = buf[0];
        if (n >= static_cast<ssize_t>(2 * sizeof(std::uint64_t))) r.time_enabled = buf[1];
        if (n >= static_cast<ssize_t>(3 * sizeof(std::uint64_t))) r.time_running = buf[2];
        return r;
    }

    double read_scaled(bool* multiplexed) const {
        const Reading r = read();
        if (multiplexed) *multiplexed = false;
        if (r.time_running == 0) {
            if (multiplexed && r.time_enabled > 0) *multiplexed = true;
            return static_cast<double>(r.value);
        }
        if (r.time_running < r.time_enabled) {
            if (multiplexed) *multiplexed = true;
            return static_cast<double>(r.value) *
                   (static_cast<double>(r.time_enabled) /
                    static_cast<double>(r.time_running));
        }
        return static_cast<double>(r.value);
    }

private:
    int fd_ = -1;
};

/// Counting event attached to a parked child; starts at its exec and follows
/// descendants.
inline PerfCounter open_task_counter(std::uint32_t type, std::uint64_t config, pid_t pid,
                                     const std::string& what) {
    perf_event_attr attr{};
    attr.size = sizeof attr;
    attr.type = type;
    attr.config = config;
    attr.disabled = 1;
    attr.enable_on_exec = 1;
    attr.inherit = 1;
    attr.exclude_kernel = 1;
    attr.exclude_hv = 1;
    attr.read_format = PERF_FORMAT_TOTAL_TIME_ENABLED | PERF_FORMAT_TOTAL_TIME_RUNNING;
    const int fd = perf_event_open(&attr, pid, -1, -1, 0);
    if (fd < 0) {
        const int e = errno;
        if (e == EACCES || e == EPERM)
            throw PermissionDenied(
                "opening " + what +
                " was denied; lower kernel.perf_event_paranoid (e.g. `sysctl "
                "kernel.perf_event_paranoid=1`) or grant CAP_PERFMON");
        throw Error("perf_event_open failed for " + what + ": " + std::strerror(e));
    }
    return PerfCounter(fd);
}

/// System-wide counting event on one CPU; used for package-energy domains,
/// which are not per-task.
inline PerfCounter open_cpu_counter(std::uint32_t type, std::uint64_t config,
                                    const std::string& what) {
    perf_event_attr attr{};
    attr.size = sizeof attr;
    attr.type = type;
    attr.config = config;
    attr.disabled = 0;
    const int fd = perf_event_open(&attr, -1, 0, -1, 0);
    if (fd < 0) {
        const int e = errno;
        if (e == EACCES || e == EPERM)
            throw PermissionDenied(
                "opening " + what +
                " needs system-wide counter access; run as root, grant CAP_PERFMON, or "
                "set kernel.perf_event_paranoid=0");
        throw Error("perf_event_open failed for " + what + ": " + std::strerror(e));
    }
    return PerfCounter(fd);
}

struct PmuEvent {
    std::uint32_t type = 0;
    std::uint64_t config = 0;
    double scale = 1.0;
    std::string unit;
};

/// Resolve a named event of a sysfs-described PMU (the power PMU in
/// practice): type, config, scale, and unit.
inline std::optional<PmuEvent> resolve_pmu_event(const std::string& pmu,
                                                 const std::string& event) {
    const std::string base = "/sys/bus/event_source/devices/" + pmu;
    const auto type_line = read_sysfs_line(base + "/type");
    if (!type_line) return std::nullopt;
    const auto event_line = read_sysfs_line(base + "/events/" + event);
    if (!event_line) return std::nullopt;

    PmuEvent out;
    out.type = static_cast<std::uint32_t>(std::stoul(*type_line));
    const std::size_t eq = event_line->find("event=");
    if (eq == std::string::npos) return std::nullopt;
    out.config = std::stoull(event_line->substr(eq + 6), nullptr, 0);
    if (const auto scale_line = read_sysfs_line(base + "/events/" + event + ".scale"))
        out.scale = std::stod(*scale_line);
    if (const auto unit_line = read_sysfs_line(base + "/events/" + event + ".unit"))
        out.unit = *unit_line;
    return out;
}

/// Raw-config encodings for the FLOPs events this harness knows how to ask
/// for. "rNNN" strings pass a literal raw config through.
inline std::optional<std::uint64_t> resolve_flops_event(const std::string& name) {
    if (name == "fp_arith_inst_retired.scalar_double") return 0x1c7;  // umask 0x1, event 0xc7
    if (name == "fp_arith_inst_retired.scalar_single") return 0x2c7;
    if (name.size() > 1 && name[0] == 'r' &&
        name.find_first_not_of("0123456789abcdefABCDEF", 1) == std::string::npos)
        return std::stoull(name.substr(1), nullptr, 16);
    return std::nullopt;
}

struct PowercapDomain {
    std::string energy_path;
    double range_uj = 0.0;
    std::string name;
};

inline std::optional<PowercapDomain> find_powercap_package() {
    for (int i = 0; i < 8; ++i) {
        const std::string base = "/sys/class/powercap/intel-rapl:" + std::to_string(i);
        const auto name = read_sysfs_line(base + "/name");
        if (!name) continue;
        if (name->rfind("package", 0) != 0 && *name != "psys") continue;
        PowercapDomain d;
        d.energy_path = base + "/energy_uj";
        d.name = *name;
        if (const auto range = read_sysfs_line(base + "/max_energy_range_uj"))
            d.range_uj = std::stod(*range);
        if (!read_sysfs_line(d.energy_path)) continue;  // present but unreadable
        return d;
    }
    return std::nullopt;
}

inline std::mutex& measurement_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace detail

/// Parsed measurement fixture: variant key -> metric -> recorded values.
/// Values are validated (finite, nonnegative) at load; lookups answer
/// bit-exactly in fixture order.
class ReplayFixture {
public:
    static constexpr std::string_view kSchema = "greencap-fixture-v1";

    static ReplayFixture load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw PathError("fixture file not readable: " + path);
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const std::exception& e) {
            throw ParseFail("fixture " + path + ": " + e.what());
        }
        if (!doc.is_object() || doc.value("schema", "") != kSchema)
            throw ParseFail("fixture " + path + ": missing or wrong schema marker (want " +
                            std::string(kSchema) + ")");
        if (!doc.contains("variants") || !doc["variants"].is_object())
            throw ParseFail("fixture " + path + ": no variants object");

        ReplayFixture fx;
        fx.path_ = path;
        for (const auto& [key, body] : doc["variants"].items()) {
            Variant v;
            if (body.contains("correct")) {
                if (!body["correct"].is_boolean())
                    throw ParseFail("fixture " + path + ": variant " + key +
                                    ": correct must be a boolean");
                v.correct = body["correct"].get<bool>();
            }
            for (const std::string metric : {"runtime", "energy"}) {
                if (!body.contains(metric)) continue;
                const auto& arr = body[metric];
                if (!arr.is_array())
                    throw ParseFail("fixture " + path + ": variant " + key + ": " + metric +
                                    " must be an array");
                std::vector<double> series;
                for (const auto& x : arr) series.push_back(checked(x, path, key, metric));
                v.series[metric] = std::move(series);
            }
            for (const std::string metric : {"flops", "memory"}) {
                if (!body.contains(metric)) continue;
                v.scalars[metric] = checked(body[metric], path, key, metric);
            }
            fx.variants_[key] = std::move(v);
        }
        return fx;
    }

    std::vector<double> series(const std::string& variant, const std::string& metric,
                               std::size_t rounds) const {
        const Variant* v = find(variant, metric);
        const auto it = v->series.find(metric);
        if (it == v->series.end()) throw FixtureMiss(variant, metric, 0);
        if (it->second.size() < rounds)
            throw FixtureMiss(variant, metric, static_cast<std::int64_t>(it->second.size()));
        return std::vector<double>(it->second.begin(), it->second.begin() + rounds);
    }

    double scalar(const std::string& variant, const std::string& metric) const {
        const Variant* v = find(variant, metric);
        const auto it = v->scalars.find(metric);
        if (it == v->scalars.end()) throw FixtureMiss(variant, metric, 0);
        return it->second;
    }

    std::optional<bool> correct(const std::string& variant) const {
        const auto it = variants_.find(variant);
        if (it == variants_.end()) return std::nullopt;
        return it->second.correct;
    }

    bool has_variant(const std::string& variant) const {
        return variants_.count(variant) != 0;
    }

    std::vector<std::string> variant_keys() const {
        std::vector<std::string> keys;
        for (const auto& [k, v] : variants_) keys.push_back(k);
        return keys;
    }

    const std::string& path() const { return path_; }

private:
    struct Variant {
        std::optional<bool> correct;
        std::map<std::string, std::vector<double>> series;
        std::map<std::string, double> scalars;
    };

    static double checked(const nlohmann::json& x, const std::string& path,
                          const std::string& key, const std::string& metric) {
        if (!x.is_number())
            throw ParseFail("fixture " + path + ": variant " + key + ": " + metric +
                            " holds a non-numeric value");
        const double v = x.get<double>();
        if (!std::isfinite(v) || v < 0.0)
            throw ParseFail("fixture " + path + ": variant " + key + ": " + metric +
                            " holds a negative or non-finite value");
        return v;
    }

    const Variant* find(const std::string& variant, const std::string& metric) const {
        const auto it = variants_.find(variant);
        if (it == variants_.end()) throw FixtureMiss(variant, metric, -1);
        return &it->second;
    }

    std::string path_;
    std::map<std::string, Variant> variants_;
};

inline EnvironmentStamp capture_environment(
    const std::map<std::string, std::string>& provider_versions) {
    EnvironmentStamp env;
    utsname uts{};
    if (::uname(&uts) == 0)
        env.os_kernel = std::string(uts.sysname) + " " + uts.release;
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
        if (line.rfind("model name", 0) == 0) {
            const std::size_t colon = line.find(':');
            if (colon != std::string::npos) {
                std::size_t start = colon + 1;
                while (start < line.size() && line[start] == ' ') ++start;
                env.cpu_model = line.substr(start);
            }
            break;
        }
    }
    char stamp[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    env.timestamp_utc = stamp;
    double load[1] = {0.0};
    if (::getloadavg(load, 1) == 1) env.load_hint = load[0];
    env.provider_versions = provider_versions;
    return env;
}

/// The canonical stamp used in replay mode, constant so that serialized
/// records are byte-identical across hosts and runs.
inline EnvironmentStamp replay_environment() {
    EnvironmentStamp env;
    env.os_kernel = "replay";
    env.cpu_model = "replay";
    env.timestamp_utc = "1970-01-01T00:00:00Z";
    env.provider_versions = {{"replay", "fixture"}};
    return env;
}

/// Resolved measurement providers for one session. Discovery happens in
/// create(); the measure_* calls then either answer or throw the typed
/// unavailability error for their metric.
class ProbeSet {
public:
    static ProbeSet create(const ProbeConfig& cfg) {
        ProbeSet ps;
        ps.cfg_ = cfg;

        std::string replay_path;
        for (const std::string& entry : cfg.provider_order) {
            if (entry.rfind("replay:", 0) == 0) replay_path = entry.substr(7);
            else if (entry == "replay")
                throw InvalidInput("replay provider needs a fixture: use replay:<path>");
        }
        if (!replay_path.empty()) {
            ps.fixture_ = std::make_shared<ReplayFixture>(ReplayFixture::load(replay_path));
            ps.env_ = replay_environment();
            return ps;
        }

        const bool explicit_order = !cfg.provider_order.empty();
        auto wants = [&](const std::string& name) {
            if (!explicit_order) return true;
            return std::find(cfg.provider_order.begin(), cfg.provider_order.end(), name) !=
                   cfg.provider_order.end();
        };

        std::map<std::string, std::string> versions;
        versions["runtime"] = "walltime";
        versions["memory"] = "procmem+inband";

        // Energy: the perf power PMU first, the powercap tree only as an
        // explicitly allowed fallback.
        if (wants("perf-energy")) {
            if (const auto ev = detail::resolve_pmu_event("power", cfg.energy_domain)) {
                ps.energy_event_ = *ev;
                ps.perf_energy_ok_ = true;
                versions["energy"] = "perf power/" + cfg.energy_domain + "/";
            } else {
                ps.energy_reason_ = "perf power PMU does not expose " + cfg.energy_domain;
            }
        } else {
            ps.energy_reason_ = "perf-energy not in provider_order";
        }
        if (!ps.perf_energy_ok_ && (wants("powercap") && (explicit_order || cfg.allow_fallback))) {
            if (const auto dom = detail::find_powercap_package()) {
                ps.powercap_ = *dom;
                ps.powercap_ok_ = true;
                versions["energy"] = "powercap " + dom->name;
            } else {
                ps.energy_reason_ += "; powercap tree absent or unreadable";
            }
        } else if (!ps.perf_energy_ok_ && !cfg.allow_fallback) {
            ps.energy_reason_ += "; powercap fallback disabled (allow_fallback=false)";
        }

        if (wants("perf-flops")) {
            if (const auto config = detail::resolve_flops_event(cfg.flops_event)) {
                // Probe support by opening the event on ourselves once.
                perf_event_attr attr{};
                attr.size = sizeof attr;
                attr.type = PERF_TYPE_RAW;
                attr.config = *config;
                attr.disabled = 1;
                attr.exclude_kernel = 1;
                attr.exclude_hv = 1;
                const int fd = detail::perf_event_open(&attr, 0, -1, -1, 0);
                if (fd >= 0) {
                    ::close(fd);
                    ps.flops_config_ = *config;
                    ps.flops_ok_ = true;
                    versions["flops"] = "perf raw " + cfg.flops_event;
                } else if (errno == EACCES || errno == EPERM) {
                    ps.flops_permission_ = true;
                    ps.flops_reason_ =
                        "opening " + cfg.flops_event +
                        " was denied; lower kernel.perf_event_paranoid or grant CAP_PERFMON";
                } else {
                    ps.flops_reason_ = "PMU does not support " + cfg.flops_event + " (" +
                                       std::strerror(errno) + ")";
                }
            } else {
                ps.flops_reason_ = "unrecognized FLOPs event name: " + cfg.flops_event;
            }
        } else {
            ps.flops_reason_ = "perf-flops not in provider_order";
        }

        if (!versions.count("energy"))
            versions["energy"] = "unavailable: " + ps.energy_reason_;
        if (!versions.count("flops")) versions["flops"] = "unavailable: " + ps.flops_reason_;
        ps.env_ = capture_environment(versions);
        return ps;
    }

    bool replay() const { return fixture_ != nullptr; }
    const ReplayFixture* fixture() const { return fixture_.get(); }
    const EnvironmentStamp& environment() const { return env_; }
    const ProbeConfig& config() const { return cfg_; }

    bool energy_available() const { return replay() || perf_energy_ok_ || powercap_ok_; }
    bool flops_available() const { return replay() || flops_ok_; }
    const std::string& energy_reason() const { return energy_reason_; }
    const std::string& flops_reason() const { return flops_reason_; }

    std::vector<ProbeSample> measure_runtime(const CommandSpec& cmd) const {
        if (replay()) return replay_series(cmd, "runtime", MetricKind::Runtime);
        std::lock_guard<std::mutex> lock(detail::measurement_mutex());
        std::vector<ProbeSample> samples;
        for (std::uint32_t round = 0; round < cfg_.sampling_rounds; ++round) {
            const RunResult r = checked_run(cmd, {});
            samples.push_back({MetricKind::Runtime, r.wall_s, round, "walltime", {}});
        }
        return samples;
    }

    std::vector<ProbeSample> measure_energy(const CommandSpec& cmd) const {
        if (replay()) return replay_series(cmd, "energy", MetricKind::Energy);
        if (!perf_energy_ok_ && !powercap_ok_)
            throw EnergyUnavailable(
                "no energy provider: " + energy_reason_ +
                "; pass --probe replay:<fixture> for deterministic runs or enable RAPL "
                "access");
        std::lock_guard<std::mutex> lock(detail::measurement_mutex());
        std::vector<ProbeSample> samples;
        for (std::uint32_t round = 0; round < cfg_.sampling_rounds; ++round)
            samples.push_back(energy_round(cmd, round));
        return samples;
    }

    ProbeSample measure_flops(const CommandSpec& cmd) const {
        if (replay()) {
            ProbeSample s;
            s.kind = MetricKind::Flops;
            s.value = fixture_->scalar(cmd.variant_key, "flops");
            s.provider = "replay";
            return s;
        }
        if (flops_permission_) throw PermissionDenied(flops_reason_);
        if (!flops_ok_) throw FlopsUnavailable(flops_reason_);
        std::lock_guard<std::mutex> lock(detail::measurement_mutex());

        detail::PerfCounter counter;
        RunOptions opts;
        opts.timeout_s = cfg_.timeout_s;
        opts.before_exec = [&](pid_t pid) {
            counter = detail::open_task_counter(PERF_TYPE_RAW, flops_config_, pid,
                                                cfg_.flops_event);
        };
        const RunResult r = checked_run(cmd, opts);
        (void)r;
        bool multiplexed = false;
        const double value = counter.read_scaled(&multiplexed);
        ProbeSample s;
        s.kind = MetricKind::Flops;
        s.value = std::round(value);
        s.provider = "perf-flops";
        if (multiplexed) s.flags.push_back("multiplexed");
        return s;
    }

    ProbeSample measure_memory(const CommandSpec& cmd) const {
        if (replay()) {
            ProbeSample s;
            s.kind = MetricKind::Memory;
            s.value = fixture_->scalar(cmd.variant_key, "memory");
            s.provider = "replay";
            return s;
        }
        std::lock_guard<std::mutex> lock(detail::measurement_mutex());
        RunOptions opts;
        opts.timeout_s = cfg_.timeout_s;
        opts.open_metrics_fd = true;
        const RunResult r = checked_run(cmd, opts);
        ProbeSample s;
        s.kind = MetricKind::Memory;
        if (const auto inband = parse_mem_peak_line(r.metrics)) {
            s.value = *inband;
            s.provider = "inband";
        } else {
            if (r.max_rss_kib <= 0.0)
                throw MemoryUnavailable(
                    "child reported no in-band peak and rusage carried no peak RSS");
            s.value = r.max_rss_kib;
            s.provider = "procmem";
            s.flags.push_back("rss-fallback");
        }
        return s;
    }

private:
    std::vector<ProbeSample> replay_series(const CommandSpec& cmd, const std::string& metric,
                                           MetricKind kind) const {
        const std::vector<double> values =
            fixture_->series(cmd.variant_key, metric, cfg_.sampling_rounds);
        std::vector<ProbeSample> samples;
        for (std::uint32_t i = 0; i < values.size(); ++i)
            samples.push_back({kind, values[i], i, "replay", {}});
        return samples;
    }

    RunResult checked_run(const CommandSpec& cmd, RunOptions opts) const {
        opts.timeout_s = cfg_.timeout_s;
        const RunResult r = run_child(cmd, opts);
        if (r.timed_out)
            throw MeasurementTimeout("variant " + cmd.variant_key + " exceeded " +
                                     std::to_string(opts.timeout_s) + " s");
        if (!r.exited_normally() || r.exit_code() != 0)
            throw ChildFailed(r.exit_code(), r.err,
                              "variant " + cmd.variant_key + " exited with status " +
                                  std::to_string(r.exit_code()));
        return r;
    }

    ProbeSample energy_round(const CommandSpec& cmd, std::uint32_t round) const {
        ProbeSample s;
        s.kind = MetricKind::Energy;
        s.round = round;
        if (perf_energy_ok_) {
            const detail::PerfCounter counter = detail::open_cpu_counter(
                energy_event_.type, energy_event_.config, "power/" + cfg_.energy_domain);
            std::uint64_t v0 = 0;
            RunOptions opts;
            opts.timeout_s = cfg_.timeout_s;
            opts.before_exec = [&](pid_t) { v0 = counter.read().value; };
            checked_run(cmd, opts);
            const std::uint64_t v1 = counter.read().value;
            s.value = static_cast<double>(v1 - v0) * energy_event_.scale;
            s.provider = "perf-energy";
            return s;
        }
        // Powercap path: microjoule file with a published wrap range.
        const auto read_uj = [&]() -> double {
            const auto line = detail::read_sysfs_line(powercap_.energy_path);
            if (!line)
                throw EnergyUnavailable("powercap counter vanished: " + powercap_.energy_path);
            return std::stod(*line);
        };
        double v0 = 0.0;
        RunOptions opts;
        opts.timeout_s = cfg_.timeout_s;
        opts.before_exec = [&](pid_t) { v0 = read_uj(); };
        checked_run(cmd, opts);
        const double v1 = read_uj();
        s.value = wrap_corrected_delta(v0, v1, powercap_.range_uj) * 1e-6;
        s.provider = "powercap";
        return s;
    }

    ProbeConfig cfg_;
    std::shared_ptr<ReplayFixture> fixture_;
    bool perf_energy_ok_ = false;
    detail::PmuEvent energy_event_;
    bool powercap_ok_ = false;
    detail::PowercapDomain powercap_;
    std::string energy_reason_;
    bool flops_ok_ = false;
    bool flops_permission_ = false;
    std::uint64_t flops_config_ = 0;
    std::string flops_reason_;
    EnvironmentStamp env_;
};

inline std::vector<ProbeSample> measure_runtime(const CommandSpec& cmd,
                                                const ProbeConfig& cfg) {
    return ProbeSet::create(cfg).measure_runtime(cmd);
}

inline std::vector<ProbeSample> measure_energy(const CommandSpec& cmd,
                                               const ProbeConfig& cfg) {
    return ProbeSet::create(cfg).measure_energy(cmd);
}

inline ProbeSample measure_flops(const CommandSpec& cmd, const ProbeConfig& cfg) {
    return ProbeSet::create(cfg).measure_flops(cmd);
}

inline ProbeSample measure_memory(const CommandSpec& cmd, const ProbeConfig& cfg) {
    return ProbeSet::create(cfg).measure_memory(cmd);
}

}  // namespace greencap
