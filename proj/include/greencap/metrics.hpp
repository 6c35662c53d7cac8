#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greencap/errors.hpp"

namespace greencap {

/// The four measured sustainability metrics. Correctness is a mask applied to
/// them, not a metric of its own.
enum class MetricKind : std::uint8_t { Runtime, Memory, Flops, Energy };

inline constexpr std::array<MetricKind, 4> kAllMetricKinds = {
    MetricKind::Runtime, MetricKind::Memory, MetricKind::Flops, MetricKind::Energy};

inline constexpr std::string_view to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::Runtime: return "runtime";
        case MetricKind::Memory: return "memory";
        case MetricKind::Flops: return "flops";
        case MetricKind::Energy: return "energy";
    }
    return "unknown";
}

inline constexpr std::string_view unit_of(MetricKind kind) {
    switch (kind) {
        case MetricKind::Runtime: return "s";
        case MetricKind::Memory: return "KiB";
        case MetricKind::Flops: return "count";
        case MetricKind::Energy: return "J";
    }
    return "";
}

inline MetricKind metric_kind_from_string(std::string_view name) {
    for (MetricKind kind : kAllMetricKinds) {
        if (to_string(kind) == name) return kind;
    }
    throw Error("unknown metric kind: " + std::string(name));
}

/// Which optimization request produced a variant.
enum class PromptClass : std::uint8_t { Init, RuntimeOpt, MemoryOpt, EnergyOpt, FlopsOpt, Human };

inline constexpr std::array<PromptClass, 6> kAllPromptClasses = {
    PromptClass::Init,      PromptClass::RuntimeOpt, PromptClass::MemoryOpt,
    PromptClass::EnergyOpt, PromptClass::FlopsOpt,   PromptClass::Human};

inline constexpr std::array<PromptClass, 4> kOptimizingPromptClasses = {
    PromptClass::RuntimeOpt, PromptClass::MemoryOpt, PromptClass::EnergyOpt,
    PromptClass::FlopsOpt};

inline constexpr std::string_view to_string(PromptClass prompt) {
    switch (prompt) {
        case PromptClass::Init: return "init";
        case PromptClass::RuntimeOpt: return "runtime";
        case PromptClass::MemoryOpt: return "memory";
        case PromptClass::EnergyOpt: return "energy";
        case PromptClass::FlopsOpt: return "flops";
        case PromptClass::Human: return "human";
    }
    return "unknown";
}

inline PromptClass prompt_class_from_string(std::string_view name) {
    for (PromptClass prompt : kAllPromptClasses) {
        if (to_string(prompt) == name) return prompt;
    }
    throw Error("unknown prompt class: " + std::string(name));
}

/// The metric an optimizing prompt targets; Init and Human target none.
inline constexpr std::optional<MetricKind> paired_metric(PromptClass prompt) {
    switch (prompt) {
        case PromptClass::RuntimeOpt: return MetricKind::Runtime;
        case PromptClass::MemoryOpt: return MetricKind::Memory;
        case PromptClass::EnergyOpt: return MetricKind::Energy;
        case PromptClass::FlopsOpt: return MetricKind::Flops;
        case PromptClass::Init:
        case PromptClass::Human: return std::nullopt;
    }
    return std::nullopt;
}

/// Host fingerprint recorded once per measurement session.
struct EnvironmentStamp {
    std::string os_kernel;
    std::string cpu_model;
    std::map<std::string, std::string> provider_versions;
    std::string timestamp_utc;
    std::optional<double> load_hint;
};

struct SampleStats {
    double mean = 0.0;
    double stddev = 0.0;
};

/// Arithmetic mean and population standard deviation of a sampling series.
inline SampleStats aggregate_samples(std::span<const double> samples) {
    if (samples.empty()) throw EmptySampleSet("aggregate_samples: empty sample list");
    double sum = 0.0;
    for (double s : samples) sum += s;
    const double mean = sum / static_cast<double>(samples.size());
    double sq = 0.0;
    for (double s : samples) sq += (s - mean) * (s - mean);
    return {mean, std::sqrt(sq / static_cast<double>(samples.size()))};
}

/// A sampled metric: the mean feeds the GC formulas, samples stay for diagnostics.
struct MetricSeries {
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<double> samples;

    static MetricSeries from_samples(std::vector<double> samples) {
        const SampleStats stats = aggregate_samples(samples);
        return {stats.mean, stats.stddev, std::move(samples)};
    }
};

/// One variant's correctness flag plus its measured metric values. Metric
/// fields are absent when the variant failed judging or a probe was
/// unavailable; an incorrect record contributes 0 to every GC term.
struct MeasurementRecord {
    std::string method;
    std::string problem;
    PromptClass prompt = PromptClass::Init;
    std::string label;

    bool correct = false;
    std::optional<MetricSeries> runtime_s;
    std::optional<MetricSeries> energy_j;
    std::optional<std::uint64_t> flops;
    std::optional<double> mem_peak_kib;
    std::uint32_t iterations = 1;
    EnvironmentStamp environment;
    std::vector<std::string> flags;

    std::optional<double> metric_value(MetricKind kind) const {
        switch (kind) {
            case MetricKind::Runtime:
                return runtime_s ? std::optional<double>(runtime_s->mean) : std::nullopt;
            case MetricKind::Memory: return mem_peak_kib;
            case MetricKind::Flops:
                return flops ? std::optional<double>(static_cast<double>(*flops))
                             : std::nullopt;
            case MetricKind::Energy:
                return energy_j ? std::optional<double>(energy_j->mean) : std::nullopt;
        }
        return std::nullopt;
    }

    std::string variant_key() const {
        return method + "/" + problem + "/" + std::string(to_string(prompt));
    }
};

/// Filtered Performance Delta: the relative improvement (initial - optimized)
/// / initial, masked to 0 when the optimized code is not correct.
/// Result lies in (-inf, 1]; a zero baseline is a measurement fault.
inline double pd(double initial, double optimized, bool correct) {
    if (initial == 0.0) throw DegenerateBaseline(initial, optimized);
    if (!correct) return 0.0;
    return (initial - optimized) / initial;
}

/// Partial GC result: the clamped sum plus the unclamped per-metric deltas.
struct GcFragment {
    double gc = 0.0;
    std::map<MetricKind, double> pd_terms;
    std::vector<std::string> flags;
};

/// GC of the optimized variants against their own Init record. Each
/// optimizing prompt contributes the PD of its paired metric only; missing
/// prompts contribute 0 and are flagged.
inline GcFragment gc_ai(const std::map<PromptClass, MeasurementRecord>& records) {
    const auto init_it = records.find(PromptClass::Init);
    if (init_it == records.end())
        throw BaselineInvalid("gc_ai: no Init record");
    const MeasurementRecord& init = init_it->second;
    if (!init.correct)
        throw BaselineInvalid("gc_ai: Init record failed correctness for " +
                              init.variant_key());

    GcFragment frag;
    for (PromptClass prompt : kOptimizingPromptClasses) {
        const MetricKind kind = *paired_metric(prompt);
        const auto it = records.find(prompt);
        if (it == records.end()) {
            frag.flags.push_back("missing prompt: " + std::string(to_string(prompt)));
            continue;
        }
        const MeasurementRecord& opt = it->second;
        const std::optional<double> base = init.metric_value(kind);
        if (!base) {
            frag.flags.push_back("missing baseline metric: " +
                                 std::string(to_string(kind)));
            continue;
        }
        double term = 0.0;
        if (opt.correct) {
            const std::optional<double> value = opt.metric_value(kind);
            if (!value) {
                frag.flags.push_back("missing metric " + std::string(to_string(kind)) +
                                     " on prompt " + std::string(to_string(prompt)));
                continue;
            }
            term = pd(*base, *value, true);
        }
        frag.pd_terms[kind] = term;
        frag.gc += std::max(term, 0.0);
    }
    return frag;
}

/// GC of a single human record against an Init record: the same human
/// submission is compared on all four metrics. A failing human record is a
/// corpus bug worth surfacing, not a crash: it yields 0 with a flag.
inline GcFragment gc_human(const MeasurementRecord& init, const MeasurementRecord& human) {
    if (!init.correct)
        throw BaselineInvalid("gc_human: Init record failed correctness for " +
                              init.variant_key());

    GcFragment frag;
    if (!human.correct)
        frag.flags.push_back("human record failed correctness: " + human.variant_key());
    for (MetricKind kind : kAllMetricKinds) {
        const std::optional<double> base = init.metric_value(kind);
        if (!base) {
            frag.flags.push_back("missing baseline metric: " +
                                 std::string(to_string(kind)));
            continue;
        }
        double term = 0.0;
        if (human.correct) {
            const std::optional<double> value = human.metric_value(kind);
            if (!value) {
                frag.flags.push_back("missing human metric: " +
                                     std::string(to_string(kind)));
                continue;
            }
            term = pd(*base, *value, true);
        }
        frag.pd_terms[kind] = term;
        frag.gc += std::max(term, 0.0);
    }
    return frag;
}

/// Scores for one (method, problem) pair. pd_terms hold the UNCLAMPED deltas
/// (the heatmap view); gc_ai and gc_human are the clamped sums.
struct GcReport {
    std::string method;
    std::string problem;
    bool baseline_valid = true;
    double gc_ai = 0.0;
    double gc_human = 0.0;
    std::map<MetricKind, double> pd_terms_ai;
    std::map<MetricKind, double> pd_terms_human;
    std::vector<std::string> flags;
};

}  // namespace greencap
