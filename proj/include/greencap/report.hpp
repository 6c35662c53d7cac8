#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "greencap/corpus.hpp"
#include "greencap/errors.hpp"
#include "greencap/metrics.hpp"

namespace greencap {

// ---- scoring ----------------------------------------------------------------

/// Fold measurement records into one GcReport per (method, problem) pair, in
/// first-appearance order. A pair whose records are all human submissions is
/// a human pool entry, not a method, and gets no report of its own; its
/// records serve as the problem's human baseline for every method lacking
/// one. An invalid baseline (Init missing or incorrect) marks the report
/// Invalid rather than scoring as zero.
inline std::vector<GcReport> score_all(const std::vector<MeasurementRecord>& records) {
    using Key = std::pair<std::string, std::string>;  // (method, problem)
    std::map<Key, std::map<PromptClass, const MeasurementRecord*>> groups;
    std::vector<Key> order;

    for (const MeasurementRecord& r : records) {
        const Key key{r.method, r.problem};
        auto [it, fresh] = groups.try_emplace(key);
        if (fresh) order.push_back(key);
        if (!it->second.emplace(r.prompt, &r).second)
            throw InvalidInput("duplicate record for " + r.variant_key());
    }

    // Human submissions from human-only groups, pooled per problem.
    std::map<std::string, std::vector<const MeasurementRecord*>> human_pool;
    const auto is_method_group =
        [](const std::map<PromptClass, const MeasurementRecord*>& g) {
            for (const auto& [prompt, rec] : g)
                if (prompt != PromptClass::Human) return true;
            return false;
        };
    for (const Key& key : order) {
        const auto& group = groups.at(key);
        if (is_method_group(group)) continue;
        human_pool[key.second].push_back(group.at(PromptClass::Human));
    }

    std::vector<GcReport> reports;
    for (const Key& key : order) {
        const auto& group = groups.at(key);
        if (!is_method_group(group)) continue;

        GcReport report;
        report.method = key.first;
        report.problem = key.second;

        std::map<PromptClass, MeasurementRecord> by_prompt;
        for (const auto& [prompt, rec] : group) by_prompt.emplace(prompt, *rec);

        try {
            const GcFragment ai = gc_ai(by_prompt);
            report.gc_ai = ai.gc;
            report.pd_terms_ai = ai.pd_terms;
            report.flags = ai.flags;
        } catch (const BaselineInvalid& e) {
            report.baseline_valid = false;
            report.flags.push_back(std::string("invalid baseline: ") + e.what());
        }

        if (report.baseline_valid) {
            const MeasurementRecord* human = nullptr;
            const auto own = group.find(PromptClass::Human);
            if (own != group.end()) {
                human = own->second;
            } else {
                const auto pool = human_pool.find(key.second);
                if (pool != human_pool.end()) {
                    human = pool->second.front();
                    for (const MeasurementRecord* cand : pool->second)
                        if (cand->method < human->method) human = cand;
                    if (pool->second.size() > 1)
                        report.flags.push_back("ambiguous human pool: using method " +
                                               human->method);
                }
            }
            if (human) {
                const GcFragment h = gc_human(by_prompt.at(PromptClass::Init), *human);
                report.gc_human = h.gc;
                report.pd_terms_human = h.pd_terms;
                report.flags.insert(report.flags.end(), h.flags.begin(), h.flags.end());
            } else {
                report.flags.push_back("missing human record");
            }
        }

        reports.push_back(std::move(report));
    }
    return reports;
}

// ---- report (de)serialization ------------------------------------------------

inline nlohmann::json report_to_json(const GcReport& r) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["method"] = r.method;
    j["problem"] = r.problem;
    j["baseline_valid"] = r.baseline_valid;
    if (r.baseline_valid) {
        j["gc_ai"] = r.gc_ai;
        j["gc_human"] = r.gc_human;
        nlohmann::json ai, human;
        for (const auto& [kind, value] : r.pd_terms_ai)
            ai[std::string(to_string(kind))] = value;
        for (const auto& [kind, value] : r.pd_terms_human)
            human[std::string(to_string(kind))] = value;
        j["pd_terms_ai"] = ai.is_null() ? nlohmann::json::object() : ai;
        j["pd_terms_human"] = human.is_null() ? nlohmann::json::object() : human;
    }
    j["flags"] = r.flags;
    return j;
}

inline GcReport report_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object() || j.value("schema_version", 0) != 1)
        throw ParseFail(where + ": unsupported schema_version");
    for (const char* field : {"method", "problem"})
        if (!j.contains(field) || !j[field].is_string())
            throw ParseFail(where + ": missing string field '" + field + "'");

    GcReport r;
    r.method = j["method"].get<std::string>();
    r.problem = j["problem"].get<std::string>();
    r.baseline_valid = j.value("baseline_valid", true);
    if (r.baseline_valid) {
        if (!j.contains("gc_ai") || !j.contains("gc_human"))
            throw ParseFail(where + ": valid report needs gc_ai and gc_human");
        r.gc_ai = j["gc_ai"].get<double>();
        r.gc_human = j["gc_human"].get<double>();
        const auto read_terms = [&](const char* field, std::map<MetricKind, double>& out) {
            if (!j.contains(field)) return;
            for (const auto& [name, value] : j[field].items())
                out[metric_kind_from_string(name)] = value.get<double>();
        };
        read_terms("pd_terms_ai", r.pd_terms_ai);
        read_terms("pd_terms_human", r.pd_terms_human);
    }
    if (j.contains("flags"))
        for (const auto& f : j["flags"]) r.flags.push_back(f.get<std::string>());
    return r;
}

inline void save_reports(const std::filesystem::path& path,
                         const std::vector<GcReport>& reports) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PathError("cannot write reports file: " + path.string());
    for (const GcReport& r : reports) out << report_to_json(r).dump() << "\n";
}

inline std::vector<GcReport> load_reports(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PathError("reports file not readable: " + path.string());
    std::vector<GcReport> reports;
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
        reports.push_back(report_from_json(j, where));
    }
    return reports;
}

// ---- heatmap sheet --------------------------------------------------------------

enum class CellState { Value, Invalid, Missing };

struct HeatCell {
    CellState state = CellState::Missing;
    double value = 0.0;  // unclamped PD; meaningful only when state == Value
};

struct HeatmapSheet {
    MetricKind metric = MetricKind::Runtime;
    std::vector<std::string> rows;  // methods, lexicographic
    std::vector<std::string> cols;  // problems, canonical corpus order
    std::map<std::pair<std::string, std::string>, HeatCell> cells;

    const HeatCell& at(const std::string& method, const std::string& problem) const {
        const auto it = cells.find({method, problem});
        if (it == cells.end())
            throw GridError("no cell for (" + method + ", " + problem + ")");
        return it->second;
    }
};

namespace detail_report {

// Problems order by their corpus-table position; anything foreign sorts
// after, alphabetically.
inline int problem_rank(const std::string& name) {
    const auto& table = all_problems();
    for (std::size_t i = 0; i < table.size(); ++i)
        if (table[i].name == name) return static_cast<int>(i);
    return static_cast<int>(table.size());
}

inline std::string format_cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    if (std::string(buf) == "-0.00") return "0.00";
    return buf;
}

}  // namespace detail_report

/// Assemble the (method x problem) grid of unclamped paired-metric deltas.
/// The reports must tile the full cross product exactly once.
inline HeatmapSheet build_heatmap(const std::vector<GcReport>& reports, MetricKind metric) {
    HeatmapSheet sheet;
    sheet.metric = metric;

    std::set<std::string> methods, problems;
    for (const GcReport& r : reports) {
        methods.insert(r.method);
        problems.insert(r.problem);
    }
    sheet.rows.assign(methods.begin(), methods.end());
    sheet.cols.assign(problems.begin(), problems.end());
    std::sort(sheet.cols.begin(), sheet.cols.end(),
              [](const std::string& a, const std::string& b) {
                  const int ra = detail_report::problem_rank(a);
                  const int rb = detail_report::problem_rank(b);
                  return ra != rb ? ra < rb : a < b;
              });

    for (const GcReport& r : reports) {
        HeatCell cell;
        if (!r.baseline_valid) {
            cell.state = CellState::Invalid;
        } else {
            const auto it = r.pd_terms_ai.find(metric);
            if (it == r.pd_terms_ai.end()) {
                cell.state = CellState::Missing;
            } else {
                cell.state = CellState::Value;
                cell.value = it->second;
            }
        }
        if (!sheet.cells.emplace(std::make_pair(r.method, r.problem), cell).second)
            throw GridError("duplicate report for (" + r.method + ", " + r.problem + ")");
    }

    for (const std::string& m : sheet.rows)
        for (const std::string& p : sheet.cols)
            if (!sheet.cells.count({m, p}))
                throw GridError("grid is not rectangular: no report for (" + m + ", " +
                                p + ")");
    return sheet;
}

// ---- CSV emitters ------------------------------------------------------------

inline std::string emit_heatmap_csv(const HeatmapSheet& sheet) {
    std::string out = "method";
    for (const std::string& p : sheet.cols) out += "," + p;
    out += "\n";
    for (const std::string& m : sheet.rows) {
        out += m;
        for (const std::string& p : sheet.cols) {
            const HeatCell& cell = sheet.at(m, p);
            out += ",";
            out += cell.state == CellState::Value ? detail_report::format_cell(cell.value)
                                                  : "NA";
        }
        out += "\n";
    }
    return out;
}

inline std::string emit_gc_table_csv(const std::vector<GcReport>& reports) {
    std::string out = "method,problem,gc_ai,gc_human\n";
    for (const GcReport& r : reports) {
        out += r.method + "," + r.problem + ",";
        if (r.baseline_valid)
            out += detail_report::format_cell(r.gc_ai) + "," +
                   detail_report::format_cell(r.gc_human);
        else
            out += "NA,NA";
        out += "\n";
    }
    return out;
}

// ---- SVG emitters ------------------------------------------------------------

namespace detail_report {

// Diverging scale centered at 0 and clipped to [-1, 1]: negative deltas cool
// off toward blue, positive gains deepen toward green.
inline std::string heat_color(double v) {
    const double c = std::clamp(v, -1.0, 1.0);
    const double t = std::fabs(c);
    const int target_r = c < 0 ? 33 : 27;
    const int target_g = c < 0 ? 102 : 120;
    const int target_b = c < 0 ? 172 : 55;
    const auto lerp = [t](int to) {
        return static_cast<int>(std::lround(255.0 + (to - 255.0) * t));
    };
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", lerp(target_r), lerp(target_g),
                  lerp(target_b));
    return buf;
}

inline std::string svg_text(int x, int y, const std::string& body,
                            const std::string& attrs = "") {
    return "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\"" +
           (attrs.empty() ? "" : " " + attrs) + ">" + body + "</text>\n";
}

inline std::string svg_rect(int x, int y, int w, int h, const std::string& fill,
                            const std::string& extra = "") {
    return "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
           "\" width=\"" + std::to_string(w) + "\" height=\"" + std::to_string(h) +
           "\" fill=\"" + fill + "\"" + (extra.empty() ? "" : " " + extra) + "/>\n";
}

inline std::string svg_open(int width, int height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
           std::to_string(width) + " " + std::to_string(height) +
           "\" font-family=\"monospace\" font-size=\"12\">\n" +
           "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" "
           "patternUnits=\"userSpaceOnUse\"><path d=\"M0,6 l6,-6\" stroke=\"#999999\" "
           "stroke-width=\"1\"/></pattern></defs>\n";
}

}  // namespace detail_report

inline std::string emit_heatmap_svg(const HeatmapSheet& sheet) {
    using namespace detail_report;
    constexpr int kCellW = 90, kCellH = 36, kLeft = 130, kTop = 56, kPad = 16;
    const int cols = static_cast<int>(sheet.cols.size());
    const int rows = static_cast<int>(sheet.rows.size());
    const int width = kLeft + kCellW * cols + kPad;
    const int height = kTop + kCellH * rows + kPad;

    std::string svg = svg_open(width, height);
    svg += svg_text(kLeft, 20,
                    std::string(to_string(sheet.metric)) + " delta (" +
                        std::string(unit_of(sheet.metric)) + ")",
                    "font-size=\"14\" font-weight=\"bold\"");
    for (int c = 0; c < cols; ++c)
        svg += svg_text(kLeft + c * kCellW + 6, kTop - 8, sheet.cols[c]);
    for (int r = 0; r < rows; ++r) {
        const int y = kTop + r * kCellH;
        svg += svg_text(8, y + kCellH / 2 + 4, sheet.rows[r]);
        for (int c = 0; c < cols; ++c) {
            const int x = kLeft + c * kCellW;
            const HeatCell& cell = sheet.at(sheet.rows[r], sheet.cols[c]);
            std::string fill = "#f0f0f0";
            std::string label = "NA";
            std::string text_attrs = "fill=\"#666666\"";
            if (cell.state == CellState::Invalid) {
                fill = "url(#hatch)";
            } else if (cell.state == CellState::Value) {
                fill = heat_color(cell.value);
                label = format_cell(cell.value);
                text_attrs = std::fabs(std::clamp(cell.value, -1.0, 1.0)) > 0.6
                                 ? "fill=\"#ffffff\""
                                 : "fill=\"#1a1a1a\"";
            }
            svg += svg_rect(x, y, kCellW, kCellH, fill, "stroke=\"#cccccc\"");
            svg += svg_text(x + 8, y + kCellH / 2 + 4, label, text_attrs);
        }
    }
    svg += "</svg>\n";
    return svg;
}

inline std::string emit_gc_table_svg(const std::vector<GcReport>& reports) {
    using namespace detail_report;
    constexpr int kLeft = 200, kBarMax = 300, kRowH = 40, kTop = 48, kPad = 16;
    const int rows = static_cast<int>(reports.size());
    const int width = kLeft + kBarMax + 110;
    const int height = kTop + kRowH * rows + kPad;

    double peak = 1.0;
    for (const GcReport& r : reports)
        if (r.baseline_valid) peak = std::max({peak, r.gc_ai, r.gc_human});

    std::string svg = svg_open(width, height);
    svg += svg_text(kLeft, 20, "green capacity", "font-size=\"14\" font-weight=\"bold\"");
    svg += svg_text(kLeft, 36, "dark: optimized prompts, light: human",
                    "fill=\"#666666\"");
    for (int i = 0; i < rows; ++i) {
        const GcReport& r = reports[static_cast<std::size_t>(i)];
        const int y = kTop + i * kRowH;
        svg += svg_text(8, y + 18, r.method + "/" + r.problem);
        if (!r.baseline_valid) {
            svg += svg_rect(kLeft, y + 4, kBarMax, kRowH - 12, "url(#hatch)",
                            "stroke=\"#cccccc\"");
            svg += svg_text(kLeft + kBarMax + 8, y + 22, "NA", "fill=\"#666666\"");
            continue;
        }
        const auto bar_w = [peak](double v) {
            return static_cast<int>(std::lround(std::max(v, 0.0) / peak * kBarMax));
        };
        // Zero stays visible as an explicit zero-length baseline tick.
        svg += svg_rect(kLeft, y + 4, std::max(bar_w(r.gc_ai), 1), 12, "#1b7837");
        svg += svg_rect(kLeft, y + 20, std::max(bar_w(r.gc_human), 1), 12, "#a6dba0");
        svg += svg_text(kLeft + bar_w(r.gc_ai) + 8, y + 14, format_cell(r.gc_ai));
        svg += svg_text(kLeft + bar_w(r.gc_human) + 8, y + 30, format_cell(r.gc_human));
    }
    svg += "</svg>\n";
    return svg;
}

// ---- format dispatch -----------------------------------------------------------

enum class ReportFormat { Csv, Svg };

inline std::string emit_heatmap(const std::vector<GcReport>& reports, MetricKind metric,
                                ReportFormat format) {
    const HeatmapSheet sheet = build_heatmap(reports, metric);
    return format == ReportFormat::Csv ? emit_heatmap_csv(sheet)
                                       : emit_heatmap_svg(sheet);
}

inline std::string emit_gc_table(const std::vector<GcReport>& reports,
                                 ReportFormat format) {
    return format == ReportFormat::Csv ? emit_gc_table_csv(reports)
                                       : emit_gc_table_svg(reports);
}

}  // namespace greencap
