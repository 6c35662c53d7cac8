#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "greencap/errors.hpp"

namespace greencap {

enum class ProblemId : std::uint8_t { Cookies, Search, ThreeSum, Sort, Network, Median };

/// Static description of one benchmark problem. Generation sizes are bounded
/// by [min_size, max_size]; the build schedule additionally caps problems
/// whose oracle cost would dominate corpus generation (gen_cap).
struct ProblemSpec {
    ProblemId id;
    std::string_view name;
    std::string_view difficulty;
    std::uint32_t default_iterations;
    std::uint32_t case_count;
    std::int64_t min_size;
    std::int64_t max_size;
    std::int64_t gen_cap;
};

inline const std::array<ProblemSpec, 6>& all_problems() {
    static const std::array<ProblemSpec, 6> specs = {{
        {ProblemId::Cookies, "cookies", "Easy", 100000, 200, 1, 100000, 100000},
        {ProblemId::Search, "search", "Easy", 100000, 200, 1, 100000, 100000},
        {ProblemId::ThreeSum, "three_sum", "Medium", 1000, 200, 3, 3000, 600},
        {ProblemId::Sort, "sort", "Medium", 1000, 200, 1, 100000, 100000},
        {ProblemId::Network, "network", "Medium", 1000, 200, 2, 1000, 1000},
        {ProblemId::Median, "median", "Hard", 1000, 200, 1, 100000, 100000},
    }};
    return specs;
}

inline const ProblemSpec& problem_by_name(std::string_view name) {
    for (const ProblemSpec& p : all_problems())
        if (p.name == name) return p;
    throw InvalidInput("unknown problem: " + std::string(name));
}

inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Seeded generator over the raw mt19937_64 stream. The engine's output
/// sequence is pinned by the standard, so generated inputs are byte-stable
/// across platforms; distribution adapters would not be.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform-ish integer in [lo, hi] (modulo reduction; the slight bias is
    /// irrelevant for test inputs and keeps the mapping trivially portable).
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }

    bool coin() { return (next() & 1) != 0; }

private:
    std::mt19937_64 engine_;
};

// ---- blob grammar -----------------------------------------------------

namespace blob {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    std::string context;

    void skip_ws() {
        while (pos < text.size() &&
               (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                text[pos] == '\r'))
            ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseFail(context + ": " + what + " at offset " + std::to_string(pos));
    }

    std::int64_t integer() {
        skip_ws();
        std::int64_t value = 0;
        const auto [ptr, ec] =
            std::from_chars(text.data() + pos, text.data() + text.size(), value);
        if (ec != std::errc()) fail("expected integer");
        pos = static_cast<std::size_t>(ptr - text.data());
        return value;
    }

    double real() {
        skip_ws();
        double value = 0.0;
        const auto [ptr, ec] =
            std::from_chars(text.data() + pos, text.data() + text.size(), value);
        if (ec != std::errc()) fail("expected number");
        pos = static_cast<std::size_t>(ptr - text.data());
        return value;
    }

    void expect_end() {
        skip_ws();
        if (pos != text.size()) fail("trailing content");
    }
};

inline std::vector<std::int64_t> int_list_at(Cursor& cur) {
    if (!cur.eat('[')) cur.fail("expected '['");
    std::vector<std::int64_t> out;
    if (cur.eat(']')) return out;
    while (true) {
        out.push_back(cur.integer());
        if (cur.eat(']')) return out;
        if (!cur.eat(',')) cur.fail("expected ',' or ']'");
    }
}

}  // namespace blob

inline std::string format_int_list(const std::vector<std::int64_t>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    out += ']';
    return out;
}

inline std::vector<std::int64_t> parse_int_list(std::string_view text,
                                                const std::string& context) {
    blob::Cursor cur{text, 0, context};
    auto out = blob::int_list_at(cur);
    cur.expect_end();
    return out;
}

inline std::vector<std::vector<std::int64_t>> parse_nested_int_list(
    std::string_view text, const std::string& context) {
    blob::Cursor cur{text, 0, context};
    if (!cur.eat('[')) cur.fail("expected '['");
    std::vector<std::vector<std::int64_t>> out;
    if (cur.eat(']')) {
        cur.expect_end();
        return out;
    }
    while (true) {
        out.push_back(blob::int_list_at(cur));
        if (cur.eat(']')) break;
        if (!cur.eat(',')) cur.fail("expected ',' or ']'");
    }
    cur.expect_end();
    return out;
}

inline std::int64_t parse_single_int(std::string_view text, const std::string& context) {
    blob::Cursor cur{text, 0, context};
    const std::int64_t v = cur.integer();
    cur.expect_end();
    return v;
}

inline double parse_single_real(std::string_view text, const std::string& context) {
    blob::Cursor cur{text, 0, context};
    const double v = cur.real();
    cur.expect_end();
    return v;
}

/// Shortest round-trip decimal form; the canonical float encoding in blobs.
inline std::string format_real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

// ---- input generation --------------------------------------------------

namespace detail_corpus {

inline std::string gen_cookies(Rng& rng, std::int64_t size) {
    std::vector<std::int64_t> greed(static_cast<std::size_t>(size));
    for (auto& g : greed) g = rng.range(1, 100000);
    const std::int64_t cookie_count = rng.range(1, std::max<std::int64_t>(size, 1));
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(cookie_count));
    for (auto& s : sizes) s = rng.range(1, 100000);
    return format_int_list(greed) + "\n" + format_int_list(sizes) + "\n";
}

inline std::string gen_search(Rng& rng, std::int64_t size) {
    std::vector<std::int64_t> values(static_cast<std::size_t>(size));
    std::int64_t v = rng.range(-1000000, 0);
    for (auto& x : values) {
        x = v;
        v += rng.range(1, 20);
    }
    std::int64_t target;
    if (rng.coin())
        target = values[static_cast<std::size_t>(rng.range(0, size - 1))];
    else
        target = rng.range(values.front() - 10, values.back() + 10);
    return format_int_list(values) + "\n" + std::to_string(target) + "\n";
}

inline std::string gen_three_sum(Rng& rng, std::int64_t size) {
    std::vector<std::int64_t> values(static_cast<std::size_t>(size));
    for (auto& x : values) x = rng.range(-100, 100);
    return format_int_list(values) + "\n";
}

inline std::string gen_sort(Rng& rng, std::int64_t size) {
    std::vector<std::int64_t> values(static_cast<std::size_t>(size));
    for (auto& x : values) x = rng.range(-1000000, 1000000);
    return format_int_list(values) + "\n";
}

inline std::string gen_network(Rng& rng, std::int64_t n) {
    const std::int64_t source = rng.range(1, n);
    const bool span_all = rng.range(0, 9) < 8;  // ~80% of cases fully reachable

    std::vector<std::int64_t> order;
    for (std::int64_t i = 1; i <= n; ++i)
        if (i != source) order.push_back(i);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(i) - 1))]);

    const std::size_t reach =
        span_all ? order.size()
                 : static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(order.size())));

    struct Edge {
        std::int64_t u, v, w;
    };
    std::vector<Edge> edges;
    std::vector<std::int64_t> reached = {source};
    for (std::size_t i = 0; i < reach; ++i) {
        const std::int64_t from =
            reached[static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(reached.size()) - 1))];
        edges.push_back({from, order[i], rng.range(1, 100)});
        reached.push_back(order[i]);
    }

    const std::int64_t max_edges = std::min<std::int64_t>(10000, 4 * n);
    const std::int64_t extra =
        rng.range(0, std::max<std::int64_t>(max_edges - static_cast<std::int64_t>(edges.size()), 0));
    for (std::int64_t i = 0; i < extra; ++i) {
        const std::int64_t u = rng.range(1, n);
        std::int64_t v = rng.range(1, n);
        if (u == v) v = (v % n) + 1;
        edges.push_back({u, v, rng.range(1, 100)});
    }

    std::string out = std::to_string(n) + " " + std::to_string(edges.size()) + "\n";
    for (const Edge& e : edges)
        out += std::to_string(e.u) + " " + std::to_string(e.v) + " " + std::to_string(e.w) + "\n";
    out += std::to_string(source) + "\n";
    return out;
}

inline std::string gen_median(Rng& rng, std::int64_t size) {
    const std::int64_t m = rng.range(0, size);
    std::vector<std::int64_t> a(static_cast<std::size_t>(m));
    std::vector<std::int64_t> b(static_cast<std::size_t>(size - m));
    for (auto& x : a) x = rng.range(-1000000, 1000000);
    for (auto& x : b) x = rng.range(-1000000, 1000000);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return format_int_list(a) + "\n" + format_int_list(b) + "\n";
}

inline std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        lines.emplace_back(text.substr(pos, eol - pos));
        pos = eol + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

}  // namespace detail_corpus

inline std::string generate_input(const ProblemSpec& problem, std::uint64_t seed,
                                  std::int64_t size) {
    if (size < problem.min_size || size > problem.max_size)
        throw SizeError("size " + std::to_string(size) + " out of bounds [" +
                        std::to_string(problem.min_size) + ", " +
                        std::to_string(problem.max_size) + "] for " +
                        std::string(problem.name));
    Rng rng(seed);
    switch (problem.id) {
        case ProblemId::Cookies: return detail_corpus::gen_cookies(rng, size);
        case ProblemId::Search: return detail_corpus::gen_search(rng, size);
        case ProblemId::ThreeSum: return detail_corpus::gen_three_sum(rng, size);
        case ProblemId::Sort: return detail_corpus::gen_sort(rng, size);
        case ProblemId::Network: return detail_corpus::gen_network(rng, size);
        case ProblemId::Median: return detail_corpus::gen_median(rng, size);
    }
    throw InvalidInput("unhandled problem id");
}

// ---- oracles -----------------------------------------------------------

namespace detail_corpus {

inline std::string oracle_cookies(const std::string& input) {
    const auto lines = split_lines(input);
    if (lines.size() != 2) throw InvalidInput("cookies input needs two lines");
    auto greed = parse_int_list(lines[0], "cookies greed");
    auto sizes = parse_int_list(lines[1], "cookies sizes");
    for (std::int64_t g : greed)
        if (g < 1) throw InvalidInput("cookies greed must be >= 1");
    for (std::int64_t s : sizes)
        if (s < 1) throw InvalidInput("cookies sizes must be >= 1");
    std::sort(greed.begin(), greed.end());
    std::sort(sizes.begin(), sizes.end());
    std::size_t child = 0;
    for (std::size_t cookie = 0; cookie < sizes.size() && child < greed.size(); ++cookie)
        if (sizes[cookie] >= greed[child]) ++child;
    return std::to_string(child) + "\n";
}

inline std::string oracle_search(const std::string& input) {
    const auto lines = split_lines(input);
    if (lines.size() != 2) throw InvalidInput("search input needs two lines");
    const auto values = parse_int_list(lines[0], "search list");
    const std::int64_t target = parse_single_int(lines[1], "search target");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] <= values[i - 1])
            throw InvalidInput("search list must be strictly increasing");
    // Linear scan is the ground truth; candidates may binary-search.
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == target) return std::to_string(i) + "\n";
    return "-1\n";
}

inline std::string oracle_three_sum(const std::string& input) {
    const auto lines = split_lines(input);
    if (lines.size() != 1) throw InvalidInput("three_sum input needs one line");
    auto values = parse_int_list(lines[0], "three_sum list");
    std::sort(values.begin(), values.end());
    // Brute force over all i<j<k triples of the sorted array; the set
    // deduplicates equal value-triples.
    std::set<std::array<std::int64_t, 3>> found;
    const std::size_t n = values.size();
    for (std::size_t i = 0; i + 2 < n; ++i) {
        if (i > 0 && values[i] == values[i - 1]) continue;
        for (std::size_t j = i + 1; j + 1 < n; ++j) {
            if (j > i + 1 && values[j] == values[j - 1]) continue;
            const std::int64_t need = -(values[i] + values[j]);
            for (std::size_t k = j + 1; k < n; ++k) {
                if (values[k] == need) {
                    found.insert({values[i], values[j], values[k]});
                    break;  // duplicates of values[k] add nothing
                }
                if (values[k] > need) break;
            }
        }
    }
    std::string out = "[";
    bool first = true;
    for (const auto& t : found) {
        if (!first) out += ',';
        first = false;
        out += '[' + std::to_string(t[0]) + ',' + std::to_string(t[1]) + ',' +
               std::to_string(t[2]) + ']';
    }
    out += "]\n";
    return out;
}

inline std::string oracle_sort(const std::string& input) {
    const auto lines = split_lines(input);
    if (lines.size() != 1) throw InvalidInput("sort input needs one line");
    auto values = parse_int_list(lines[0], "sort list");
    std::sort(values.begin(), values.end());
    return format_int_list(values) + "\n";
}

inline std::string oracle_network(const std::string& input) {
    blob::Cursor cur{input, 0, "network input"};
    const std::int64_t n = cur.integer();
    const std::int64_t k = cur.integer();
    if (n < 1) throw InvalidInput("network node count must be >= 1");
    if (k < 0) throw InvalidInput("network edge count must be >= 0");
    struct Edge {
        std::int64_t u, v, w;
    };
    std::vector<Edge> edges(static_cast<std::size_t>(k));
    for (auto& e : edges) {
        e.u = cur.integer();
        e.v = cur.integer();
        e.w = cur.integer();
        if (e.u < 1 || e.u > n || e.v < 1 || e.v > n)
            throw InvalidInput("network edge endpoint out of range");
        if (e.w < 1) throw InvalidInput("network edge weight must be >= 1");
    }
    const std::int64_t source = cur.integer();
    cur.expect_end();
    if (source < 1 || source > n) throw InvalidInput("network source out of range");

    // Bellman-Ford relaxation with early exit on a settled pass.
    const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
    std::vector<std::int64_t> dist(static_cast<std::size_t>(n) + 1, inf);
    dist[static_cast<std::size_t>(source)] = 0;
    for (std::int64_t pass = 0; pass + 1 < n; ++pass) {
        bool changed = false;
        for (const Edge& e : edges) {
            if (dist[static_cast<std::size_t>(e.u)] == inf) continue;
            const std::int64_t cand = dist[static_cast<std::size_t>(e.u)] + e.w;
            if (cand < dist[static_cast<std::size_t>(e.v)]) {
                dist[static_cast<std::size_t>(e.v)] = cand;
                changed = true;
            }
        }
        if (!changed) break;
    }
    std::int64_t answer = 0;
    for (std::int64_t i = 1; i <= n; ++i) {
        const std::int64_t d = dist[static_cast<std::size_t>(i)];
        if (d == inf) {
            answer = -1;
            break;
        }
        answer = std::max(answer, d);
    }
    return std::to_string(answer) + "\n";
}

inline std::string oracle_median(const std::string& input) {
    const auto lines = split_lines(input);
    if (lines.size() != 2) throw InvalidInput("median input needs two lines");
    const auto a = parse_int_list(lines[0], "median first list");
    const auto b = parse_int_list(lines[1], "median second list");
    if (!std::is_sorted(a.begin(), a.end()) || !std::is_sorted(b.begin(), b.end()))
        throw InvalidInput("median lists must each be sorted");
    std::vector<std::int64_t> merged;
    merged.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
    if (merged.empty()) throw InvalidInput("median of zero elements is undefined");
    const std::size_t n = merged.size();
    // Integer inputs keep this exact: the only division is one halving.
    double median;
    if (n % 2 == 1)
        median = static_cast<double>(merged[n / 2]);
    else
        median = (static_cast<double>(merged[n / 2 - 1]) +
                  static_cast<double>(merged[n / 2])) /
                 2.0;
    return format_real(median) + "\n";
}

}  // namespace detail_corpus

inline std::string oracle_solve(const ProblemSpec& problem, const std::string& input) {
    switch (problem.id) {
        case ProblemId::Cookies: return detail_corpus::oracle_cookies(input);
        case ProblemId::Search: return detail_corpus::oracle_search(input);
        case ProblemId::ThreeSum: return detail_corpus::oracle_three_sum(input);
        case ProblemId::Sort: return detail_corpus::oracle_sort(input);
        case ProblemId::Network: return detail_corpus::oracle_network(input);
        case ProblemId::Median: return detail_corpus::oracle_median(input);
    }
    throw InvalidInput("unhandled problem id");
}

// ---- comparators --------------------------------------------------------

inline bool compare_outputs(const ProblemSpec& problem, const std::string& expected,
                            const std::string& actual) {
    switch (problem.id) {
        case ProblemId::Cookies:
        case ProblemId::Search:
        case ProblemId::Network:
            return parse_single_int(expected, "expected output") ==
                   parse_single_int(actual, "actual output");
        case ProblemId::Sort:
            return parse_int_list(expected, "expected output") ==
                   parse_int_list(actual, "actual output");
        case ProblemId::ThreeSum: {
            const auto canonical = [](const std::string& text, const char* what) {
                std::set<std::array<std::int64_t, 3>> triples;
                for (auto& t : parse_nested_int_list(text, what)) {
                    if (t.size() != 3)
                        throw ParseFail(std::string(what) + ": triple of length " +
                                        std::to_string(t.size()));
                    std::sort(t.begin(), t.end());
                    triples.insert({t[0], t[1], t[2]});
                }
                return triples;
            };
            return canonical(expected, "expected output") ==
                   canonical(actual, "actual output");
        }
        case ProblemId::Median:
            return std::fabs(parse_single_real(expected, "expected output") -
                             parse_single_real(actual, "actual output")) <= 1e-5;
    }
    throw InvalidInput("unhandled problem id");
}

// ---- corpus on disk -----------------------------------------------------

struct TestCase {
    std::uint32_t case_id = 0;
    std::uint64_t seed = 0;
    std::int64_t size = 0;
    std::string input_blob;
    std::string expected_blob;
};

struct CorpusCaseEntry {
    std::uint32_t case_id = 0;
    std::uint64_t seed = 0;
    std::int64_t size = 0;
    std::uint64_t input_hash = 0;
    std::uint64_t expected_hash = 0;
};

/// Size of case `index` in a count-case build: a geometric ramp from the
/// structural minimum to the generation cap, so small regression-prone inputs
/// and asymptotically large ones both appear.
inline std::int64_t schedule_size(const ProblemSpec& problem, std::uint32_t index,
                                  std::uint32_t count) {
    const double lo = static_cast<double>(problem.min_size);
    const double hi = static_cast<double>(problem.gen_cap);
    if (count <= 1 || hi <= lo) return problem.gen_cap;
    const double t = static_cast<double>(index) / static_cast<double>(count - 1);
    const double value = lo * std::pow(hi / lo, t);
    return std::clamp(static_cast<std::int64_t>(std::llround(value)), problem.min_size,
                      problem.gen_cap);
}

inline std::uint64_t case_seed(std::uint64_t corpus_seed, const ProblemSpec& problem,
                               std::uint32_t index) {
    return fnv1a64(std::string(problem.name) + ":" + std::to_string(corpus_seed) + ":" +
                   std::to_string(index));
}

inline TestCase make_case(const ProblemSpec& problem, std::uint64_t corpus_seed,
                          std::uint32_t index, std::uint32_t count) {
    TestCase tc;
    tc.case_id = index;
    tc.seed = case_seed(corpus_seed, problem, index);
    tc.size = schedule_size(problem, index, count);
    tc.input_blob = generate_input(problem, tc.seed, tc.size);
    tc.expected_blob = oracle_solve(problem, tc.input_blob);
    return tc;
}

inline std::string case_file_stem(std::uint32_t case_id) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03u", case_id);
    return buf;
}

struct CorpusSummary {
    std::uint64_t seed = 0;
    std::uint32_t case_count = 0;
    std::map<std::string, std::vector<CorpusCaseEntry>> cases;
};

inline CorpusSummary build_corpus(const std::filesystem::path& dir, std::uint64_t seed,
                                  std::uint32_t case_count) {
    namespace fs = std::filesystem;
    if (case_count == 0) throw InvalidInput("case_count must be positive");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw PathError("corpus directory not writable: " + dir.string());

    CorpusSummary summary;
    summary.seed = seed;
    summary.case_count = case_count;

    std::string manifest = "greencap-corpus-v1 seed=" + std::to_string(seed) +
                           " cases=" + std::to_string(case_count) + "\n";
    for (const ProblemSpec& problem : all_problems()) {
        const fs::path pdir = dir / std::string(problem.name);
        fs::create_directories(pdir, ec);
        if (ec) throw PathError("cannot create " + pdir.string());
        for (std::uint32_t i = 0; i < case_count; ++i) {
            const TestCase tc = make_case(problem, seed, i, case_count);
            const std::string stem = case_file_stem(tc.case_id);
            {
                std::ofstream in_file(pdir / (stem + ".in"), std::ios::binary);
                std::ofstream exp_file(pdir / (stem + ".expected"), std::ios::binary);
                if (!in_file || !exp_file)
                    throw PathError("cannot write case files under " + pdir.string());
                in_file << tc.input_blob;
                exp_file << tc.expected_blob;
            }
            CorpusCaseEntry entry{tc.case_id, tc.seed, tc.size, fnv1a64(tc.input_blob),
                                  fnv1a64(tc.expected_blob)};
            summary.cases[std::string(problem.name)].push_back(entry);
            manifest += std::string(problem.name) + " " + std::to_string(entry.case_id) +
                        " " + std::to_string(entry.seed) + " " + std::to_string(entry.size) +
                        " " + hex64(entry.input_hash) + " " + hex64(entry.expected_hash) +
                        "\n";
        }
    }
    std::ofstream mf(dir / "manifest", std::ios::binary);
    if (!mf) throw PathError("cannot write corpus manifest under " + dir.string());
    mf << manifest;
    return summary;
}

/// Read-only view over a built corpus directory, driven by its manifest.
class CorpusView {
public:
    static CorpusView load(const std::filesystem::path& dir) {
        namespace fs = std::filesystem;
        CorpusView view;
        view.dir_ = dir;
        std::ifstream mf(dir / "manifest");
        if (!mf) throw PathError("corpus manifest not readable: " + (dir / "manifest").string());
        std::string header;
        std::getline(mf, header);
        if (header.rfind("greencap-corpus-v1 ", 0) != 0)
            throw ParseFail("corpus manifest: unrecognized header");
        std::string line;
        while (std::getline(mf, line)) {
            if (line.empty()) continue;
            std::istringstream fields(line);
            std::string problem, in_hash, exp_hash;
            CorpusCaseEntry entry;
            if (!(fields >> problem >> entry.case_id >> entry.seed >> entry.size >>
                  in_hash >> exp_hash))
                throw ParseFail("corpus manifest: malformed line: " + line);
            entry.input_hash = std::stoull(in_hash, nullptr, 16);
            entry.expected_hash = std::stoull(exp_hash, nullptr, 16);
            view.cases_[problem].push_back(entry);
        }
        if (view.cases_.empty()) throw ParseFail("corpus manifest lists no cases");
        return view;
    }

    const std::map<std::string, std::vector<CorpusCaseEntry>>& cases() const {
        return cases_;
    }

    const std::vector<CorpusCaseEntry>& cases_for(const std::string& problem) const {
        const auto it = cases_.find(problem);
        if (it == cases_.end()) throw InvalidInput("corpus has no problem " + problem);
        return it->second;
    }

    std::filesystem::path input_path(const std::string& problem, std::uint32_t case_id) const {
        return dir_ / problem / (case_file_stem(case_id) + ".in");
    }

    std::filesystem::path expected_path(const std::string& problem,
                                        std::uint32_t case_id) const {
        return dir_ / problem / (case_file_stem(case_id) + ".expected");
    }

    std::string expected_blob(const std::string& problem, std::uint32_t case_id) const {
        return read_file(expected_path(problem, case_id));
    }

    std::string input_blob(const std::string& problem, std::uint32_t case_id) const {
        return read_file(input_path(problem, case_id));
    }

    /// The measurement case: largest scheduled size, lowest id on ties.
    const CorpusCaseEntry& largest_case(const std::string& problem) const {
        const auto& entries = cases_for(problem);
        const CorpusCaseEntry* best = &entries.front();
        for (const CorpusCaseEntry& e : entries)
            if (e.size > best->size) best = &e;
        return *best;
    }

    /// Recomputes both hashes of every case file against the manifest.
    void verify_digests() const {
        for (const auto& [problem, entries] : cases_) {
            for (const CorpusCaseEntry& e : entries) {
                if (fnv1a64(input_blob(problem, e.case_id)) != e.input_hash)
                    throw ParseFail("corpus digest mismatch: " + problem + " case " +
                                    std::to_string(e.case_id) + " input");
                if (fnv1a64(expected_blob(problem, e.case_id)) != e.expected_hash)
                    throw ParseFail("corpus digest mismatch: " + problem + " case " +
                                    std::to_string(e.case_id) + " expected");
            }
        }
    }

    const std::filesystem::path& dir() const { return dir_; }

private:
    static std::string read_file(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw PathError("cannot read " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    std::filesystem::path dir_;
    std::map<std::string, std::vector<CorpusCaseEntry>> cases_;
};

}  // namespace greencap
