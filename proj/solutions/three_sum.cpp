#include "runner.hpp"

#include <algorithm>
#include <cstdio>

namespace {

std::vector<long long> parse(const std::string& blob) {
    const auto lines = runner::lines_of(blob);
    if (lines.size() != 1) {
        std::fprintf(stderr, "expected one line\n");
        std::exit(2);
    }
    return runner::parse_list(lines[0]);
}

// Sorted two-pointer scan; skips duplicate anchors and pair values so each
// value-triple appears once, in ascending order.
std::string solve(const std::vector<long long>& input) {
    auto v = input;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    std::string out = "[";
    bool first = true;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        if (i > 0 && v[i] == v[i - 1]) continue;
        std::size_t lo = i + 1, hi = n - 1;
        while (lo < hi) {
            const long long sum = v[i] + v[lo] + v[hi];
            if (sum < 0) {
                ++lo;
            } else if (sum > 0) {
                --hi;
            } else {
                if (!first) out += ',';
                first = false;
                out += '[' + std::to_string(v[i]) + ',' + std::to_string(v[lo]) + ',' +
                       std::to_string(v[hi]) + ']';
                const long long lv = v[lo], hv = v[hi];
                while (lo < hi && v[lo] == lv) ++lo;
                while (lo < hi && v[hi] == hv) --hi;
            }
        }
    }
    out += ']';
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    return runner::run(argc, argv, parse, solve,
                       [](const std::string& s) { std::printf("%s\n", s.c_str()); });
}
