#include "runner.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace {

struct Input {
    std::vector<long long> a;
    std::vector<long long> b;
};

Input parse(const std::string& blob) {
    const auto lines = runner::lines_of(blob);
    if (lines.size() != 2) {
        std::fprintf(stderr, "expected two lines\n");
        std::exit(2);
    }
    return {runner::parse_list(lines[0]), runner::parse_list(lines[1])};
}

// Partition binary search over the shorter array, O(log min(m, n)).
double solve(const Input& in) {
    const std::vector<long long>* a = &in.a;
    const std::vector<long long>* b = &in.b;
    if (a->size() > b->size()) std::swap(a, b);
    const std::size_t m = a->size(), n = b->size();
    const std::size_t half = (m + n + 1) / 2;
    const long long lo_sent = std::numeric_limits<long long>::min() / 2;
    const long long hi_sent = std::numeric_limits<long long>::max() / 2;

    std::size_t lo = 0, hi = m;
    while (true) {
        const std::size_t i = (lo + hi) / 2;
        const std::size_t j = half - i;
        const long long a_left = (i == 0) ? lo_sent : (*a)[i - 1];
        const long long a_right = (i == m) ? hi_sent : (*a)[i];
        const long long b_left = (j == 0) ? lo_sent : (*b)[j - 1];
        const long long b_right = (j == n) ? hi_sent : (*b)[j];
        if (a_left <= b_right && b_left <= a_right) {
            const long long upper_of_left = std::max(a_left, b_left);
            if ((m + n) % 2 == 1) return static_cast<double>(upper_of_left);
            const long long lower_of_right = std::min(a_right, b_right);
            return (static_cast<double>(upper_of_left) +
                    static_cast<double>(lower_of_right)) /
                   2.0;
        }
        if (a_left > b_right)
            hi = i - 1;
        else
            lo = i + 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    return runner::run(argc, argv, parse, solve,
                       [](double v) { std::printf("%.1f\n", v); });
}
