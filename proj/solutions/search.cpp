#include "runner.hpp"

#include <algorithm>
#include <cstdio>

namespace {

struct Input {
    std::vector<long long> values;
    long long target = 0;
};

Input parse(const std::string& blob) {
    const auto lines = runner::lines_of(blob);
    if (lines.size() != 2) {
        std::fprintf(stderr, "expected two lines\n");
        std::exit(2);
    }
    return {runner::parse_list(lines[0]), runner::parse_ll(lines[1])};
}

long long solve(const Input& in) {
    const auto it = std::lower_bound(in.values.begin(), in.values.end(), in.target);
    if (it != in.values.end() && *it == in.target)
        return it - in.values.begin();
    return -1;
}

}  // namespace

int main(int argc, char** argv) {
    return runner::run(argc, argv, parse, solve,
                       [](long long v) { std::printf("%lld\n", v); });
}
