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

std::string solve(const std::vector<long long>& input) {
    auto v = input;
    std::sort(v.begin(), v.end());
    return runner::format_list(v);
}

}  // namespace

int main(int argc, char** argv) {
    return runner::run(argc, argv, parse, solve,
                       [](const std::string& s) { std::printf("%s\n", s.c_str()); });
}
