#include "runner.hpp"

#include <algorithm>
#include <cstdio>

namespace {

struct Input {
    std::vector<long long> greed;
    std::vector<long long> sizes;
};

Input parse(const std::string& blob) {
    const auto lines = runner::lines_of(blob);
    if (lines.size() != 2) {
        std::fprintf(stderr, "expected two lines\n");
        std::exit(2);
    }
    return {runner::parse_list(lines[0]), runner::parse_list(lines[1])};
}

long long solve(const Input& in) {
    auto greed = in.greed;
    auto sizes = in.sizes;
    std::sort(greed.begin(), greed.end());
    std::sort(sizes.begin(), sizes.end());
    std::size_t child = 0;
    for (std::size_t cookie = 0; cookie < sizes.size() && child < greed.size(); ++cookie)
        if (sizes[cookie] >= greed[child]) ++child;
    return static_cast<long long>(child);
}

}  // namespace

int main(int argc, char** argv) {
    return runner::run(argc, argv, parse, solve,
                       [](long long v) { std::printf("%lld\n", v); });
}
