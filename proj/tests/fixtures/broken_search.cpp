// A plausible-looking search variant with a subtle flaw: when the target is
// absent it reports the insertion point instead of -1.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<long long> parse_list(const std::string& line) {
    std::vector<long long> out;
    const char* p = line.c_str();
    if (*p != '[') std::exit(2);
    ++p;
    while (*p && *p != ']') {
        if (*p == ',') ++p;
        char* end = nullptr;
        out.push_back(std::strtoll(p, &end, 10));
        if (end == p) std::exit(2);
        p = end;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const char* case_path = nullptr;
    unsigned long long iterations = 1;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--case")
            case_path = argv[i + 1];
        else if (flag == "--iterations")
            iterations = std::strtoull(argv[i + 1], nullptr, 10);
    }
    if (!case_path) return 2;

    std::ifstream in(case_path);
    std::string list_line, target_line;
    if (!std::getline(in, list_line) || !std::getline(in, target_line)) return 2;
    const std::vector<long long> values = parse_list(list_line);
    const long long target = std::strtoll(target_line.c_str(), nullptr, 10);

    long long answer = 0;
    for (unsigned long long it = 0; it < iterations; ++it) {
        std::size_t lo = 0, hi = values.size();
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (values[mid] < target)
                lo = mid + 1;
            else
                hi = mid;
        }
        answer = static_cast<long long>(lo);
        asm volatile("" : : "g"(&answer) : "memory");
    }
    std::printf("%lld\n", answer);
    return 0;
}
