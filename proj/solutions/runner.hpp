#pragma once

// Shared scaffolding for solution programs. Protocol:
//   <binary> --case <input-file> --iterations <N>
// The input file is read and parsed once, the solve callable runs N times,
// and the final answer prints once.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

namespace runner {

struct Args {
    std::string case_path;
    std::uint64_t iterations = 1;
};

inline Args parse_args(int argc, char** argv) {
    Args args;
    bool have_case = false;
    for (int i = 1; i < argc; ++i) {
        const std::string flag = argv[i];
        if (flag == "--case" && i + 1 < argc) {
            args.case_path = argv[++i];
            have_case = true;
        } else if (flag == "--iterations" && i + 1 < argc) {
            char* end = nullptr;
            args.iterations = std::strtoull(argv[++i], &end, 10);
            if (end == argv[i] || *end != '\0') {
                std::fprintf(stderr, "bad iteration count: %s\n", argv[i]);
                std::exit(2);
            }
        } else {
            std::fprintf(stderr, "usage: %s --case <file> --iterations <n>\n", argv[0]);
            std::exit(2);
        }
    }
    if (!have_case || args.iterations < 1) {
        std::fprintf(stderr, "usage: %s --case <file> --iterations <n>\n",
                     argc > 0 ? argv[0] : "solution");
        std::exit(2);
    }
    return args;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::fprintf(stderr, "cannot open %s\n", path.c_str());
        std::exit(2);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::vector<std::string> lines_of(const std::string& blob) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < blob.size()) {
        std::size_t eol = blob.find('\n', pos);
        if (eol == std::string::npos) eol = blob.size();
        lines.push_back(blob.substr(pos, eol - pos));
        pos = eol + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

// Bracketed integer list, e.g. [3,-1,4]. Empty is [].
inline std::vector<long long> parse_list(const std::string& line) {
    std::vector<long long> out;
    const char* p = line.c_str();
    while (*p == ' ' || *p == '\t') ++p;
    if (*p != '[') {
        std::fprintf(stderr, "expected a list: %s\n", line.c_str());
        std::exit(2);
    }
    ++p;
    while (true) {
        while (*p == ' ' || *p == ',') ++p;
        if (*p == ']') break;
        char* end = nullptr;
        out.push_back(std::strtoll(p, &end, 10));
        if (end == p) {
            std::fprintf(stderr, "bad list element: %s\n", line.c_str());
            std::exit(2);
        }
        p = end;
    }
    return out;
}

inline long long parse_ll(const std::string& line) {
    char* end = nullptr;
    const long long v = std::strtoll(line.c_str(), &end, 10);
    if (end == line.c_str()) {
        std::fprintf(stderr, "expected an integer: %s\n", line.c_str());
        std::exit(2);
    }
    return v;
}

inline std::string format_list(const std::vector<long long>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    out += ']';
    return out;
}

template <class Parse, class Solve, class Print>
int run(int argc, char** argv, Parse&& parse, Solve&& solve, Print&& print) {
    const Args args = parse_args(argc, argv);
    const std::string blob = read_file(args.case_path);
    const auto input = parse(blob);
    using Answer = std::decay_t<decltype(solve(input))>;
    Answer answer{};
    for (std::uint64_t i = 0; i < args.iterations; ++i) {
        answer = solve(input);
        // Keeps the optimizer from hoisting the call out of the loop.
        asm volatile("" : : "g"(&answer) : "memory");
    }
    print(answer);
    return 0;
}

}  // namespace runner
