#include "runner.hpp"

#include <cstdio>
#include <queue>
#include <sstream>
#include <utility>

namespace {

struct Input {
    long long n = 0;
    std::vector<std::vector<std::pair<int, long long>>> adj;  // node -> (to, weight)
    int source = 1;
};

Input parse(const std::string& blob) {
    std::istringstream in(blob);
    long long n = 0, k = 0;
    if (!(in >> n >> k) || n < 1 || k < 0) {
        std::fprintf(stderr, "bad header\n");
        std::exit(2);
    }
    Input input;
    input.n = n;
    input.adj.resize(static_cast<std::size_t>(n) + 1);
    for (long long i = 0; i < k; ++i) {
        long long u = 0, v = 0, w = 0;
        if (!(in >> u >> v >> w) || u < 1 || u > n || v < 1 || v > n || w < 1) {
            std::fprintf(stderr, "bad edge\n");
            std::exit(2);
        }
        input.adj[static_cast<std::size_t>(u)].emplace_back(static_cast<int>(v), w);
    }
    long long source = 0;
    if (!(in >> source) || source < 1 || source > n) {
        std::fprintf(stderr, "bad source\n");
        std::exit(2);
    }
    input.source = static_cast<int>(source);
    return input;
}

long long solve(const Input& in) {
    const long long inf = -1;
    std::vector<long long> dist(in.adj.size(), inf);
    using Item = std::pair<long long, int>;  // (distance, node)
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[static_cast<std::size_t>(in.source)] = 0;
    heap.emplace(0, in.source);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d != dist[static_cast<std::size_t>(u)]) continue;
        for (const auto& [v, w] : in.adj[static_cast<std::size_t>(u)]) {
            const long long cand = d + w;
            const auto vi = static_cast<std::size_t>(v);
            if (dist[vi] == inf || cand < dist[vi]) {
                dist[vi] = cand;
                heap.emplace(cand, v);
            }
        }
    }
    long long answer = 0;
    for (long long i = 1; i <= in.n; ++i) {
        const long long d = dist[static_cast<std::size_t>(i)];
        if (d == inf) return -1;
        if (d > answer) answer = d;
    }
    return answer;
}

}  // namespace

int main(int argc, char** argv) {
    return runner::run(argc, argv, parse, solve,
                       [](long long v) { std::printf("%lld\n", v); });
}
