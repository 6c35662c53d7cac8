// Integer-only busy loop; the iteration count comes from argv so tests can
// construct ordered workloads.
#include <cstdlib>

int main(int argc, char** argv) {
    const long long n = argc > 1 ? std::atoll(argv[1]) : 10000000;
    volatile unsigned long long acc = 0;
    for (long long i = 0; i < n; ++i) acc = acc + static_cast<unsigned long long>(i);
    return acc == 1 ? 1 : 0;
}
