// Performs exactly 2*n scalar double-precision operations (one mulsd and one
// addsd per iteration, pinned by inline assembly so the compiler can neither
// fuse nor vectorize them). Loop control is integer-only, so the expected
// counter reading for the scalar-double event is 2*n.
#include <cstdlib>

int main(int argc, char** argv) {
    const long long n = argc > 1 ? std::atoll(argv[1]) : 1000000;
    double acc = 1.0;
    const double step = 1.0000000001;
    for (long long i = 0; i < n; ++i) {
        asm volatile("mulsd %1, %0" : "+x"(acc) : "x"(step));
        asm volatile("addsd %1, %0" : "+x"(acc) : "x"(step));
    }
    // Consume acc without floating-point compares or I/O formatting.
    return acc == 0.0 ? 1 : 0;
}
