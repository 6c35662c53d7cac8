// Reports a fixed peak-allocation figure on the in-band metrics stream.
#include <cstdio>
#include <cstring>
#include <unistd.h>

int main(int argc, char** argv) {
    const char* value = argc > 1 ? argv[1] : "2048";
    char line[64];
    std::snprintf(line, sizeof line, "GREENCAP-MEM-PEAK-KIB: %s\n", value);
    // If fd 3 is not open the write fails; that is the caller's choice.
    ssize_t n = write(3, line, std::strlen(line));
    (void)n;
    return 0;
}
