#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace greencap {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Formula-layer errors.

/// Raised when a PD baseline is zero; dividing by it would hide a measurement fault.
class DegenerateBaseline : public Error {
public:
    DegenerateBaseline(double initial, double optimized)
        : Error("degenerate baseline: initial=" + std::to_string(initial) +
                " optimized=" + std::to_string(optimized)),
          initial(initial), optimized(optimized) {}
    double initial;
    double optimized;
};

/// Raised when the initial record for a GC computation is absent or incorrect.
class BaselineInvalid : public Error {
public:
    using Error::Error;
};

class EmptySampleSet : public Error {
public:
    using Error::Error;
};

// Probe-layer errors.

class ExecError : public Error {
public:
    using Error::Error;
};

class ChildFailed : public Error {
public:
    ChildFailed(int exit_status, std::string stderr_text, const std::string& what)
        : Error(what), exit_status(exit_status), stderr_text(std::move(stderr_text)) {}
    int exit_status;
    std::string stderr_text;
};

class MeasurementTimeout : public Error {
public:
    using Error::Error;
};

class EnergyUnavailable : public Error {
public:
    using Error::Error;
};

class FlopsUnavailable : public Error {
public:
    using Error::Error;
};

class MemoryUnavailable : public Error {
public:
    using Error::Error;
};

class PermissionDenied : public Error {
public:
    using Error::Error;
};

/// A replay fixture lacks the requested (variant, metric, round) entry.
class FixtureMiss : public Error {
public:
    FixtureMiss(std::string variant, std::string metric, std::int64_t round)
        : Error("fixture miss: variant=" + variant + " metric=" + metric +
                " round=" + std::to_string(round)),
          variant(std::move(variant)), metric(std::move(metric)), round(round) {}
    std::string variant;
    std::string metric;
    std::int64_t round;
};

// Corpus-layer errors.

class SizeError : public Error {
public:
    using Error::Error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class ParseFail : public Error {
public:
    using Error::Error;
};

// Harness / report errors.

class ManifestError : public Error {
public:
    using Error::Error;
};

class PathError : public Error {
public:
    using Error::Error;
};

class GridError : public Error {
public:
    using Error::Error;
};

}  // namespace greencap
