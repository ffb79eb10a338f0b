#pragma once

#include <stdexcept>
#include <string>

namespace selcot {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A candidate item violated a QAItem invariant.
struct InvalidItem : Error {
    explicit InvalidItem(std::string why)
        : Error("invalid item: " + why), reason(std::move(why)) {}
    std::string reason;
};

// A dataset source file could not be understood at all (as opposed to a
// single bad record, which is counted in the AdapterReport instead).
struct SourceMalformed : Error {
    SourceMalformed(std::string file, long long line_no, const std::string& why)
        : Error(file + ":" + std::to_string(line_no) + ": " + why),
          file(std::move(file)), line(line_no) {}
    std::string file;
    long long line = 0;
};

struct ConfigError : Error {
    using Error::Error;
};

struct TemplateError : Error {
    using Error::Error;
};

// The mock fixture file itself is unusable (a missing key is not a
// FixtureError; it surfaces as a per-call BackendError).
struct FixtureError : Error {
    using Error::Error;
};

struct BackendError : Error {
    enum class Kind { Timeout, Http, Protocol };
    BackendError(Kind k, int http_status, int attempt_count, const std::string& why)
        : Error(why), kind(k), status(http_status), attempts(attempt_count) {}
    Kind kind;
    int status = 0;    // meaningful for Kind::Http
    int attempts = 0;  // total HTTP attempts made before giving up
};

struct EmptyRun : Error {
    EmptyRun() : Error("empty run: no results to aggregate") {}
};

struct MixedStrategies : Error {
    MixedStrategies() : Error("results mix more than one prompt strategy") {}
};

struct BaselineZero : Error {
    BaselineZero() : Error("relative drop undefined: baseline is not positive") {}
};

struct PairMismatch : Error {
    explicit PairMismatch(const std::string& why) : Error("pair mismatch: " + why) {}
};

struct Underdetermined : Error {
    Underdetermined() : Error("quadratic fit needs at least 3 distinct x values") {}
};

struct SingularSystem : Error {
    SingularSystem() : Error("normal equations are numerically rank-deficient") {}
};

}  // namespace selcot
