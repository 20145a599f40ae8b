#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgnm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid graph construction input (loop, duplicate, out-of-range vertex).
struct ConstructionError : Error {
    using Error::Error;
};

// Input exceeds a configured size cap (pattern size, canonicalization, census).
struct CapabilityError : Error {
    using Error::Error;
};

struct PreconditionError : Error {
    using Error::Error;
};

struct DecodeError : Error {
    DecodeError(const std::string& what, std::size_t offset)
        : Error(what + " at byte " + std::to_string(offset)), offset(offset) {}
    std::size_t offset;
};

// Search-effort budget exhausted. Carries the best bounds known at the time.
struct BudgetExceeded : Error {
    BudgetExceeded(const std::string& what, long long lower, long long upper)
        : Error(what + " (bounds [" + std::to_string(lower) + ", " + std::to_string(upper) + "])"),
          lower(lower), upper(upper) {}
    long long lower;
    long long upper;
};

struct UndefinedProbability : Error {
    using Error::Error;
};

struct SamplerError : Error {
    SamplerError(const std::string& what, double acceptance)
        : Error(what + " (observed acceptance " + std::to_string(acceptance) + ")"),
          acceptance(acceptance) {}
    double acceptance;
};

}  // namespace sgnm
