#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgnm/sampling.hpp"

namespace sgnm {

// "ratio:1.5" (m = round(1.5 n)) or an absolute edge count such as "12".
struct EdgeSpec {
    bool is_ratio = false;
    double value = 0;
};

EdgeSpec parse_edge_spec(const std::string& text);
std::string to_string(const EdgeSpec& e);

struct ResolvedEdges {
    int m = 0;
    bool clamped = false;
};

// Ratios round to the nearest integer; the result is clamped into [0, min(C(n,2), 3n-6+6g)].
ResolvedEdges resolve_edges(const EdgeSpec& e, int n, int g);

enum class TrendMethod { automatic, rejection, mcmc };

TrendMethod parse_trend_method(const std::string& s);

struct TrendSpec {
    std::string stat;
    std::vector<int> ns;
    std::vector<EdgeSpec> edges;
    int g = 0;
    std::size_t samples = 2000;
    TrendMethod method = TrendMethod::automatic;
    SamplerConfig sampler;  // seed, burn-in, thinning, chains, budget; method is chosen per point
    bool exact_when_possible = false;
};

// One grid point. Exact rows come from the census and carry a zero-width interval.
struct TrendRow {
    int n = 0;
    int m = 0;
    int g = 0;
    std::string edges;  // the EdgeSpec as given
    std::string stat;
    double estimate = 0;
    double half_width = 0;
    bool exact = false;
    std::size_t samples = 0;
    std::string method;  // rejection, mcmc or census
    std::uint64_t seed = 0;
    std::uint64_t burn_in = 0;
    std::uint64_t thinning = 0;
    double acceptance = 1;
};

// The automatic method uses rejection sampling when a seeded pilot of this many draws accepts at
// least kPilotThreshold of them, and the swap chain otherwise.
inline constexpr int kPilotDraws = 400;
inline constexpr double kPilotThreshold = 0.02;

// Rows in grid order: every edge spec for the first n, then the next n. Clamped edge counts are
// reported through `warnings`.
std::vector<TrendRow> run_trend(const TrendSpec& spec, std::vector<std::string>* warnings = nullptr);

std::string trend_csv_header();
std::string trend_csv_row(const TrendRow& r);

}  // namespace sgnm
