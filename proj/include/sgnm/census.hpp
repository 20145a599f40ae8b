#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "sgnm/embedding.hpp"
#include "sgnm/graph.hpp"

namespace sgnm {

struct CensusOptions {
    int max_n_planar = 8;  // largest n enumerated with g = 0
    int max_n_genus = 7;   // largest n enumerated with g >= 1
    ExecPolicy policy = ExecPolicy::serial;
    GenusOptions genus;    // budget per membership test; its policy field is ignored
};

// Visits every graph on {1..n} with m edges and genus at most g, in lexicographic order of the
// sorted edge-slot lists. Returns the number visited. The visitor always runs on the calling
// thread; with a parallel policy membership is decided in parallel ahead of the visits.
std::uint64_t enumerate(int n, int m, int g, const std::function<void(const LabeledGraph&)>& visit,
                        const CensusOptions& opt = {});

// |S^g(n,m)| without building a visitor callback.
std::uint64_t census_count(int n, int m, int g, const CensusOptions& opt = {});

// counts[g] = |S^g(n,m)| for g = 0..max_g, from a single pass that classifies each graph by
// its minimum genus.
std::vector<std::uint64_t> genus_profile(int n, int m, int max_g, const CensusOptions& opt = {});

using Probability = boost::rational<std::int64_t>;

// Exact share of S^g(n,m) satisfying `pred`. Throws UndefinedProbability when the set is empty.
// `pred` must be safe to call concurrently under a parallel policy.
Probability probability(int n, int m, int g, const std::function<bool(const LabeledGraph&)>& pred,
                        const CensusOptions& opt = {});

using Histogram = std::map<long long, std::uint64_t>;

// Exact frequency of each value of `stat` over S^g(n,m).
Histogram distribution(int n, int m, int g, const std::function<long long(const LabeledGraph&)>& stat,
                       const CensusOptions& opt = {});

// Exact mean of `stat` over S^g(n,m), as a fraction.
Probability exact_mean(int n, int m, int g, const std::function<long long(const LabeledGraph&)>& stat,
                       const CensusOptions& opt = {});

inline constexpr double kGammaReference = 27.23;

struct GammaEstimate {
    double q = 0;
    int n = 0;
    int m = 0;
    int g = 0;
    std::uint64_t count = 0;
    double value = 0;  // (count / n!)^(1/n)
    bool zero = false;
    double reference = kGammaReference;
};

// m = floor(q n).
GammaEstimate gamma_estimate(double q, int g, int n, const CensusOptions& opt = {});
// Estimates for g = 0..max_g sharing one enumeration.
std::vector<GammaEstimate> gamma_profile(double q, int max_g, int n, const CensusOptions& opt = {});

// ---------------------------------------------------------------- tables

struct CensusEntry {
    std::uint64_t count = 0;
    std::map<std::string, Histogram> histograms;
};

struct CensusTable {
    using Key = std::tuple<int, int, int>;  // n, m, g
    std::map<Key, CensusEntry> entries;
    std::string version;
    std::uint64_t budget = 0;
};

// Counts (and histograms of the named statistics) for every n in `ns`, g in `gs`, 0 <= m <= C(n,2).
CensusTable build_census(const std::vector<int>& ns, const std::vector<int>& gs,
                         const std::vector<std::string>& stats = {}, const CensusOptions& opt = {});

// "n,m,g,count" with one row per entry in key order.
void write_census_csv(const CensusTable& t, std::ostream& out);
CensusTable read_census_csv(std::istream& in);
// {"version", "budget", "histograms": [{"n","m","g","stat","bins":{value: frequency}}]}
void write_census_json(const CensusTable& t, std::ostream& out);

// One message per (n,m,g) present in both tables whose counts differ, and per key missing from `fresh`.
std::vector<std::string> census_mismatches(const CensusTable& fresh, const CensusTable& persisted);

}  // namespace sgnm
