#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "sgnm/embedding.hpp"
#include "sgnm/graph.hpp"
#include "sgnm/statistics.hpp"

namespace sgnm {

using Rng = std::mt19937_64;

enum class SamplerMethod { rejection, mcmc };

struct SamplerConfig {
    SamplerMethod method = SamplerMethod::rejection;
    std::uint64_t seed = 1;
    std::uint64_t burn_in = 10'000;
    std::uint64_t thinning = 10;
    std::uint64_t max_rejections = 1'000'000;  // consecutive failures allowed per rejection draw
    int chains = 1;                            // chain c is seeded with seed ^ c
    ExecPolicy policy = ExecPolicy::serial;    // chains run concurrently when parallel
    GenusOptions genus;
};

struct SampleBatch {
    int n = 0;
    int m = 0;
    int g = 0;
    std::vector<LabeledGraph> graphs;
    SamplerConfig config;
    std::uint64_t proposals = 0;  // draws (rejection) or swap proposals (mcmc)
    std::uint64_t accepted = 0;
    // The swap chain is not known to be irreducible on S^g(n,m); mcmc batches are heuristic.
    bool exact_uniform = false;

    double acceptance_rate() const { return proposals == 0 ? 1.0 : static_cast<double>(accepted) / proposals; }
};

// Membership in S^g(n,m) for a graph that already has m edges: genus at most g.
bool within_genus(const LabeledGraph& g, int bound, const GenusOptions& opt = {});

// A uniform m-subset of the C(n,2) slots per draw, kept when its genus is at most g.
// Raises SamplerError once max_rejections consecutive draws fail.
SampleBatch rejection_sample(int n, int m, int g, std::size_t count, const SamplerConfig& config);

// (state - remove) + add. Requires remove to be an edge and add a non-edge of state.
LabeledGraph swap_edge(const LabeledGraph& state, Edge remove, Edge add);

// Probability that one step proposes y from x: 1/(m (C(n,2)-m)) when they differ by one swap.
double proposal_probability(const LabeledGraph& x, const LabeledGraph& y);

// One Metropolis step: a uniform edge and a uniform non-edge are swapped when the result stays
// within genus g; otherwise the state is left untouched. Returns whether the move was taken.
bool mcmc_step(LabeledGraph& state, int g, Rng& rng, const GenusOptions& opt = {});

// Lexicographic greedy member of S^g(n,m), falling back to a rejection draw. Throws SamplerError
// when neither produces one.
LabeledGraph greedy_start(int n, int m, int g, const SamplerConfig& config);

SampleBatch mcmc_sample(int n, int m, int g, std::size_t count, const SamplerConfig& config);

// Dispatches on config.method.
SampleBatch sample(int n, int m, int g, std::size_t count, const SamplerConfig& config);

struct Estimate {
    double mean = 0;
    double half_width = 0;  // 95% normal-approximation interval; zero when exact
    std::size_t samples = 0;
    bool exact = false;
    double acceptance = 1;
};

// Monte Carlo mean of `stat`. With `exact_when_possible` and (n, g) inside the default census
// caps, the exact census mean is returned instead.
Estimate estimate(int n, int m, int g, const GraphStatistic& stat, std::size_t samples, const SamplerConfig& config,
                  bool exact_when_possible = false);

// graph6 lines, and a JSON object carrying the configuration and diagnostics.
void write_batch_graph6(const SampleBatch& b, std::ostream& out);
void write_batch_json(const SampleBatch& b, std::ostream& out);

std::string to_string(SamplerMethod m);
SamplerMethod parse_sampler_method(const std::string& s);

}  // namespace sgnm
