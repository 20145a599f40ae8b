#include "sgnm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>

#include "json.hpp"
#include "sgnm/census.hpp"
#include "sgnm/errors.hpp"
#include "sgnm/version.hpp"

namespace sgnm {

namespace {

void check_shape(int n, int m, int g) {
    if (n < 1 || n > kMaxVertices) throw PreconditionError("sampler needs 1 <= n <= 64");
    if (m < 0 || m > slot_count(n)) throw PreconditionError("sampler needs 0 <= m <= C(n,2)");
    if (g < 0) throw PreconditionError("sampler needs g >= 0");
}

LabeledGraph from_slots(int n, const std::vector<int>& slots) {
    std::vector<Edge> es;
    es.reserve(slots.size());
    for (int s : slots) es.push_back(slot_edge(s, n));
    return make_graph(n, es);
}

// Per-chain share of `count`, earlier chains taking the remainder.
std::size_t share(std::size_t count, int chains, int c) {
    return count / chains + (static_cast<std::size_t>(c) < count % chains ? 1 : 0);
}

struct ChainOutput {
    std::vector<LabeledGraph> graphs;
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;
};

// Runs `chain(c)` for every chain and concatenates the outputs in chain order.
template <class Chain>
SampleBatch run_chains(int n, int m, int g, const SamplerConfig& config, Chain chain) {
    if (config.chains < 1) throw PreconditionError("at least one chain is required");
    std::vector<ChainOutput> outs(config.chains);
    std::exception_ptr failure;
    std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic) if (config.policy == ExecPolicy::parallel)
    for (int c = 0; c < config.chains; ++c) {
        try {
            outs[c] = chain(c);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    SampleBatch b;
    b.n = n;
    b.m = m;
    b.g = g;
    b.config = config;
    for (auto& o : outs) {
        b.proposals += o.proposals;
        b.accepted += o.accepted;
        for (auto& x : o.graphs) b.graphs.push_back(std::move(x));
    }
    return b;
}

// Draws uniform m-subsets until one lies in S^g(n,m) or the cap is reached.
LabeledGraph draw_member(int n, int m, int g, const SamplerConfig& config, Rng& rng, ChainOutput& out) {
    std::vector<int> slots(slot_count(n));
    for (int s = 0; s < slot_count(n); ++s) slots[s] = s;
    std::vector<int> pick;
    pick.reserve(m);
    for (std::uint64_t tries = 0; tries < config.max_rejections; ++tries) {
        pick.clear();
        std::sample(slots.begin(), slots.end(), std::back_inserter(pick), m, rng);
        const LabeledGraph candidate = from_slots(n, pick);
        ++out.proposals;
        if (within_genus(candidate, g, config.genus)) {
            ++out.accepted;
            return candidate;
        }
    }
    throw SamplerError("rejection cap of " + std::to_string(config.max_rejections) + " draws reached",
                       out.proposals == 0 ? 0.0 : static_cast<double>(out.accepted) / out.proposals);
}

}  // namespace

bool within_genus(const LabeledGraph& g, int bound, const GenusOptions& opt) {
    // nothing with at most eight edges contains a subdivision of K5 or K3,3
    if (g.m() <= 8) return true;
    return is_genus_at_most(g, bound, opt);
}

SampleBatch rejection_sample(int n, int m, int g, std::size_t count, const SamplerConfig& config) {
    check_shape(n, m, g);
    if (config.max_rejections < 1) throw PreconditionError("max_rejections must be at least 1");
    SampleBatch b = run_chains(n, m, g, config, [&](int c) {
        Rng rng(config.seed ^ static_cast<std::uint64_t>(c));
        ChainOutput out;
        const std::size_t want = share(count, config.chains, c);
        for (std::size_t i = 0; i < want; ++i) out.graphs.push_back(draw_member(n, m, g, config, rng, out));
        return out;
    });
    b.exact_uniform = true;
    return b;
}

LabeledGraph swap_edge(const LabeledGraph& state, Edge remove, Edge add) {
    if (!state.has_edge(remove.u, remove.v)) throw PreconditionError("swap removes a missing edge " + to_string(remove));
    if (add.u == add.v || state.has_edge(add.u, add.v))
        throw PreconditionError("swap adds an existing edge " + to_string(add));
    return state.without_edge(remove.u, remove.v).with_edge(add.u, add.v);
}

double proposal_probability(const LabeledGraph& x, const LabeledGraph& y) {
    if (x.n() != y.n() || x.m() != y.m()) return 0.0;
    int only_x = 0, only_y = 0;
    for (int s = 0; s < slot_count(x.n()); ++s) {
        const Edge e = slot_edge(s, x.n());
        const bool in_x = x.has_edge(e.u, e.v), in_y = y.has_edge(e.u, e.v);
        only_x += in_x && !in_y;
        only_y += in_y && !in_x;
    }
    if (only_x != 1 || only_y != 1) return 0.0;
    const double m = static_cast<double>(x.m());
    return 1.0 / (m * (slot_count(x.n()) - m));
}

bool mcmc_step(LabeledGraph& state, int g, Rng& rng, const GenusOptions& opt) {
    const int n = state.n();
    const std::size_t m = state.m();
    const std::size_t holes = slot_count(n) - m;
    if (m == 0 || holes == 0) return false;
    const Edge remove = state.edges()[std::uniform_int_distribution<std::size_t>(0, m - 1)(rng)];
    std::size_t k = std::uniform_int_distribution<std::size_t>(0, holes - 1)(rng);
    Edge add;
    for (int s = 0;; ++s) {
        const Edge e = slot_edge(s, n);
        if (state.has_edge(e.u, e.v)) continue;
        if (k-- == 0) {
            add = e;
            break;
        }
    }
    LabeledGraph next = swap_edge(state, remove, add);
    if (!within_genus(next, g, opt)) return false;
    state = std::move(next);
    return true;
}

LabeledGraph greedy_start(int n, int m, int g, const SamplerConfig& config) {
    check_shape(n, m, g);
    LabeledGraph state = empty_graph(n);
    for (int s = 0; s < slot_count(n) && static_cast<int>(state.m()) < m; ++s) {
        const Edge e = slot_edge(s, n);
        LabeledGraph next = state.with_edge(e.u, e.v);
        if (within_genus(next, g, config.genus)) state = std::move(next);
    }
    if (static_cast<int>(state.m()) == m) return state;
    Rng rng(config.seed);
    ChainOutput scratch;
    return draw_member(n, m, g, config, rng, scratch);
}

SampleBatch mcmc_sample(int n, int m, int g, std::size_t count, const SamplerConfig& config) {
    check_shape(n, m, g);
    if (config.burn_in < 1 || config.thinning < 1) throw PreconditionError("burn-in and thinning must be at least 1");
    const LabeledGraph start = greedy_start(n, m, g, config);
    SampleBatch b = run_chains(n, m, g, config, [&](int c) {
        Rng rng(config.seed ^ static_cast<std::uint64_t>(c));
        ChainOutput out;
        LabeledGraph state = start;
        auto step = [&] {
            ++out.proposals;
            out.accepted += mcmc_step(state, g, rng, config.genus);
        };
        for (std::uint64_t i = 0; i < config.burn_in; ++i) step();
        const std::size_t want = share(count, config.chains, c);
        for (std::size_t i = 0; i < want; ++i) {
            if (i > 0)
                for (std::uint64_t t = 0; t < config.thinning; ++t) step();
            out.graphs.push_back(state);
        }
        return out;
    });
    b.exact_uniform = false;
    return b;
}

SampleBatch sample(int n, int m, int g, std::size_t count, const SamplerConfig& config) {
    return config.method == SamplerMethod::rejection ? rejection_sample(n, m, g, count, config)
                                                     : mcmc_sample(n, m, g, count, config);
}

Estimate estimate(int n, int m, int g, const GraphStatistic& stat, std::size_t samples, const SamplerConfig& config,
                  bool exact_when_possible) {
    const CensusOptions caps;
    if (exact_when_possible && n <= (g == 0 ? caps.max_n_planar : caps.max_n_genus)) {
        CensusOptions opt;
        opt.policy = config.policy;
        opt.genus = config.genus;
        const Probability mean = exact_mean(n, m, g, stat, opt);
        Estimate e;
        e.mean = boost::rational_cast<double>(mean);
        e.exact = true;
        e.samples = census_count(n, m, g, opt);
        return e;
    }
    if (samples < 2) throw PreconditionError("an interval needs at least two samples");
    const SampleBatch b = sample(n, m, g, samples, config);
    double sum = 0, sq = 0;
    for (const auto& x : b.graphs) {
        const double v = static_cast<double>(stat(x));
        sum += v;
        sq += v * v;
    }
    const double k = static_cast<double>(b.graphs.size());
    Estimate e;
    e.mean = sum / k;
    const double var = std::max(0.0, (sq - k * e.mean * e.mean) / (k - 1));
    e.half_width = 1.959963984540054 * std::sqrt(var / k);
    e.samples = b.graphs.size();
    e.acceptance = b.acceptance_rate();
    return e;
}

void write_batch_graph6(const SampleBatch& b, std::ostream& out) {
    for (const auto& x : b.graphs) out << to_graph6(x) << '\n';
}

void write_batch_json(const SampleBatch& b, std::ostream& out) {
    nlohmann::ordered_json doc;
    doc["version"] = std::string(kVersion);
    doc["n"] = b.n;
    doc["m"] = b.m;
    doc["g"] = b.g;
    doc["method"] = to_string(b.config.method);
    doc["seed"] = b.config.seed;
    doc["chains"] = b.config.chains;
    if (b.config.method == SamplerMethod::mcmc) {
        doc["burnIn"] = b.config.burn_in;
        doc["thinning"] = b.config.thinning;
    } else {
        doc["maxRejections"] = b.config.max_rejections;
    }
    doc["budget"] = b.config.genus.budget;
    doc["samples"] = b.graphs.size();
    doc["proposals"] = b.proposals;
    doc["accepted"] = b.accepted;
    doc["acceptanceRate"] = b.acceptance_rate();
    doc["exactUniform"] = b.exact_uniform;
    out << doc.dump(1) << '\n';
}

std::string to_string(SamplerMethod m) { return m == SamplerMethod::rejection ? "rejection" : "mcmc"; }

SamplerMethod parse_sampler_method(const std::string& s) {
    if (s == "rejection") return SamplerMethod::rejection;
    if (s == "mcmc") return SamplerMethod::mcmc;
    throw PreconditionError("unknown sampler method '" + s + "'");
}

}  // namespace sgnm
