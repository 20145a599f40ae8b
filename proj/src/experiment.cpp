#include "sgnm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sgnm/census.hpp"
#include "sgnm/errors.hpp"

namespace sgnm {

namespace {

std::string fixed(double x, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

// Share of kPilotDraws uniform m-subsets that lie in S^g(n,m).
double pilot_acceptance(int n, int m, int g, const SamplerConfig& config) {
    Rng rng(config.seed);
    std::vector<int> slots(slot_count(n));
    for (int s = 0; s < slot_count(n); ++s) slots[s] = s;
    int hits = 0;
    std::vector<int> pick;
    for (int i = 0; i < kPilotDraws; ++i) {
        pick.clear();
        std::sample(slots.begin(), slots.end(), std::back_inserter(pick), m, rng);
        std::vector<Edge> es;
        for (int s : pick) es.push_back(slot_edge(s, n));
        hits += within_genus(make_graph(n, es), g, config.genus);
    }
    return static_cast<double>(hits) / kPilotDraws;
}

}  // namespace

EdgeSpec parse_edge_spec(const std::string& text) {
    EdgeSpec e;
    std::string body = text;
    if (body.rfind("ratio:", 0) == 0) {
        e.is_ratio = true;
        body = body.substr(6);
    }
    std::size_t used = 0;
    try {
        e.value = std::stod(body, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != body.size() || !std::isfinite(e.value) || e.value < 0)
        throw PreconditionError("edge spec '" + text + "' is neither ratio:<x> nor a count");
    if (!e.is_ratio && e.value != std::floor(e.value))
        throw PreconditionError("absolute edge count '" + text + "' is not an integer");
    return e;
}

std::string to_string(const EdgeSpec& e) {
    if (!e.is_ratio) return std::to_string(static_cast<long long>(e.value));
    std::string s = fixed(e.value, 6);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    return "ratio:" + s;
}

ResolvedEdges resolve_edges(const EdgeSpec& e, int n, int g) {
    const double raw = e.is_ratio ? std::round(e.value * n) : e.value;
    long cap = slot_count(n);
    if (n >= 3) cap = std::min<long>(cap, 3L * n - 6 + 6L * g);
    ResolvedEdges out;
    out.m = static_cast<int>(std::clamp<double>(raw, 0, static_cast<double>(cap)));
    out.clamped = out.m != raw;
    return out;
}

TrendMethod parse_trend_method(const std::string& s) {
    if (s == "auto") return TrendMethod::automatic;
    if (s == "rejection") return TrendMethod::rejection;
    if (s == "mcmc") return TrendMethod::mcmc;
    throw PreconditionError("unknown method '" + s + "' (auto, rejection, mcmc)");
}

std::vector<TrendRow> run_trend(const TrendSpec& spec, std::vector<std::string>* warnings) {
    std::vector<TrendRow> rows;
    for (int n : spec.ns)
        for (const EdgeSpec& es : spec.edges) {
            const ResolvedEdges re = resolve_edges(es, n, spec.g);
            if (re.clamped && warnings)
                warnings->push_back("n=" + std::to_string(n) + " " + to_string(es) + " clamped to m=" +
                                    std::to_string(re.m));
            TrendRow row;
            row.n = n;
            row.m = re.m;
            row.g = spec.g;
            row.edges = to_string(es);
            row.stat = spec.stat;
            row.seed = spec.sampler.seed;
            const GraphStatistic stat = named_statistic(spec.stat, spec.g, spec.sampler.genus);

            SamplerConfig config = spec.sampler;
            if (spec.method == TrendMethod::automatic)
                config.method = pilot_acceptance(n, re.m, spec.g, config) >= kPilotThreshold ? SamplerMethod::rejection
                                                                                             : SamplerMethod::mcmc;
            else
                config.method = spec.method == TrendMethod::rejection ? SamplerMethod::rejection : SamplerMethod::mcmc;

            const Estimate e = estimate(n, re.m, spec.g, stat, spec.samples, config, spec.exact_when_possible);
            row.estimate = e.mean;
            row.half_width = e.half_width;
            row.exact = e.exact;
            row.samples = e.samples;
            row.acceptance = e.acceptance;
            row.method = e.exact ? "census" : to_string(config.method);
            if (!e.exact && config.method == SamplerMethod::mcmc) {
                row.burn_in = config.burn_in;
                row.thinning = config.thinning;
            }
            rows.push_back(row);
        }
    return rows;
}

std::string trend_csv_header() {
    return "n,m,g,edges,stat,estimate,ciHalfWidth,samples,method,seed,burnIn,thinning,acceptance";
}

std::string trend_csv_row(const TrendRow& r) {
    return std::to_string(r.n) + ',' + std::to_string(r.m) + ',' + std::to_string(r.g) + ',' + r.edges + ',' +
           r.stat + ',' + fixed(r.estimate) + ',' + (r.exact ? std::string("exact") : fixed(r.half_width)) + ',' +
           std::to_string(r.samples) + ',' + r.method + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.burn_in) + ',' + std::to_string(r.thinning) + ',' + fixed(r.acceptance);
}

}  // namespace sgnm
