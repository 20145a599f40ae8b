#include <doctest.h>

#include <bit>
#include <cmath>
#include <map>
#include <sstream>

#include "oracles.hpp"
#include "sgnm/census.hpp"
#include "sgnm/errors.hpp"
#include "sgnm/sampling.hpp"

using namespace sgnm;

namespace {

SamplerConfig rejection_config(std::uint64_t seed) {
    SamplerConfig c;
    c.method = SamplerMethod::rejection;
    c.seed = seed;
    return c;
}

SamplerConfig mcmc_config(std::uint64_t seed, std::uint64_t burn_in = 1000, std::uint64_t thinning = 5) {
    SamplerConfig c;
    c.method = SamplerMethod::mcmc;
    c.seed = seed;
    c.burn_in = burn_in;
    c.thinning = thinning;
    return c;
}

int symmetric_difference(const LabeledGraph& a, const LabeledGraph& b) {
    int d = 0;
    for (Vertex v = 1; v <= a.n(); ++v) d += std::popcount(a.neighbor_mask(v) ^ b.neighbor_mask(v));
    return d / 2;
}

// Total-variation distance between the empirical law of `graphs` and the uniform law on `support`.
double tv_to_uniform(const std::vector<LabeledGraph>& graphs, std::size_t support) {
    std::map<std::string, std::size_t> freq;
    for (const auto& g : graphs) ++freq[to_graph6(g)];
    const double u = 1.0 / static_cast<double>(support), k = static_cast<double>(graphs.size());
    double tv = 0;
    for (const auto& [code, f] : freq) tv += std::abs(f / k - u);
    tv += u * static_cast<double>(support - freq.size());
    return tv / 2;
}

}  // namespace

TEST_CASE("rejection_sample") {
    const auto all = rejection_sample(4, 3, 0, 200, rejection_config(3));
    CHECK(all.graphs.size() == 200);
    CHECK(all.acceptance_rate() == 1.0);
    CHECK(all.exact_uniform);

    auto capped = rejection_config(4);
    capped.max_rejections = 50;
    try {
        rejection_sample(5, 10, 0, 1, capped);
        FAIL("K5 is never planar");
    } catch (const SamplerError& e) {
        CHECK(e.acceptance == 0.0);
    }

    const auto k5 = rejection_sample(5, 10, 1, 20, rejection_config(5));
    CHECK(k5.acceptance_rate() == 1.0);
    for (const auto& g : k5.graphs) CHECK(g == complete_graph(5));

    CHECK_THROWS_AS(rejection_sample(4, 7, 0, 1, rejection_config(1)), PreconditionError);
}

TEST_CASE("rejection samples are members and cover the space uniformly") {
    const auto b = rejection_sample(5, 6, 0, 20000, rejection_config(11));
    for (const auto& g : b.graphs) {
        REQUIRE(g.m() == 6);
        REQUIRE(oracle::kuratowski_planar(g));
    }
    CHECK(tv_to_uniform(b.graphs, census_count(5, 6, 0)) < 0.05);

    // (6,12,0) is a strict subset of the 6-vertex graphs with 12 edges
    const auto planar = rejection_sample(6, 12, 0, 300, rejection_config(12));
    CHECK(planar.acceptance_rate() < 1.0);
    for (const auto& g : planar.graphs) CHECK(oracle::kuratowski_planar(g));
}

TEST_CASE("mcmc_step") {
    const auto tri = make_graph(4, {{1, 2}, {2, 3}, {1, 3}});
    const auto moved = swap_edge(tri, {1, 2}, {1, 4});
    CHECK(moved == make_graph(4, {{2, 3}, {1, 3}, {1, 4}}));
    CHECK(within_genus(moved, 0));
    CHECK_THROWS_AS(swap_edge(tri, {1, 4}, {2, 4}), PreconditionError);
    CHECK_THROWS_AS(swap_edge(tri, {1, 2}, {1, 3}), PreconditionError);

    // K5 has no non-edge, so every step is a self-loop
    Rng rng(1);
    auto k5 = complete_graph(5);
    for (int i = 0; i < 20; ++i) CHECK_FALSE(mcmc_step(k5, 1, rng));
    CHECK(k5 == complete_graph(5));

    // accepted moves are single swaps into the space; rejected ones leave the state untouched
    std::mt19937_64 pick(2);
    int accepted = 0, rejected = 0;
    for (int trial = 0; trial < 400; ++trial) {
        auto state = oracle::random_connected_graph(pick, 6, 0.55);
        if (!oracle::kuratowski_planar(state)) continue;
        const auto before = state;
        if (mcmc_step(state, 0, rng)) {
            ++accepted;
            CHECK(symmetric_difference(before, state) == 2);
            CHECK(state.m() == before.m());
            CHECK(oracle::kuratowski_planar(state));
        } else {
            ++rejected;
            CHECK(state == before);
        }
    }
    CHECK(accepted > 0);
    CHECK(rejected > 0);
}

TEST_CASE("swap proposals are symmetric") {
    std::vector<LabeledGraph> states;
    for (std::uint64_t mask = 0; mask < 64; ++mask)
        if (std::popcount(mask) == 3) states.push_back(oracle::graph_from_mask(4, mask));
    int adjacent = 0;
    for (const auto& x : states)
        for (const auto& y : states) {
            if (x == y) continue;
            CHECK(proposal_probability(x, y) == proposal_probability(y, x));
            if (proposal_probability(x, y) > 0) {
                ++adjacent;
                CHECK(proposal_probability(x, y) == doctest::Approx(1.0 / 9.0));
            }
        }
    // each state has 3 x 3 neighbours
    CHECK(adjacent == 20 * 9);
}

TEST_CASE("mcmc_sample") {
    const auto b = mcmc_sample(4, 3, 0, 20000, mcmc_config(7));
    CHECK_FALSE(b.exact_uniform);
    CHECK(tv_to_uniform(b.graphs, 20) < 0.03);

    const auto step1 = mcmc_sample(6, 9, 0, 300, mcmc_config(8, 50, 1));
    for (std::size_t i = 1; i < step1.graphs.size(); ++i) CHECK(symmetric_difference(step1.graphs[i - 1], step1.graphs[i]) <= 2);
    for (const auto& g : step1.graphs) {
        CHECK(g.m() == 9);
        CHECK(oracle::kuratowski_planar(g));
    }

    CHECK_THROWS_AS(mcmc_sample(5, 10, 0, 1, mcmc_config(1)), SamplerError);
    CHECK_THROWS_AS(mcmc_sample(4, 3, 0, 1, mcmc_config(1, 0, 1)), PreconditionError);
}

TEST_CASE("greedy start") {
    CHECK(greedy_start(5, 10, 1, mcmc_config(1)) == complete_graph(5));
    // the first twelve slots contain K3,3 on {1,2,3} and {4,5,6}, so greedy has to skip one
    const auto s = greedy_start(6, 12, 0, mcmc_config(1));
    CHECK(s.m() == 12);
    CHECK(oracle::kuratowski_planar(s));
}

TEST_CASE("seeded runs are reproducible") {
    for (auto method : {SamplerMethod::rejection, SamplerMethod::mcmc}) {
        auto c = method == SamplerMethod::rejection ? rejection_config(42) : mcmc_config(42);
        c.chains = 3;
        const auto a = sample(7, 10, 0, 40, c);
        const auto b = sample(7, 10, 0, 40, c);
        CHECK(a.graphs == b.graphs);
        c.policy = ExecPolicy::parallel;
        const auto p = sample(7, 10, 0, 40, c);
        CHECK(p.graphs == a.graphs);
        CHECK(p.proposals == a.proposals);
        c.seed = 43;
        CHECK(sample(7, 10, 0, 40, c).graphs != a.graphs);
    }
}

TEST_CASE("estimate agrees with census expectations") {
    const auto pendant = named_statistic("pendantEdges", 0);
    const auto exact = estimate(4, 3, 0, pendant, 0, rejection_config(1), true);
    CHECK(exact.exact);
    CHECK(exact.half_width == 0.0);
    CHECK(exact.mean == doctest::Approx(boost::rational_cast<double>(exact_mean(4, 3, 0, pendant))));

    const auto mc = estimate(4, 3, 0, pendant, 4000, rejection_config(9));
    CHECK_FALSE(mc.exact);
    CHECK(std::abs(mc.mean - exact.mean) <= mc.half_width);

    const auto maxdeg = named_statistic("maxDegree", 0);
    const double want = boost::rational_cast<double>(exact_mean(5, 6, 0, maxdeg));
    const auto md = estimate(5, 6, 0, maxdeg, 4000, mcmc_config(10));
    CHECK(std::abs(md.mean - want) <= md.half_width);

    const auto k3 = named_statistic("copyK3", 0);
    const double pk3 = boost::rational_cast<double>(exact_mean(6, 9, 0, k3));
    const auto e3 = estimate(6, 9, 0, k3, 4000, rejection_config(12));
    CHECK(std::abs(e3.mean - pk3) <= e3.half_width);
}

TEST_CASE("batch export") {
    const auto b = rejection_sample(4, 3, 0, 3, rejection_config(5));
    std::stringstream g6, json;
    write_batch_graph6(b, g6);
    write_batch_json(b, json);
    std::string line;
    int lines = 0;
    while (std::getline(g6, line)) {
        CHECK(from_graph6(line).m() == 3);
        ++lines;
    }
    CHECK(lines == 3);
    CHECK(json.str().find(R"("method": "rejection")") != std::string::npos);
    CHECK(json.str().find(R"("acceptanceRate": 1.0)") != std::string::npos);
    CHECK(parse_sampler_method("mcmc") == SamplerMethod::mcmc);
    CHECK_THROWS_AS(parse_sampler_method("gibbs"), PreconditionError);
}
