// Serial reference against the OpenMP kernels. Speedups need more than one core; on a single
// core the two columns should match to within scheduling overhead.

#include <benchmark/benchmark.h>

#include "sgnm/census.hpp"
#include "sgnm/sampling.hpp"
#include "sgnm/statistics.hpp"

namespace {

sgnm::ExecPolicy policy_of(const benchmark::State& state) {
    return state.range(0) ? sgnm::ExecPolicy::parallel : sgnm::ExecPolicy::serial;
}

void census_planar(benchmark::State& state) {
    sgnm::CensusOptions opt;
    opt.policy = policy_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(sgnm::census_count(7, 12, 0, opt));
}
BENCHMARK(census_planar)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void census_torus(benchmark::State& state) {
    sgnm::CensusOptions opt;
    opt.policy = policy_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(sgnm::genus_profile(7, 11, 1, opt));
}
BENCHMARK(census_torus)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void census_histogram(benchmark::State& state) {
    sgnm::CensusOptions opt;
    opt.policy = policy_of(state);
    const auto stat = sgnm::named_statistic("maxDegree", 0);
    for (auto _ : state) benchmark::DoNotOptimize(sgnm::distribution(7, 10, 0, stat, opt));
}
BENCHMARK(census_histogram)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void rejection_chains(benchmark::State& state) {
    sgnm::SamplerConfig c;
    c.method = sgnm::SamplerMethod::rejection;
    c.chains = 4;
    c.policy = policy_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(sgnm::sample(14, 21, 0, 2000, c).graphs.size());
}
BENCHMARK(rejection_chains)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void mcmc_chains(benchmark::State& state) {
    sgnm::SamplerConfig c;
    c.method = sgnm::SamplerMethod::mcmc;
    c.chains = 4;
    c.burn_in = 2000;
    c.policy = policy_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(sgnm::sample(14, 28, 0, 400, c).graphs.size());
}
BENCHMARK(mcmc_chains)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
