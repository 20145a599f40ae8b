#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgnm/census.hpp"
#include "sgnm/errors.hpp"
#include "sgnm/experiment.hpp"
#include "sgnm/sampling.hpp"
#include "sgnm/statistics.hpp"
#include "sgnm/version.hpp"

namespace sgnm::cli {

namespace {

struct UsageError : Error {
    using Error::Error;
};

// Options shared by several commands; each command registers the ones it understands.
struct Options {
    std::vector<int> ns;
    std::vector<int> gs{0};
    int g = 0;
    std::vector<std::string> ms;
    std::vector<double> ratios;
    std::vector<double> qs{1.5};
    std::vector<std::string> stats;
    std::string stat;
    std::size_t samples = 2000;
    std::uint64_t seed = 1;
    std::uint64_t burn_in = 10'000;
    std::uint64_t thin = 10;
    std::uint64_t max_rejections = 1'000'000;
    int chains = 1;
    std::string method = "auto";
    std::string out;
    std::string in = "-";
    std::string verify_against;
    std::vector<std::string> patterns;
    std::uint64_t budget = kDefaultBudget;
    int max_n = -1;
    int max_g = 1;
    bool exact = false;
    bool json = false;
};

std::uint64_t effective_budget(const Options& o) {
    if (const char* env = std::getenv("SGNM_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v == 0) throw UsageError("SGNM_BUDGET must be a positive integer");
        return v;
    }
    return o.budget;
}

CensusOptions census_options(const Options& o) {
    CensusOptions c;
    c.policy = ExecPolicy::parallel;
    c.genus.budget = effective_budget(o);
    if (o.max_n >= 0) {
        c.max_n_planar = std::max(c.max_n_planar, o.max_n);
        c.max_n_genus = std::max(c.max_n_genus, o.max_n);
    }
    return c;
}

SamplerConfig sampler_config(const Options& o) {
    SamplerConfig c;
    c.seed = o.seed;
    c.burn_in = o.burn_in;
    c.thinning = o.thin;
    c.chains = o.chains;
    c.max_rejections = o.max_rejections;
    c.policy = ExecPolicy::parallel;
    c.genus.budget = effective_budget(o);
    return c;
}

// Writes through `fill` to `path`, or to `fallback` when the path is empty.
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& fill) {
    if (path.empty()) {
        fill(fallback);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    fill(f);
}

std::vector<LabeledGraph> read_graph6(const std::string& path, std::istream& fallback) {
    std::ifstream file;
    std::istream* in = &fallback;
    if (path != "-") {
        file.open(path);
        if (!file) throw UsageError("cannot open " + path);
        in = &file;
    }
    std::vector<LabeledGraph> out;
    std::string line;
    while (std::getline(*in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) out.push_back(from_graph6(line));
    }
    return out;
}

// ---------------------------------------------------------------- commands

int cmd_census(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.ns.empty()) throw UsageError("census needs --n");
    const CensusOptions opt = census_options(o);
    CensusTable table;
    table.version = std::string(kVersion);
    table.budget = opt.genus.budget;
    auto flush = [&] {
        emit(o.out.empty() ? "" : o.out + ".csv", out, [&](std::ostream& f) { write_census_csv(table, f); });
        if (!o.out.empty()) emit(o.out + ".json", out, [&](std::ostream& f) { write_census_json(table, f); });
    };
    try {
        for (int n : o.ns)
            for (int g : o.gs) {
                std::vector<int> ms;
                if (o.ms.empty())
                    for (int m = 0; m <= slot_count(n); ++m) ms.push_back(m);
                else
                    for (const auto& text : o.ms) ms.push_back(resolve_edges(parse_edge_spec(text), n, g).m);
                for (int m : ms) {
                    CensusEntry e;
                    e.count = census_count(n, m, g, opt);
                    for (const auto& s : o.stats)
                        e.histograms[s] = distribution(n, m, g, named_statistic(s, g, opt.genus), opt);
                    table.entries[{n, m, g}] = std::move(e);
                }
            }
    } catch (const Error& e) {
        if (std::string(e.what()).find("budget exhausted") != std::string::npos) flush();  // partial artifact
        throw;
    }
    flush();
    if (!o.verify_against.empty()) {
        std::ifstream f(o.verify_against);
        if (!f) throw UsageError("cannot open " + o.verify_against);
        const auto diffs = census_mismatches(table, read_census_csv(f));
        for (const auto& d : diffs) err << "mismatch " << d << '\n';
        if (!diffs.empty()) return kFailure;
    }
    return kOk;
}

int cmd_sample(const Options& o, std::ostream& out, std::ostream&) {
    if (o.ns.size() != 1 || o.ms.size() != 1) throw UsageError("sample needs exactly one --n and one --m");
    const int n = o.ns[0];
    const EdgeSpec es = parse_edge_spec(o.ms[0]);
    const ResolvedEdges re = resolve_edges(es, n, o.g);
    if (re.clamped && !es.is_ratio) throw UsageError("--m " + o.ms[0] + " exceeds the edge bound for n and g");
    SamplerConfig c = sampler_config(o);
    c.method = parse_sampler_method(o.method == "auto" ? "rejection" : o.method);
    const SampleBatch b = sample(n, re.m, o.g, o.samples, c);
    emit(o.out.empty() ? "" : o.out + ".g6", out, [&](std::ostream& f) { write_batch_graph6(b, f); });
    if (!o.out.empty()) emit(o.out + ".json", out, [&](std::ostream& f) { write_batch_json(b, f); });
    return kOk;
}

int cmd_stats(const Options& o, std::ostream& out, std::ostream&) {
    std::vector<LabeledGraph> patterns;
    for (const auto& p : o.patterns) patterns.push_back(from_graph6(p));
    GenusOptions genus;
    genus.budget = effective_budget(o);
    const auto graphs = read_graph6(o.in, std::cin);
    emit(o.out, out, [&](std::ostream& f) {
        bool header = false;
        for (const auto& g : graphs) {
            const StatReport r = stat_report(g, o.g, patterns, genus);
            if (o.json) {
                f << stat_json(r) << '\n';
                continue;
            }
            if (!header) f << stat_csv_header(r) << '\n';
            header = true;
            f << stat_csv_row(r) << '\n';
        }
    });
    return kOk;
}

int cmd_trend(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.ns.empty() || o.stat.empty()) throw UsageError("trend needs --stat and --n");
    if (o.ratios.empty() == o.ms.empty()) throw UsageError("trend needs exactly one of --m-ratio and --m");
    const int n_cap = o.max_n >= 0 ? o.max_n : 10;
    for (int n : o.ns)
        if (o.g >= 1 && n > n_cap)
            throw UsageError("trends with g >= 1 are limited to n <= " + std::to_string(n_cap) + " (raise with --max-n)");
    named_statistic(o.stat, o.g);  // validates the name before any sampling

    TrendSpec spec;
    spec.stat = o.stat;
    spec.g = o.g;
    spec.samples = o.samples;
    spec.method = parse_trend_method(o.method);
    spec.sampler = sampler_config(o);
    spec.exact_when_possible = o.exact;
    if (!o.ratios.empty())
        for (double r : o.ratios) spec.edges.push_back({true, r});
    else
        for (const auto& text : o.ms) spec.edges.push_back(parse_edge_spec(text));

    std::vector<TrendRow> rows;
    auto flush = [&] {
        emit(o.out, out, [&](std::ostream& f) {
            f << trend_csv_header() << '\n';
            for (const auto& r : rows) f << trend_csv_row(r) << '\n';
        });
    };
    try {
        for (int n : o.ns) {
            TrendSpec point = spec;
            point.ns = {n};
            std::vector<std::string> warnings;
            for (auto& r : run_trend(point, &warnings)) rows.push_back(std::move(r));
            for (const auto& w : warnings) err << "warning: " << w << '\n';
        }
    } catch (const BudgetExceeded&) {
        flush();  // partial artifact
        throw;
    }
    flush();
    return kOk;
}

int cmd_gamma(const Options& o, std::ostream& out, std::ostream&) {
    if (o.ns.empty()) throw UsageError("gamma needs --n");
    const CensusOptions opt = census_options(o);
    emit(o.out, out, [&](std::ostream& f) {
        f << "q,n,m,g,count,value,zero,reference\n";
        for (double q : o.qs)
            for (int n : o.ns)
                for (const GammaEstimate& e : gamma_profile(q, o.g, n, opt)) {
                    char value[32];
                    std::snprintf(value, sizeof value, "%.9f", e.value);
                    f << to_string(EdgeSpec{true, q}).substr(6) << ',' << e.n << ',' << e.m << ',' << e.g << ','
                      << e.count << ',' << value << ',' << (e.zero ? "true" : "false") << ',' << e.reference << '\n';
                }
    });
    return kOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream&) {
    const int max_n = o.max_n >= 0 ? o.max_n : 6;
    CensusOptions opt = census_options(o);
    opt.max_n_planar = std::max(opt.max_n_planar, max_n);
    opt.max_n_genus = std::max(opt.max_n_genus, max_n);
    std::uint64_t checked = 0;
    std::vector<std::string> problems;
    std::uint64_t problem_count = 0;
    auto report = [&](const std::string& p) {
        if (problems.size() < 50) problems.push_back(p);
        ++problem_count;
    };
    for (int n = 1; n <= max_n; ++n)
        for (int m = 0; m <= slot_count(n); ++m) {
            std::uint64_t previous = 0;
            for (int g = 0; g <= o.max_g; ++g) {
                const std::uint64_t count = enumerate(n, m, g, [&](const LabeledGraph& x) {
                    ++checked;
                    for (const auto& v : invariant_violations(x, g)) report(to_graph6(x) + " g<=" + std::to_string(g) + ": " + v);
                }, opt);
                const std::string where = "(" + std::to_string(n) + "," + std::to_string(m) + "," + std::to_string(g) + ")";
                const bool beyond = n >= 3 && m > 3 * n - 6 + 6 * g;
                if ((count == 0) != beyond) report(where + " edge bound: count " + std::to_string(count));
                if (count < previous) report(where + " count decreased in g");
                previous = count;
            }
        }
    nlohmann::ordered_json doc;
    doc["maxN"] = max_n;
    doc["maxG"] = o.max_g;
    doc["graphsChecked"] = checked;
    doc["violations"] = problem_count;
    doc["examples"] = problems;
    emit(o.out, out, [&](std::ostream& f) { f << doc.dump(1) << '\n'; });
    return problem_count == 0 ? kOk : kFailure;
}

void error_report(std::ostream& err, const std::string& kind, const std::string& message) {
    nlohmann::ordered_json doc;
    doc["error"] = kind;
    doc["message"] = message;
    err << doc.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact census, sampling and trend experiments for random graphs on surfaces", "sgnm"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    Options o;

    auto ns = [&](CLI::App* c, bool required) {
        auto* opt = c->add_option("--n", o.ns, "vertex counts")->delimiter(',');
        if (required) opt->required();
    };
    auto budget = [&](CLI::App* c) {
        c->add_option("--budget", o.budget, "branch nodes per genus computation (SGNM_BUDGET overrides)")
            ->check(CLI::PositiveNumber);
    };
    auto sampling = [&](CLI::App* c) {
        c->add_option("--samples", o.samples, "sample count")->check(CLI::PositiveNumber);
        c->add_option("--seed", o.seed, "64-bit seed");
        c->add_option("--method", o.method, "auto, rejection or mcmc");
        c->add_option("--burn-in", o.burn_in, "mcmc burn-in steps")->check(CLI::PositiveNumber);
        c->add_option("--thin", o.thin, "mcmc thinning")->check(CLI::PositiveNumber);
        c->add_option("--chains", o.chains, "independent chains, seeded seed^index")->check(CLI::PositiveNumber);
        c->add_option("--max-rejections", o.max_rejections, "consecutive rejection cap")->check(CLI::PositiveNumber);
    };

    auto* census = app.add_subcommand("census", "exact counts |S^g(n,m)| and statistic histograms");
    ns(census, true);
    census->add_option("--g", o.gs, "genus bounds")->delimiter(',');
    census->add_option("--m", o.ms, "edge counts or ratio:<x> (default: all)")->delimiter(',');
    census->add_option("--stat", o.stats, "statistics to histogram")->delimiter(',');
    census->add_option("--out", o.out, "path prefix for <out>.csv and <out>.json");
    census->add_option("--verify-against", o.verify_against, "persisted census CSV to compare with");
    census->add_option("--max-n", o.max_n, "raise the census vertex cap");
    budget(census);

    auto* samp = app.add_subcommand("sample", "draw graphs from S_g(n,m)");
    ns(samp, true);
    samp->add_option("--m", o.ms, "edge count or ratio:<x>")->required();
    samp->add_option("--g", o.g, "genus bound");
    samp->add_option("--out", o.out, "path prefix for <out>.g6 and <out>.json");
    sampling(samp);
    budget(samp);

    auto* stats = app.add_subcommand("stats", "statistic reports for graph6 input");
    stats->add_option("--in", o.in, "graph6 file, - for stdin");
    stats->add_option("--g", o.g, "genus bound");
    stats->add_option("--pattern", o.patterns, "graph6 patterns to count appearances of")->delimiter(',');
    stats->add_flag("--json", o.json, "one JSON object per graph instead of CSV");
    stats->add_option("--out", o.out, "output path");
    budget(stats);

    auto* trend = app.add_subcommand("trend", "Monte Carlo sweeps over n and m");
    ns(trend, true);
    trend->add_option("--stat", o.stat, "statistic name")->required();
    trend->add_option("--m-ratio", o.ratios, "m/n ratios")->delimiter(',');
    trend->add_option("--m", o.ms, "edge counts or ratio:<x>")->delimiter(',');
    trend->add_option("--g", o.g, "genus bound");
    trend->add_flag("--exact", o.exact, "use the census where it reaches");
    trend->add_option("--out", o.out, "CSV path");
    trend->add_option("--max-n", o.max_n, "largest n allowed for g >= 1 (default 10)");
    sampling(trend);
    budget(trend);

    auto* gamma = app.add_subcommand("gamma", "growth-constant estimates (count/n!)^(1/n)");
    ns(gamma, true);
    gamma->add_option("--q", o.qs, "edge ratios q, m = floor(q n)")->delimiter(',');
    gamma->add_option("--g", o.g, "largest genus bound; every g from 0 up is reported");
    gamma->add_option("--out", o.out, "CSV path");
    gamma->add_option("--max-n", o.max_n, "raise the census vertex cap");
    budget(gamma);

    auto* verify = app.add_subcommand("verify", "run the invariant suite over the census");
    verify->add_option("--max-n", o.max_n, "largest n (default 6)");
    verify->add_option("--max-g", o.max_g, "largest genus bound (default 1)");
    verify->add_option("--out", o.out, "JSON report path");
    budget(verify);

    std::vector<const char*> argv{"sgnm"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        error_report(err, "usage", e.what());
        return kUsage;
    }

    try {
        if (census->parsed()) return cmd_census(o, out, err);
        if (samp->parsed()) return cmd_sample(o, out, err);
        if (stats->parsed()) return cmd_stats(o, out, err);
        if (trend->parsed()) return cmd_trend(o, out, err);
        if (gamma->parsed()) return cmd_gamma(o, out, err);
        return cmd_verify(o, out, err);
    } catch (const UsageError& e) {
        error_report(err, "usage", e.what());
        return kUsage;
    } catch (const PreconditionError& e) {
        error_report(err, "usage", e.what());
        return kUsage;
    } catch (const CapabilityError& e) {
        error_report(err, "capability", e.what());
        return kUsage;
    } catch (const BudgetExceeded& e) {
        error_report(err, "budget", e.what());
        return kBudget;
    } catch (const Error& e) {
        const std::string what = e.what();
        // census wraps budget exhaustion with the offending graph
        const bool budget_hit = what.find("budget exhausted") != std::string::npos;
        error_report(err, budget_hit ? "budget" : "error", what);
        return budget_hit ? kBudget : kFailure;
    }
}

}  // namespace sgnm::cli
