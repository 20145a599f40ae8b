#include "sgnm/census.hpp"

#include <cmath>
#include <istream>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "sgnm/errors.hpp"
#include "sgnm/statistics.hpp"
#include "sgnm/version.hpp"

namespace sgnm {

namespace {

constexpr std::uint64_t kChunk = 4096;

std::uint64_t binomial(int a, int b) {
    if (b < 0 || b > a) return 0;
    b = std::min(b, a - b);
    std::uint64_t r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
}

// The m-subsets of the C(n,2) edge slots, ranked in lexicographic order.
class SubsetSpace {
  public:
    SubsetSpace(int n, int m) : n_(n), m_(m), slots_(slot_count(n)), total_(binomial(slots_, m)) {
        for (int s = 0; s < slots_; ++s) pair_.push_back(slot_edge(s, n));
    }

    std::uint64_t size() const { return total_; }

    // Calls f(graph) for every subset with rank in [begin, end).
    template <class F>
    void for_range(std::uint64_t begin, std::uint64_t end, F&& f) const {
        if (begin >= end) return;
        std::vector<int> c = unrank(begin);
        for (std::uint64_t r = begin;;) {
            f(graph(c));
            if (++r == end) break;
            advance(c);
        }
    }

  private:
    std::vector<int> unrank(std::uint64_t rank) const {
        std::vector<int> c;
        int next = 0;
        for (int i = 0; i < m_; ++i) {
            for (;; ++next) {
                const std::uint64_t below = binomial(slots_ - next - 1, m_ - i - 1);
                if (rank < below) break;
                rank -= below;
            }
            c.push_back(next++);
        }
        return c;
    }

    void advance(std::vector<int>& c) const {
        int i = m_ - 1;
        while (c[i] == slots_ - m_ + i) --i;
        ++c[i];
        for (int j = i + 1; j < m_; ++j) c[j] = c[j - 1] + 1;
    }

    LabeledGraph graph(const std::vector<int>& c) const {
        std::uint64_t adj[kMaxVertices] = {};
        for (int s : c) {
            const Edge e = pair_[s];
            adj[e.u - 1] |= std::uint64_t{1} << (e.v - 1);
            adj[e.v - 1] |= std::uint64_t{1} << (e.u - 1);
        }
        return LabeledGraph::from_adjacency(n_, std::span<const std::uint64_t>(adj, n_));
    }

    int n_, m_, slots_;
    std::uint64_t total_;
    std::vector<Edge> pair_;
};

// Minimum genus of nonplanar graphs, keyed by canonical code. Entries are written once and
// shared by every census call in the process.
class GenusMemo {
  public:
    int genus(const LabeledGraph& g, const GenusOptions& opt) {
        const std::string code = canonical_code(g);
        {
            std::shared_lock lock(mutex_);
            if (auto it = table_.find(code); it != table_.end()) return it->second;
        }
        GenusOptions serial = opt;
        serial.policy = ExecPolicy::serial;
        int value = 0;
        try {
            value = min_genus(g, serial).genus;
        } catch (const BudgetExceeded& e) {
            throw Error("embedding budget exhausted on graph " + to_graph6(g) + ": " + e.what());
        }
        std::unique_lock lock(mutex_);
        table_.emplace(code, value);
        return value;
    }

  private:
    std::shared_mutex mutex_;
    std::unordered_map<std::string, int> table_;
};

GenusMemo& memo() {
    static GenusMemo instance;
    return instance;
}

// Minimum genus of gr when it is at most g, otherwise any value above g.
int genus_class(const LabeledGraph& gr, int g, const GenusOptions& opt) {
    if (euler_genus_lower_bound(gr.n(), gr.m()) > g) return g + 1;
    // the smallest nonplanar graphs, K5 and K3,3, have ten and nine edges
    if (gr.m() <= 8 || is_planar(gr)) return 0;
    if (g == 0) return 1;
    return memo().genus(gr, opt);
}

bool member(const LabeledGraph& gr, int g, const GenusOptions& opt) { return genus_class(gr, g, opt) <= g; }

void check_request(int n, int m, int g, const CensusOptions& opt) {
    if (n < 1) throw PreconditionError("census needs n >= 1");
    if (m < 0 || g < 0) throw PreconditionError("census needs m >= 0 and g >= 0");
    const int cap = g == 0 ? opt.max_n_planar : opt.max_n_genus;
    if (n > cap)
        throw CapabilityError("census cap is n <= " + std::to_string(cap) + " for g = " + std::to_string(g) +
                              ", requested n = " + std::to_string(n));
}

// Folds `step` over the members of S^g(n,m) in chunk order. Each chunk owns its accumulator and
// the accumulators are merged in rank order, so the result does not depend on the schedule.
// `step` receives the genus class of each member as a third argument.
template <class Acc, class Step, class Merge>
Acc fold_members(int n, int m, int g, const CensusOptions& opt, Step step, Merge merge) {
    check_request(n, m, g, opt);
    Acc total{};
    if (m > slot_count(n)) return total;
    const SubsetSpace space(n, m);
    auto visit = [&](Acc& acc, const LabeledGraph& gr) {
        const int cls = genus_class(gr, g, opt.genus);
        if (cls <= g) step(acc, gr, cls);
    };
    if (opt.policy == ExecPolicy::serial) {
        space.for_range(0, space.size(), [&](const LabeledGraph& gr) { visit(total, gr); });
        return total;
    }
    const std::uint64_t chunks = (space.size() + kChunk - 1) / kChunk;
    std::vector<Acc> partial(chunks);
    std::exception_ptr failure;
    std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
        try {
            const std::uint64_t begin = c * kChunk;
            space.for_range(begin, std::min(begin + kChunk, space.size()),
                            [&](const LabeledGraph& gr) { visit(partial[c], gr); });
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    for (auto& p : partial) merge(total, p);
    return total;
}

}  // namespace

std::uint64_t enumerate(int n, int m, int g, const std::function<void(const LabeledGraph&)>& visit,
                        const CensusOptions& opt) {
    check_request(n, m, g, opt);
    if (m > slot_count(n)) return 0;
    const SubsetSpace space(n, m);
    std::uint64_t visited = 0;
    if (opt.policy == ExecPolicy::serial) {
        space.for_range(0, space.size(), [&](const LabeledGraph& gr) {
            if (!member(gr, g, opt.genus)) return;
            visit(gr);
            ++visited;
        });
        return visited;
    }
    // decide a window of ranks in parallel, then replay the members in order on this thread
    const std::uint64_t window = kChunk * 64;
    std::vector<std::uint8_t> keep;
    for (std::uint64_t base = 0; base < space.size(); base += window) {
        const std::uint64_t span = std::min(window, space.size() - base);
        keep.assign(span, 0);
        std::exception_ptr failure;
        std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>((span + kChunk - 1) / kChunk); ++c) {
            try {
                const std::uint64_t begin = c * kChunk;
                std::uint64_t at = begin;
                space.for_range(base + begin, base + std::min(begin + kChunk, span),
                                [&](const LabeledGraph& gr) { keep[at++] = member(gr, g, opt.genus); });
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        std::uint64_t at = 0;
        space.for_range(base, base + span, [&](const LabeledGraph& gr) {
            if (keep[at++]) {
                visit(gr);
                ++visited;
            }
        });
    }
    return visited;
}

std::uint64_t census_count(int n, int m, int g, const CensusOptions& opt) {
    return fold_members<std::uint64_t>(
        n, m, g, opt, [](std::uint64_t& acc, const LabeledGraph&, int) { ++acc; },
        [](std::uint64_t& into, std::uint64_t part) { into += part; });
}

std::vector<std::uint64_t> genus_profile(int n, int m, int max_g, const CensusOptions& opt) {
    using Counts = std::vector<std::uint64_t>;
    Counts per_class = fold_members<Counts>(
        n, m, max_g, opt,
        [max_g](Counts& acc, const LabeledGraph&, int cls) {
            if (acc.empty()) acc.assign(max_g + 1, 0);
            ++acc[cls];
        },
        [](Counts& into, const Counts& part) {
            if (into.size() < part.size()) into.resize(part.size(), 0);
            for (std::size_t i = 0; i < part.size(); ++i) into[i] += part[i];
        });
    per_class.resize(max_g + 1, 0);
    for (int g = 1; g <= max_g; ++g) per_class[g] += per_class[g - 1];
    return per_class;
}

Probability probability(int n, int m, int g, const std::function<bool(const LabeledGraph&)>& pred,
                        const CensusOptions& opt) {
    using Tally = std::pair<std::uint64_t, std::uint64_t>;  // hits, members
    const Tally t = fold_members<Tally>(
        n, m, g, opt,
        [&](Tally& acc, const LabeledGraph& gr, int) {
            acc.first += pred(gr);
            ++acc.second;
        },
        [](Tally& into, const Tally& part) {
            into.first += part.first;
            into.second += part.second;
        });
    if (t.second == 0)
        throw UndefinedProbability("S^" + std::to_string(g) + "(" + std::to_string(n) + "," + std::to_string(m) +
                                   ") is empty");
    return {static_cast<std::int64_t>(t.first), static_cast<std::int64_t>(t.second)};
}

Histogram distribution(int n, int m, int g, const std::function<long long(const LabeledGraph&)>& stat,
                       const CensusOptions& opt) {
    return fold_members<Histogram>(
        n, m, g, opt, [&](Histogram& acc, const LabeledGraph& gr, int) { ++acc[stat(gr)]; },
        [](Histogram& into, const Histogram& part) {
            for (const auto& [value, freq] : part) into[value] += freq;
        });
}

Probability exact_mean(int n, int m, int g, const std::function<long long(const LabeledGraph&)>& stat,
                       const CensusOptions& opt) {
    const Histogram h = distribution(n, m, g, stat, opt);
    std::int64_t sum = 0, count = 0;
    for (const auto& [value, freq] : h) {
        sum += value * static_cast<std::int64_t>(freq);
        count += static_cast<std::int64_t>(freq);
    }
    if (count == 0)
        throw UndefinedProbability("S^" + std::to_string(g) + "(" + std::to_string(n) + "," + std::to_string(m) +
                                   ") is empty");
    return {sum, count};
}

namespace {

GammaEstimate gamma_from_count(double q, int g, int n, int m, std::uint64_t count) {
    GammaEstimate out;
    out.q = q;
    out.n = n;
    out.g = g;
    out.m = m;
    out.count = count;
    out.zero = count == 0;
    if (!out.zero) out.value = std::exp((std::log(static_cast<double>(count)) - std::lgamma(n + 1.0)) / n);
    return out;
}

int gamma_edges(double q, int n) { return static_cast<int>(std::floor(q * n + 1e-9)); }

}  // namespace

GammaEstimate gamma_estimate(double q, int g, int n, const CensusOptions& opt) {
    const int m = gamma_edges(q, n);
    return gamma_from_count(q, g, n, m, census_count(n, m, g, opt));
}

std::vector<GammaEstimate> gamma_profile(double q, int max_g, int n, const CensusOptions& opt) {
    const int m = gamma_edges(q, n);
    const auto counts = genus_profile(n, m, max_g, opt);
    std::vector<GammaEstimate> out;
    for (int g = 0; g <= max_g; ++g) out.push_back(gamma_from_count(q, g, n, m, counts[g]));
    return out;
}

// ---------------------------------------------------------------- tables

CensusTable build_census(const std::vector<int>& ns, const std::vector<int>& gs,
                         const std::vector<std::string>& stats, const CensusOptions& opt) {
    CensusTable table;
    table.version = std::string(kVersion);
    table.budget = opt.genus.budget;
    for (int n : ns)
        for (int g : gs) {
            std::vector<GraphStatistic> fns;
            for (const auto& s : stats) fns.push_back(named_statistic(s, g, opt.genus));
            for (int m = 0; m <= slot_count(n); ++m) {
                const CensusEntry e = fold_members<CensusEntry>(
                    n, m, g, opt,
                    [&](CensusEntry& acc, const LabeledGraph& gr, int) {
                        ++acc.count;
                        for (std::size_t i = 0; i < fns.size(); ++i) ++acc.histograms[stats[i]][fns[i](gr)];
                    },
                    [](CensusEntry& into, const CensusEntry& part) {
                        into.count += part.count;
                        for (const auto& [name, h] : part.histograms)
                            for (const auto& [value, freq] : h) into.histograms[name][value] += freq;
                    });
                table.entries[{n, m, g}] = e;
            }
        }
    return table;
}

void write_census_csv(const CensusTable& t, std::ostream& out) {
    out << "n,m,g,count\n";
    for (const auto& [key, e] : t.entries) {
        const auto [n, m, g] = key;
        out << n << ',' << m << ',' << g << ',' << e.count << '\n';
    }
}

CensusTable read_census_csv(std::istream& in) {
    CensusTable t;
    std::string line;
    if (!std::getline(in, line) || line != "n,m,g,count") throw DecodeError("expected header n,m,g,count", 0);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream fields(line);
        int n = 0, m = 0, g = 0;
        std::uint64_t count = 0;
        char c1 = 0, c2 = 0, c3 = 0;
        if (!(fields >> n >> c1 >> m >> c2 >> g >> c3 >> count) || c1 != ',' || c2 != ',' || c3 != ',')
            throw DecodeError("malformed census row " + std::to_string(row), 0);
        t.entries[{n, m, g}].count = count;
    }
    return t;
}

void write_census_json(const CensusTable& t, std::ostream& out) {
    nlohmann::ordered_json doc;
    doc["version"] = t.version;
    doc["budget"] = t.budget;
    doc["histograms"] = nlohmann::ordered_json::array();
    for (const auto& [key, e] : t.entries) {
        const auto [n, m, g] = key;
        for (const auto& [name, h] : e.histograms) {
            nlohmann::ordered_json bins = nlohmann::ordered_json::object();
            for (const auto& [value, freq] : h) bins[std::to_string(value)] = freq;
            doc["histograms"].push_back({{"n", n}, {"m", m}, {"g", g}, {"stat", name}, {"bins", bins}});
        }
    }
    out << doc.dump(1) << '\n';
}

std::vector<std::string> census_mismatches(const CensusTable& fresh, const CensusTable& persisted) {
    std::vector<std::string> out;
    for (const auto& [key, old] : persisted.entries) {
        const auto [n, m, g] = key;
        const std::string where = "(" + std::to_string(n) + "," + std::to_string(m) + "," + std::to_string(g) + ")";
        const auto it = fresh.entries.find(key);
        if (it == fresh.entries.end())
            out.push_back(where + " missing from the recomputed table");
        else if (it->second.count != old.count)
            out.push_back(where + " persisted " + std::to_string(old.count) + ", recomputed " +
                          std::to_string(it->second.count));
    }
    return out;
}

}  // namespace sgnm
