#include "sgnm/embedding.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "rotation_search.hpp"
#include "sgnm/errors.hpp"

namespace sgnm {

int EmbeddingSummary::max_face_size() const {
    return face_sizes.empty() ? 0 : *std::max_element(face_sizes.begin(), face_sizes.end());
}

bool is_valid_rotation(const LabeledGraph& g, const RotationSystem& r) {
    if (static_cast<int>(r.order.size()) != g.n()) return false;
    for (Vertex v = 1; v <= g.n(); ++v) {
        auto got = r.order[v - 1];
        std::sort(got.begin(), got.end());
        if (got != g.neighbors(v)) return false;
    }
    return true;
}

EmbeddingSummary trace_faces(const LabeledGraph& g, const RotationSystem& r) {
    if (g.n() == 0) throw PreconditionError("face tracing needs at least one vertex");
    if (!is_connected(g)) throw PreconditionError("face tracing requires a connected graph");
    if (!is_valid_rotation(g, r)) throw PreconditionError("rotation system does not match the graph");

    EmbeddingSummary out;
    const int n = g.n();
    if (g.m() == 0) {
        out.faces.push_back({1});
        out.face_sizes.push_back(0);
        out.genus = 0;
        return out;
    }
    // seen[v][i]: dart v -> order[v][i] already on a face
    std::vector<std::vector<bool>> seen(n);
    for (int v = 0; v < n; ++v) seen[v].assign(r.order[v].size(), false);
    auto index_of = [&](Vertex at, Vertex nb) {
        const auto& o = r.order[at - 1];
        return static_cast<int>(std::find(o.begin(), o.end(), nb) - o.begin());
    };
    for (Vertex v = 1; v <= n; ++v)
        for (int i = 0; i < static_cast<int>(r.order[v - 1].size()); ++i) {
            if (seen[v - 1][i]) continue;
            std::vector<Vertex> walk;
            Vertex cv = v;
            int ci = i;
            while (!seen[cv - 1][ci]) {
                seen[cv - 1][ci] = true;
                walk.push_back(cv);
                const Vertex w = r.order[cv - 1][ci];
                const int back = index_of(w, cv);
                ci = (back + 1) % static_cast<int>(r.order[w - 1].size());
                cv = w;
            }
            out.face_sizes.push_back(static_cast<int>(walk.size()));
            out.faces.push_back(std::move(walk));
        }
    const int f = static_cast<int>(out.faces.size());
    out.genus = (2 - n + static_cast<int>(g.m()) - f) / 2;
    return out;
}

int embedding_genus(const LabeledGraph& g, const RotationSystem& r) {
    int total = 0;
    for (const auto& c : components(g)) {
        if (c.edges == 0) continue;
        const LabeledGraph sub = g.induced(c.vertices);
        RotationSystem local;
        std::vector<int> index(g.n() + 1, 0);
        for (std::size_t i = 0; i < c.vertices.size(); ++i) index[c.vertices[i]] = static_cast<int>(i) + 1;
        for (Vertex v : c.vertices) {
            local.order.emplace_back();
            for (Vertex w : r.order[v - 1]) local.order.back().push_back(index[w]);
        }
        total += trace_faces(sub, local).genus;
    }
    return total;
}

std::string dump_embedding(const EmbeddingSummary& s) {
    std::ostringstream os;
    os << "genus " << s.genus << " faces " << s.faces.size() << "\n";
    for (const auto& f : s.faces) {
        for (std::size_t i = 0; i < f.size(); ++i) os << (i ? " " : "") << f[i];
        os << "\n";
    }
    return os.str();
}

int euler_genus_lower_bound(int n, std::size_t m) {
    if (n < 3) return 0;
    const long excess = static_cast<long>(m) - 3L * n + 6;
    return excess <= 0 ? 0 : static_cast<int>((excess + 5) / 6);
}

namespace {

using detail::LocalGraph;

struct UnitSolution {
    int genus = 0;
    std::vector<std::vector<int>> rotation;  // local
};

class Budget {
  public:
    explicit Budget(std::uint64_t total) : remaining_(total) {}
    std::uint64_t remaining() const { return remaining_; }
    void spend(std::uint64_t n) { remaining_ = n >= remaining_ ? 0 : remaining_ - n; }
    std::uint64_t used(std::uint64_t total) const { return total - remaining_; }

  private:
    std::uint64_t remaining_;
};

LabeledGraph unit_graph(const LocalGraph& lg) {
    std::vector<Edge> es;
    for (int v = 0; v < lg.nv; ++v)
        for (int w : lg.nbrs[v])
            if (v < w) es.push_back({v + 1, w + 1});
    return make_graph(lg.nv, es);
}

std::vector<std::vector<int>> default_rotation(const LocalGraph& lg) { return lg.nbrs; }

// Genus of one connected unit, or nullopt when it exceeds `max_allowed`.
std::optional<UnitSolution> solve_unit(const LocalGraph& lg, int max_allowed, const GenusOptions& opt,
                                       Budget& budget, std::uint64_t& nodes) {
    const int nv = lg.nv;
    const int m = static_cast<int>(lg.m);
    const int betti = m - nv + 1;
    if (betti <= 1) {
        if (max_allowed < 0) return std::nullopt;
        return UnitSolution{0, default_rotation(lg)};
    }
    int lower = euler_genus_lower_bound(nv, lg.m);
    if (opt.planarity_fast_path) {
        if (lower == 0) {
            const LabeledGraph ug = unit_graph(lg);
            if (auto rot = planar_rotation(ug)) {
                if (max_allowed < 0) return std::nullopt;
                UnitSolution s;
                s.rotation.resize(nv);
                for (int v = 0; v < nv; ++v)
                    for (Vertex w : rot->order[v]) s.rotation[v].push_back(w - 1);
                return s;
            }
        }
        lower = std::max(lower, 1);
    }
    if (lower > max_allowed) return std::nullopt;

    const int euler_char = 2 - nv + m;  // faces of a genus-0 embedding
    detail::SearchSpec spec;
    spec.objective = detail::Objective::max_faces;
    if (max_allowed < std::numeric_limits<int>::max() / 4) spec.accept_above = euler_char - 2 * max_allowed - 1;
    spec.stop_at = euler_char - 2 * lower;

    const auto outcome = detail::search_rotations(lg, spec, opt.policy, budget.remaining());
    budget.spend(outcome.nodes);
    nodes += outcome.nodes;
    if (outcome.budget_exhausted) {
        const int upper = outcome.found ? (euler_char - outcome.best) / 2 : betti / 2;
        throw BudgetExceeded("genus search budget exhausted", lower, upper);
    }
    if (!outcome.found) return std::nullopt;
    return UnitSolution{(euler_char - outcome.best) / 2, outcome.rotation};
}

// Search units: blocks (bridges excluded, they never carry genus) or whole components.
std::vector<std::vector<Edge>> genus_units(const LabeledGraph& g, bool use_blocks) {
    std::vector<std::vector<Edge>> units;
    if (use_blocks) {
        for (auto& b : block_decomposition(g).blocks) units.push_back(std::move(b));
    } else {
        const auto label = component_labels(g);
        int count = 0;
        for (Vertex v = 1; v <= g.n(); ++v) count = std::max(count, label[v] + 1);
        units.resize(count);
        for (const Edge& e : g.edges()) units[label[e.u]].push_back(e);
        std::erase_if(units, [](const auto& u) { return u.empty(); });
    }
    return units;
}

constexpr int kUnbounded = std::numeric_limits<int>::max() / 2;

}  // namespace

GenusResult min_genus(const LabeledGraph& g, const GenusOptions& opt) {
    GenusResult result;
    result.witness.order.resize(g.n());
    Budget budget(opt.budget);
    for (const auto& unit : genus_units(g, opt.use_blocks)) {
        const LocalGraph lg = detail::local_graph(unit);
        auto sol = solve_unit(lg, kUnbounded, opt, budget, result.nodes_explored);
        result.genus += sol->genus;
        // Concatenating the cyclic orders of different blocks at a shared vertex adds genera.
        for (int v = 0; v < lg.nv; ++v) {
            auto& dst = result.witness.order[lg.label[v] - 1];
            for (int w : sol->rotation[v]) dst.push_back(lg.label[w]);
        }
    }
    return result;
}

bool is_genus_at_most(const LabeledGraph& g, int bound, const GenusOptions& opt) {
    if (bound < 0) return false;
    int euler_total = 0;
    for (const auto& c : components(g)) euler_total += euler_genus_lower_bound(static_cast<int>(c.vertices.size()), c.edges);
    if (euler_total > bound) return false;
    if (opt.planarity_fast_path && is_planar(g)) return true;

    const auto units = genus_units(g, opt.use_blocks);
    std::vector<LocalGraph> locals;
    std::vector<int> lower;
    for (const auto& u : units) {
        locals.push_back(detail::local_graph(u));
        const auto& lg = locals.back();
        int lb = euler_genus_lower_bound(lg.nv, lg.m);
        if (opt.planarity_fast_path && lb == 0 && static_cast<int>(lg.m) - lg.nv + 1 > 1 &&
            !is_planar(unit_graph(lg)))
            lb = 1;
        lower.push_back(lb);
    }
    int lower_total = 0;
    for (int lb : lower) lower_total += lb;
    if (lower_total > bound) return false;

    Budget budget(opt.budget);
    std::uint64_t nodes = 0;
    int decided = 0;
    int pending_lower = lower_total;
    for (std::size_t i = 0; i < locals.size(); ++i) {
        pending_lower -= lower[i];
        const int allowed = bound - decided - pending_lower;
        auto sol = solve_unit(locals[i], allowed, opt, budget, nodes);
        if (!sol) return false;
        decided += sol->genus;
    }
    return decided <= bound;
}

namespace {

// Largest face of one connected component over embeddings of genus <= bound, or -1.
int component_max_face(const LocalGraph& lg, int bound, int min_genus_value, const GenusOptions& opt,
                       Budget& budget) {
    if (bound < min_genus_value) return -1;
    const int nv = lg.nv;
    const int m = static_cast<int>(lg.m);
    if (m == 0) return 0;
    if (m == nv - 1) return 2 * m;  // trees have a single face
    const int min_faces = std::max(1, 2 - nv + m - 2 * bound);
    detail::SearchSpec spec;
    spec.objective = detail::Objective::max_largest_face;
    spec.min_faces = min_faces;
    spec.accept_above = 0;
    spec.stop_at = 2 * m - 3 * (min_faces - 1);
    const auto outcome = detail::search_rotations(lg, spec, opt.policy, budget.remaining());
    budget.spend(outcome.nodes);
    if (outcome.budget_exhausted)
        throw BudgetExceeded("largest-face search budget exhausted", outcome.found ? outcome.best : 0, spec.stop_at);
    return outcome.found ? outcome.best : -1;
}

}  // namespace

int max_face_size(const LabeledGraph& g, int bound, const GenusOptions& opt) {
    if (!is_genus_at_most(g, bound, opt)) throw PreconditionError("graph has genus above the requested bound");
    Budget budget(opt.budget);
    constexpr int kNone = std::numeric_limits<int>::min() / 4;
    // best[j]: largest total face using genus <= j over components seen so far
    std::vector<int> best(bound + 1, 0);
    for (const auto& c : components(g)) {
        if (c.edges == 0) continue;
        const LocalGraph lg = detail::local_graph(g, c.vertices);
        const LabeledGraph sub = g.induced(c.vertices);
        GenusOptions inner = opt;
        inner.budget = budget.remaining();
        const GenusResult mg = min_genus(sub, inner);
        budget.spend(mg.nodes_explored);
        std::vector<int> value(bound + 1, kNone);
        for (int gi = mg.genus; gi <= bound; ++gi) {
            const int v = component_max_face(lg, gi, mg.genus, opt, budget);
            value[gi] = v < 0 ? kNone : v;
            if (v == 2 * static_cast<int>(lg.m)) {
                for (int rest = gi + 1; rest <= bound; ++rest) value[rest] = v;
                break;
            }
        }
        std::vector<int> next(bound + 1, kNone);
        for (int j = 0; j <= bound; ++j)
            for (int gi = 0; gi <= j; ++gi)
                if (value[gi] != kNone && best[j - gi] != kNone)
                    next[j] = std::max(next[j], best[j - gi] + value[gi]);
        best = std::move(next);
    }
    int answer = kNone;
    for (int v : best) answer = std::max(answer, v);
    if (answer == kNone) throw PreconditionError("no embedding within the genus bound");
    return answer;
}

}  // namespace sgnm
