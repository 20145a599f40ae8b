#include "sgnm/statistics.hpp"

#include <algorithm>
#include <bit>
#include "json.hpp"
#include <set>
#include <sstream>

#include "sgnm/errors.hpp"

namespace sgnm {

PendantStats pendant_stats(const LabeledGraph& g) {
    PendantStats s;
    for (Vertex v = 1; v <= g.n(); ++v) s.vertices += g.degree(v) == 1;
    for (const Edge& e : g.edges()) s.edges += (g.degree(e.u) == 1 || g.degree(e.v) == 1);
    return s;
}

namespace {

std::uint64_t full_mask(int n) { return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

// Vertices with label greater than v.
std::uint64_t higher_than(Vertex v) { return ~full_mask(v); }

// Vertices reachable from `start` without crossing the edge {start, other}.
std::uint64_t side_of(const LabeledGraph& g, Vertex start, Vertex other) {
    std::uint64_t seen = std::uint64_t{1} << (start - 1), frontier = seen;
    while (frontier) {
        std::uint64_t grow = 0;
        for (std::uint64_t f = frontier; f; f &= f - 1) {
            const Vertex v = std::countr_zero(f) + 1;
            std::uint64_t nb = g.neighbor_mask(v);
            if (v == start) nb &= ~(std::uint64_t{1} << (other - 1));
            grow |= nb;
        }
        frontier = grow & ~seen;
        seen |= grow;
    }
    return seen;
}

std::vector<Vertex> mask_vertices(std::uint64_t mask) {
    std::vector<Vertex> out;
    for (; mask; mask &= mask - 1) out.push_back(std::countr_zero(mask) + 1);
    return out;
}

void require_connected_pattern(const LabeledGraph& h) {
    if (h.n() == 0 || !is_connected(h)) throw PreconditionError("pattern must be a connected graph");
}

struct BridgeSide {
    std::uint64_t mask;
    Vertex attach;  // endpoint inside the side
    Edge bridge;
};

std::vector<BridgeSide> bridge_sides(const LabeledGraph& g, int size) {
    std::vector<BridgeSide> out;
    for (const Edge& e : block_decomposition(g).cut_edges)
        for (auto [in, out_v] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
            const std::uint64_t s = side_of(g, in, out_v);
            if (std::popcount(s) == size) out.push_back({s, in, e});
        }
    return out;
}

}  // namespace

std::vector<Appearance> appearances(const LabeledGraph& h, const LabeledGraph& g) {
    require_connected_pattern(h);
    if (h.n() >= g.n()) throw PreconditionError("pattern must have fewer vertices than the host graph");
    std::vector<Appearance> out;
    for (const auto& side : bridge_sides(g, h.n())) {
        const auto w = mask_vertices(side.mask);
        if (w.front() != side.attach) continue;
        if (g.induced(w) != h) continue;
        out.push_back({w, side.attach, side.bridge});
    }
    std::sort(out.begin(), out.end(), [](const Appearance& a, const Appearance& b) { return a.vertices < b.vertices; });
    return out;
}

std::vector<std::vector<Vertex>> pendant_copies(const LabeledGraph& h, const LabeledGraph& g) {
    require_connected_pattern(h);
    std::set<std::vector<Vertex>> out;
    for (const auto& side : bridge_sides(g, h.n())) {
        auto w = mask_vertices(side.mask);
        const LabeledGraph sub = g.induced(w);
        if (sub.m() == h.m() && isomorphic(sub, h)) out.insert(std::move(w));
    }
    return {out.begin(), out.end()};
}

// ---------------------------------------------------------------- disjoint families

namespace {

int greedy_family(const std::vector<std::vector<int>>& conflicts, const std::vector<int>& members) {
    std::vector<int> order(members);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return conflicts[a].size() != conflicts[b].size() ? conflicts[a].size() < conflicts[b].size() : a < b;
    });
    std::set<int> blocked;
    int count = 0;
    for (int v : order) {
        if (blocked.count(v)) continue;
        ++count;
        blocked.insert(v);
        blocked.insert(conflicts[v].begin(), conflicts[v].end());
    }
    return count;
}

int exact_family(const std::vector<std::uint32_t>& clash, std::uint32_t pool, int taken, int best) {
    if (pool == 0) return std::max(best, taken);
    if (taken + std::popcount(pool) <= best) return best;
    const int v = std::countr_zero(pool);
    best = exact_family(clash, pool & ~clash[v] & ~(1u << v), taken + 1, best);
    if (clash[v] & pool) best = exact_family(clash, pool & ~(1u << v), taken, best);
    return best;
}

}  // namespace

int max_compatible_family(const std::vector<std::vector<int>>& conflicts, int cap) {
    const int k = static_cast<int>(conflicts.size());
    std::vector<int> piece(k, -1);
    int total = 0;
    bool over_cap = false;
    for (int s = 0; s < k; ++s) {
        if (piece[s] >= 0) continue;
        std::vector<int> members{s};
        piece[s] = s;
        for (std::size_t i = 0; i < members.size(); ++i)
            for (int w : conflicts[members[i]])
                if (piece[w] < 0) {
                    piece[w] = s;
                    members.push_back(w);
                }
        std::sort(members.begin(), members.end());
        const int greedy = greedy_family(conflicts, members);
        if (static_cast<int>(members.size()) > cap) {
            over_cap = true;
            total += greedy;
            continue;
        }
        std::vector<std::uint32_t> clash(members.size(), 0);
        for (std::size_t i = 0; i < members.size(); ++i)
            for (int w : conflicts[members[i]]) {
                const auto j = std::lower_bound(members.begin(), members.end(), w) - members.begin();
                clash[i] |= 1u << j;
            }
        const std::uint32_t pool = members.size() == 32 ? ~0u : (1u << members.size()) - 1;
        total += exact_family(clash, pool, 0, greedy);
    }
    if (over_cap) throw BudgetExceeded("overlap graph piece above exact-solve cap", total, k);
    return total;
}

int max_vertex_disjoint_appearances(const LabeledGraph& h, const LabeledGraph& g) {
    const auto apps = appearances(h, g);
    std::vector<std::vector<int>> conflicts(apps.size());
    for (std::size_t i = 0; i < apps.size(); ++i)
        for (std::size_t j = i + 1; j < apps.size(); ++j) {
            std::vector<Vertex> common;
            std::set_intersection(apps[i].vertices.begin(), apps[i].vertices.end(), apps[j].vertices.begin(),
                                  apps[j].vertices.end(), std::back_inserter(common));
            if (!common.empty()) {
                conflicts[i].push_back(static_cast<int>(j));
                conflicts[j].push_back(static_cast<int>(i));
            }
        }
    return max_compatible_family(conflicts);
}

// ---------------------------------------------------------------- triangulated appearances

namespace {

// W must be a whole component of g minus an anchor triangle: no other edges may leave it.
std::vector<TriangulatedAppearance> find_triangulated(const LabeledGraph& g, int order, const LabeledGraph* pattern) {
    std::vector<TriangulatedAppearance> out;
    const int n = g.n();
    if (order < 3 || order + 3 > n) return out;
    const std::uint64_t all = full_mask(n);
    for (const Edge& e : g.edges()) {
        std::uint64_t thirds = g.neighbor_mask(e.u) & g.neighbor_mask(e.v) & higher_than(e.v);
        for (; thirds; thirds &= thirds - 1) {
            const Vertex c = std::countr_zero(thirds) + 1;
            const std::array<Vertex, 3> tri{e.u, e.v, c};
            const std::uint64_t anchors = (std::uint64_t{1} << (e.u - 1)) | (std::uint64_t{1} << (e.v - 1)) |
                                          (std::uint64_t{1} << (c - 1));
            std::uint64_t remaining = all & ~anchors;
            while (remaining) {
                // component of g - anchors
                std::uint64_t comp = remaining & (~remaining + 1), frontier = comp;
                while (frontier) {
                    std::uint64_t grow = 0;
                    for (std::uint64_t f = frontier; f; f &= f - 1) grow |= g.neighbor_mask(std::countr_zero(f) + 1);
                    grow &= ~anchors;
                    frontier = grow & ~comp;
                    comp |= grow;
                }
                remaining &= ~comp;
                if (std::popcount(comp) != order) continue;
                // each anchor has exactly two neighbours in W, and exactly three vertices of W touch anchors,
                // each twice: the connecting edges then form the alternating hexagon
                bool ok = true;
                std::uint64_t touched = 0;
                for (Vertex a : tri) {
                    const std::uint64_t in = g.neighbor_mask(a) & comp;
                    if (std::popcount(in) != 2) ok = false;
                    touched |= in;
                }
                if (!ok || std::popcount(touched) != 3) continue;
                for (std::uint64_t t = touched; t; t &= t - 1)
                    if (std::popcount(g.neighbor_mask(std::countr_zero(t) + 1) & anchors) != 2) ok = false;
                if (!ok) continue;
                const auto w = mask_vertices(comp);
                const LabeledGraph sub = g.induced(w);
                if (pattern && sub != *pattern) continue;

                TriangulatedAppearance app;
                app.vertices = w;
                const auto rs = mask_vertices(touched);
                // walk the hexagon from the smallest boundary vertex
                Vertex r = rs[0];
                Vertex v = std::countr_zero(g.neighbor_mask(r) & anchors) + 1;
                for (int k = 0; k < 3; ++k) {
                    app.boundary[k] = r;
                    app.anchors[k] = v;
                    const std::uint64_t next_r = g.neighbor_mask(v) & comp & ~(std::uint64_t{1} << (r - 1));
                    r = std::countr_zero(next_r) + 1;
                    const std::uint64_t next_v = g.neighbor_mask(r) & anchors & ~(std::uint64_t{1} << (v - 1));
                    v = std::countr_zero(next_v) + 1;
                }
                for (const Edge& se : sub.edges()) app.total_edges.push_back(make_edge(w[se.u - 1], w[se.v - 1]));
                for (int k = 0; k < 3; ++k) {
                    app.total_edges.push_back(make_edge(app.boundary[k], app.anchors[k]));
                    app.total_edges.push_back(make_edge(app.anchors[k], app.boundary[(k + 1) % 3]));
                }
                std::sort(app.total_edges.begin(), app.total_edges.end());
                app.rooted = rs[0] == w[0] && rs[1] == w[1] && rs[2] == w[2];
                out.push_back(std::move(app));
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.vertices < b.vertices; });
    return out;
}

}  // namespace

std::vector<TriangulatedAppearance> triangulated_appearances(const LabeledGraph& t, const LabeledGraph& g,
                                                             bool rooted_only) {
    require_connected_pattern(t);
    auto all = find_triangulated(g, t.n(), &t);
    if (rooted_only) std::erase_if(all, [](const auto& a) { return !a.rooted; });
    return all;
}

std::vector<TriangulatedAppearance> triangulated_appearances_of_order(int order, const LabeledGraph& g) {
    return find_triangulated(g, order, nullptr);
}

int max_totally_edge_disjoint_tri_appearances(const LabeledGraph& t, const LabeledGraph& g) {
    const auto apps = triangulated_appearances(t, g);
    std::vector<std::vector<int>> conflicts(apps.size());
    for (std::size_t i = 0; i < apps.size(); ++i)
        for (std::size_t j = i + 1; j < apps.size(); ++j) {
            std::vector<Edge> common;
            std::set_intersection(apps[i].total_edges.begin(), apps[i].total_edges.end(),
                                  apps[j].total_edges.begin(), apps[j].total_edges.end(),
                                  std::back_inserter(common));
            if (!common.empty()) {
                conflicts[i].push_back(static_cast<int>(j));
                conflicts[j].push_back(static_cast<int>(i));
            }
        }
    return max_compatible_family(conflicts);
}

// ---------------------------------------------------------------- addable non-edges

std::vector<Edge> addable_nonedges(const LabeledGraph& g, int bound, const GenusOptions& opt) {
    if (!is_genus_at_most(g, bound, opt)) throw PreconditionError("graph has genus above the requested bound");
    const auto label = component_labels(g);
    std::vector<Edge> candidates;
    for (Vertex a = 1; a <= g.n(); ++a)
        for (Vertex b = a + 1; b <= g.n(); ++b)
            if (!g.has_edge(a, b)) candidates.push_back({a, b});
    std::vector<char> keep(candidates.size(), 0);
    const long k = static_cast<long>(candidates.size());
    auto decide = [&](long i) {
        const Edge e = candidates[i];
        keep[i] = label[e.u] != label[e.v] || is_genus_at_most(g.with_edge(e.u, e.v), bound, opt);
    };
    if (opt.policy == ExecPolicy::parallel) {
        GenusOptions inner = opt;
        inner.policy = ExecPolicy::serial;
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < k; ++i) {
            const Edge e = candidates[i];
            keep[i] = label[e.u] != label[e.v] || is_genus_at_most(g.with_edge(e.u, e.v), bound, inner);
        }
    } else {
        for (long i = 0; i < k; ++i) decide(i);
    }
    std::vector<Edge> out;
    for (long i = 0; i < k; ++i)
        if (keep[i]) out.push_back(candidates[i]);
    return out;
}

// ---------------------------------------------------------------- triangles and masses

int triangle_count(const LabeledGraph& g) {
    int count = 0;
    for (const Edge& e : g.edges())
        count += std::popcount(g.neighbor_mask(e.u) & g.neighbor_mask(e.v) & higher_than(e.v));
    return count;
}

int good_triangles(const LabeledGraph& g) {
    int count = 0;
    for (const Edge& e : g.edges()) {
        std::uint64_t thirds = g.neighbor_mask(e.u) & g.neighbor_mask(e.v) & higher_than(e.v);
        for (; thirds; thirds &= thirds - 1) {
            const Vertex c = std::countr_zero(thirds) + 1;
            if (g.degree(e.u) <= 6 || g.degree(e.v) <= 6 || g.degree(c) <= 6) ++count;
        }
    }
    return count;
}

Mass non_multicyclic_mass(const LabeledGraph& g) {
    Mass mass;
    for (const auto& c : components(g)) {
        if (c.kind == ComponentKind::multicyclic) continue;
        mass.vertices += static_cast<int>(c.vertices.size());
        mass.edges += static_cast<int>(c.edges);
    }
    return mass;
}

// ---------------------------------------------------------------- reports

StatReport stat_report(const LabeledGraph& g, int genus_bound, const std::vector<LabeledGraph>& patterns,
                       const GenusOptions& opt) {
    StatReport r;
    r.n = g.n();
    r.m = static_cast<int>(g.m());
    r.genus_bound = genus_bound;
    const auto p = pendant_stats(g);
    r.pendant_edges = p.edges;
    r.pendant_vertices = p.vertices;
    r.max_degree = g.max_degree();
    r.good_triangles = good_triangles(g);
    r.cut_edges = static_cast<int>(block_decomposition(g).cut_edges.size());
    r.addable_nonedges = static_cast<int>(addable_nonedges(g, genus_bound, opt).size());
    const auto mass = non_multicyclic_mass(g);
    r.non_multicyclic_vertices = mass.vertices;
    r.non_multicyclic_edges = mass.edges;
    for (const auto& h : patterns)
        r.appearance_counts[to_graph6(h)] = h.n() < g.n() ? static_cast<int>(appearances(h, g).size()) : 0;
    return r;
}

std::string stat_csv_header(const StatReport& r) {
    std::string s =
        "n,m,g,pendantEdges,pendantVertices,maxDegree,goodTriangles,cutEdges,addableNonEdges,"
        "nonMulticyclicVertices,nonMulticyclicEdges";
    for (const auto& [code, count] : r.appearance_counts) s += ",app:" + code;
    return s;
}

std::string stat_csv_row(const StatReport& r) {
    std::ostringstream os;
    os << r.n << ',' << r.m << ',' << r.genus_bound << ',' << r.pendant_edges << ',' << r.pendant_vertices << ','
       << r.max_degree << ',' << r.good_triangles << ',' << r.cut_edges << ',' << r.addable_nonedges << ','
       << r.non_multicyclic_vertices << ',' << r.non_multicyclic_edges;
    for (const auto& [code, count] : r.appearance_counts) os << ',' << count;
    return os.str();
}

std::string stat_json(const StatReport& r) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["m"] = r.m;
    j["g"] = r.genus_bound;
    j["pendantEdges"] = r.pendant_edges;
    j["pendantVertices"] = r.pendant_vertices;
    j["maxDegree"] = r.max_degree;
    j["goodTriangles"] = r.good_triangles;
    j["cutEdges"] = r.cut_edges;
    j["addableNonEdges"] = r.addable_nonedges;
    j["nonMulticyclicVertices"] = r.non_multicyclic_vertices;
    j["nonMulticyclicEdges"] = r.non_multicyclic_edges;
    for (const auto& [code, count] : r.appearance_counts) j["app:" + code] = count;
    return j.dump();
}

}  // namespace sgnm

// ---------------------------------------------------------------- structural invariants

namespace sgnm {

std::vector<std::string> invariant_violations(const LabeledGraph& g, int genus_bound, int max_pattern_order) {
    std::vector<std::string> out;
    const int n = g.n();
    const int m = static_cast<int>(g.m());
    const auto tag = [&] { return " in " + to_graph6(g); };

    const auto pendant = pendant_stats(g);
    if (n >= 2) {
        const int k1 = static_cast<int>(appearances(empty_graph(1), g).size());
        if (k1 != pendant.vertices)
            out.push_back("K1 appearances " + std::to_string(k1) + " != pendant vertices " +
                          std::to_string(pendant.vertices) + tag());
    }

    // pendant copies grouped by isomorphism class; two copies overlap when they share a vertex
    for (int k = 1; k <= std::min(max_pattern_order, n - 1); ++k) {
        std::map<std::string, std::vector<std::uint64_t>> classes;
        std::set<std::uint64_t> seen;
        for (const auto& side : bridge_sides(g, k))
            if (seen.insert(side.mask).second)
                classes[canonical_code(g.induced(mask_vertices(side.mask)))].push_back(side.mask);
        for (const auto& [code, copies] : classes)
            for (std::uint64_t a : copies) {
                int overlapping = 0;
                for (std::uint64_t b : copies) overlapping += (a != b && (a & b));
                if (overlapping > k - 1)
                    out.push_back("pendant copy of order " + std::to_string(k) + " overlaps " +
                                  std::to_string(overlapping) + " others" + tag());
            }
    }

    for (int t = 3; t + 3 <= n; ++t) {
        const auto apps = triangulated_appearances_of_order(t, g);
        const long limit = static_cast<long>(t + 3) * (t + 2) * (t + 1) / 6;
        for (std::size_t i = 0; i < apps.size(); ++i) {
            long hits = 0;
            for (std::size_t j = 0; j < apps.size(); ++j) {
                if (i == j) continue;
                std::vector<Edge> common;
                std::set_intersection(apps[i].total_edges.begin(), apps[i].total_edges.end(),
                                      apps[j].total_edges.begin(), apps[j].total_edges.end(),
                                      std::back_inserter(common));
                hits += !common.empty();
            }
            if (hits > limit)
                out.push_back("triangulated appearance of order " + std::to_string(t) + " meets " +
                              std::to_string(hits) + " others" + tag());
        }
    }

    const int cut = static_cast<int>(block_decomposition(g).cut_edges.size());
    if (2 * cut >= 3 * n - m + 6 * genus_bound)
        out.push_back("cut edges " + std::to_string(cut) + " not below (3n-m+6g)/2" + tag());

    if (n >= 3 && is_connected(g)) {
        const int num = n + 12 - 12 * genus_bound;
        const int ceil21 = num > 0 ? (num + 20) / 21 : -((-num) / 21);
        const int rhs = ceil21 - 2 * (3 * n - 6 + 6 * genus_bound - m);
        const int good = good_triangles(g);
        if (rhs > 0 && good < rhs)
            out.push_back("good triangles " + std::to_string(good) + " below " + std::to_string(rhs) + tag());
    }
    return out;
}

}  // namespace sgnm

namespace sgnm {

const std::vector<std::string>& statistic_names() {
    static const std::vector<std::string> names{
        "connected",       "hasIsolated",  "components",    "pendantEdges",  "pendantVertices",
        "maxDegree",       "triangles",    "goodTriangles", "cutEdges",      "copyK3",
        "copyK4",          "maxFaceSize",  "addableNonEdges", "nonMulticyclicVertices", "nonMulticyclicEdges"};
    return names;
}

GraphStatistic named_statistic(std::string_view name, int genus_bound, const GenusOptions& opt) {
    if (name == "connected") return [](const LabeledGraph& g) -> long long { return is_connected(g); };
    if (name == "hasIsolated")
        return [](const LabeledGraph& g) -> long long {
            for (Vertex v = 1; v <= g.n(); ++v)
                if (g.degree(v) == 0) return 1;
            return 0;
        };
    if (name == "components") return [](const LabeledGraph& g) -> long long { return components(g).size(); };
    if (name == "pendantEdges") return [](const LabeledGraph& g) -> long long { return pendant_stats(g).edges; };
    if (name == "pendantVertices") return [](const LabeledGraph& g) -> long long { return pendant_stats(g).vertices; };
    if (name == "maxDegree") return [](const LabeledGraph& g) -> long long { return g.max_degree(); };
    if (name == "triangles") return [](const LabeledGraph& g) -> long long { return triangle_count(g); };
    if (name == "goodTriangles") return [](const LabeledGraph& g) -> long long { return good_triangles(g); };
    if (name == "cutEdges")
        return [](const LabeledGraph& g) -> long long { return block_decomposition(g).cut_edges.size(); };
    if (name == "copyK3") return [](const LabeledGraph& g) -> long long { return triangle_count(g) > 0; };
    if (name == "copyK4")
        return [](const LabeledGraph& g) -> long long {
            // a K4 is a triangle whose three vertices share a further common neighbour
            for (const Edge& e : g.edges()) {
                const std::uint64_t common = g.neighbor_mask(e.u) & g.neighbor_mask(e.v);
                for (std::uint64_t rest = common; rest; rest &= rest - 1) {
                    const Vertex w = std::countr_zero(rest) + 1;
                    if (common & g.neighbor_mask(w)) return 1;
                }
            }
            return 0;
        };
    if (name == "maxFaceSize")
        return [genus_bound, opt](const LabeledGraph& g) -> long long { return max_face_size(g, genus_bound, opt); };
    if (name == "addableNonEdges")
        return [genus_bound, opt](const LabeledGraph& g) -> long long {
            return addable_nonedges(g, genus_bound, opt).size();
        };
    if (name == "nonMulticyclicVertices")
        return [](const LabeledGraph& g) -> long long { return non_multicyclic_mass(g).vertices; };
    if (name == "nonMulticyclicEdges")
        return [](const LabeledGraph& g) -> long long { return non_multicyclic_mass(g).edges; };
    throw PreconditionError("unknown statistic '" + std::string(name) + "'");
}

}  // namespace sgnm
