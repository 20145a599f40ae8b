#include "sgnm/surgery.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "sgnm/errors.hpp"

namespace sgnm {

namespace {

using Walk = std::array<Vertex, 3>;

Walk sorted(Walk f) {
    std::sort(f.begin(), f.end());
    return f;
}

// The traced walk of the size-3 face with vertex set `face`, if there is one.
std::optional<Walk> find_triangular_face(const EmbeddingSummary& s, Walk face) {
    const auto want = sorted(face);
    for (const auto& walk : s.faces) {
        if (walk.size() != 3) continue;
        const Walk w{walk[0], walk[1], walk[2]};
        if (sorted(w) == want) return w;
    }
    return std::nullopt;
}

bool is_triangulation(const LabeledGraph& t) {
    const int n = t.n();
    return n >= 3 && static_cast<long>(t.m()) == 3L * n - 6 && is_planar(t);
}

// Rotation `r` moved onto labels offset+1.., padded with empty lists up to `total` vertices.
RotationSystem shifted(const RotationSystem& r, int offset, int total) {
    RotationSystem out;
    out.order.resize(total);
    for (std::size_t v = 0; v < r.order.size(); ++v)
        for (Vertex w : r.order[v]) out.order[offset + v].push_back(w + offset);
    return out;
}

void merge_into(RotationSystem& dst, const RotationSystem& src) {
    for (std::size_t v = 0; v < src.order.size(); ++v)
        dst.order[v].insert(dst.order[v].end(), src.order[v].begin(), src.order[v].end());
}

RotationSystem mirrored(RotationSystem r) {
    for (auto& o : r.order) std::reverse(o.begin(), o.end());
    return r;
}

// New neighbours drawn into the face corner at `at` that follows `after` in the rotation.
struct CornerInsert {
    Vertex at;
    Vertex after;
    std::vector<Vertex> nbrs;
};

bool touches(const Edge& e, Vertex x) { return e.u == x || e.v == x; }

// Neighbours of x along `edges`. In a closed band the list is cyclic and x's edges form one
// cyclic run, so reading starts where that run begins.
std::vector<Vertex> partners(Vertex x, const std::vector<Edge>& edges, bool closed) {
    const std::size_t k = edges.size();
    std::size_t start = 0;
    if (closed)
        for (std::size_t i = 0; i < k; ++i)
            if (touches(edges[i], x) && !touches(edges[(i + k - 1) % k], x)) start = i;
    std::vector<Vertex> out;
    for (std::size_t j = 0; j < k; ++j) {
        const Edge& e = edges[(start + j) % k];
        if (touches(e, x)) out.push_back(e.u == x ? e.v : e.u);
    }
    return out;
}

// Corners whose insertions share one drawing direction; a group may be drawn either way round.
using CornerGroup = std::vector<CornerInsert>;

// Tries both directions for every group and returns the first rotation of `result` whose traced
// genus is at most `target`.
std::optional<RotationSystem> realise(const LabeledGraph& result, const RotationSystem& base,
                                      const std::vector<CornerGroup>& groups, int target) {
    for (unsigned flip = 0; flip < (1u << groups.size()); ++flip) {
        RotationSystem r = base;
        for (std::size_t gi = 0; gi < groups.size(); ++gi)
            for (const auto& c : groups[gi]) {
                auto& o = r.order[c.at - 1];
                const auto pos = std::find(o.begin(), o.end(), c.after) + 1;
                if (flip >> gi & 1u)
                    o.insert(pos, c.nbrs.rbegin(), c.nbrs.rend());
                else
                    o.insert(pos, c.nbrs.begin(), c.nbrs.end());
            }
        if (is_valid_rotation(result, r) && embedding_genus(result, r) <= target) return r;
    }
    return std::nullopt;
}

// Corners of a walk, each receiving its partners among `edges` in band order.
CornerGroup corners_of(const Walk& w, const std::vector<Edge>& edges, bool closed) {
    CornerGroup out;
    for (int k = 0; k < 3; ++k) out.push_back({w[k], w[(k + 2) % 3], partners(w[k], edges, closed)});
    return out;
}

std::string walk_text(const Walk& w) {
    return "(" + std::to_string(w[0]) + " " + std::to_string(w[1]) + " " + std::to_string(w[2]) + ")";
}

}  // namespace

bool is_facial_base_triangle(const LabeledGraph& t) {
    if (t.n() < 3 || !t.has_edge(1, 2) || !t.has_edge(2, 3) || !t.has_edge(1, 3)) return false;
    if (t.n() == 3) return true;
    // in a 3-connected planar triangulation a triangle is a face iff it does not separate
    std::vector<Vertex> rest;
    for (Vertex v = 4; v <= t.n(); ++v) rest.push_back(v);
    return is_connected(t.induced(rest));
}

SurgeryResult attach_appearance(const LabeledGraph& g, const LabeledGraph& h, Vertex v, const GenusOptions& opt) {
    if (h.n() == 0 || !is_connected(h)) throw PreconditionError("attached graph must be connected");
    if (!is_planar(h)) throw PreconditionError("attached graph must be planar");
    if (v < 1 || v > g.n()) throw PreconditionError("attachment vertex out of range");
    const int n = g.n();
    if (n + h.n() > kMaxVertices) throw CapabilityError("result exceeds vertex cap");
    std::vector<Edge> es(g.edges());
    for (const Edge& e : h.edges()) es.push_back({n + e.u, n + e.v});
    es.push_back({v, n + 1});

    SurgeryResult out;
    out.graph = make_graph(n + h.n(), es);
    out.edge_delta = static_cast<int>(h.m()) + 1;
    const GenusResult before = min_genus(g, opt);
    out.genus_bound_before = before.genus;
    out.genus_bound_after = before.genus;
    out.witness = shifted(before.witness, 0, out.graph.n());
    merge_into(out.witness, shifted(*planar_rotation(h), n, out.graph.n()));
    out.witness.order[v - 1].push_back(n + 1);
    out.witness.order[n].push_back(v);
    out.certificate = "pendant copy joined by bridge " + to_string(make_edge(v, n + 1)) +
                      "; its blocks are planar and genus adds over blocks";
    return out;
}

SurgeryResult attach_triangulated(const LabeledGraph& g, const RotationSystem& r, std::array<Vertex, 3> face,
                                  const LabeledGraph& t) {
    if (!is_connected(g)) throw PreconditionError("host graph must be connected");
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2])
        throw PreconditionError("face vertices must be distinct");
    const EmbeddingSummary s = trace_faces(g, r);
    const auto walk = find_triangular_face(s, face);
    if (!walk) throw PreconditionError("requested vertices do not bound a triangular face of the embedding");
    if (!is_triangulation(t)) throw PreconditionError("attached graph must be a planar triangulation");
    if (!is_facial_base_triangle(t)) throw PreconditionError("vertices 1,2,3 of the triangulation must bound a face");
    const int n = g.n();
    if (n + t.n() > kMaxVertices) throw CapabilityError("result exceeds vertex cap");

    const auto [v1, v2, v3] = *walk;
    const Vertex r1 = n + 1, r2 = n + 2, r3 = n + 3;
    const std::vector<Edge> hexagon{make_edge(r1, v1), make_edge(v1, r2), make_edge(r2, v2),
                                    make_edge(v2, r3), make_edge(r3, v3), make_edge(v3, r1)};
    std::vector<Edge> es(g.edges());
    for (const Edge& e : t.edges()) es.push_back({n + e.u, n + e.v});
    es.insert(es.end(), hexagon.begin(), hexagon.end());

    SurgeryResult out;
    out.graph = make_graph(n + t.n(), es);
    out.edge_delta = static_cast<int>(t.m()) + 6;
    out.genus_bound_before = s.genus;
    out.genus_bound_after = s.genus;

    // draw t inside the face, in whichever orientation lines its boundary up with the hexagon
    const RotationSystem planar = *planar_rotation(t);
    for (const RotationSystem& rt : {planar, mirrored(planar)}) {
        const auto inner = find_triangular_face(trace_faces(t, rt), {1, 2, 3});
        if (!inner) continue;
        RotationSystem base = shifted(r, 0, out.graph.n());
        merge_into(base, shifted(rt, n, out.graph.n()));
        const Walk boundary{(*inner)[0] + n, (*inner)[1] + n, (*inner)[2] + n};
        const std::vector<CornerGroup> groups{corners_of(*walk, hexagon, true), corners_of(boundary, hexagon, true)};
        if (auto w = realise(out.graph, base, groups, out.genus_bound_after)) {
            out.witness = std::move(*w);
            out.certificate = "triangulation drawn inside facial triangle " + walk_text(*walk) + " of a genus-" +
                              std::to_string(s.genus) + " embedding";
            return out;
        }
    }
    throw Error("could not draw the triangulation inside the chosen face");
}

namespace {

struct PreparedTriangulation {
    EmbeddingSummary summary;
    Walk outer, inner;  // traced walks
};

PreparedTriangulation prepare(const EmbeddedGraph& e, Walk outer, Walk inner, const char* name) {
    if (!is_connected(e.graph)) throw PreconditionError(std::string(name) + " must be connected");
    PreparedTriangulation p;
    p.summary = trace_faces(e.graph, e.rotation);
    for (int size : p.summary.face_sizes)
        if (size != 3) throw PreconditionError(std::string(name) + " is not an embedded triangulation");
    const auto o = find_triangular_face(p.summary, outer);
    const auto i = find_triangular_face(p.summary, inner);
    if (!o || !i) throw PreconditionError(std::string(name) + ": chosen vertices do not bound faces");
    if (sorted(*o) == sorted(*i)) throw PreconditionError(std::string(name) + ": inner and outer faces coincide");
    p.outer = *o;
    p.inner = *i;
    return p;
}

std::vector<Vertex> shared_vertices(Walk a, Walk b) {
    std::vector<Vertex> out;
    for (Vertex x : a)
        if (std::find(b.begin(), b.end(), x) != b.end()) out.push_back(x);
    return out;
}

// Triangulations of the annulus between boundary x and boundary y (both listed in the same
// rotational sense). Walking round the annulus, each step advances along x ('x') or along y ('y');
// the six cross edges are listed in walking order. Words with a repeated pair are dropped.
std::vector<std::vector<Edge>> bands(Walk x, Walk y) {
    std::vector<std::string> words{"xyxyxy"};
    std::string w = "xxxyyy";
    do {
        if (w != words.front()) words.push_back(w);
    } while (std::next_permutation(w.begin(), w.end()));
    std::vector<std::vector<Edge>> out;
    for (const auto& word : words)
        for (int shift = 0; shift < 3; ++shift) {
            std::vector<Edge> edges;
            int i = 0, j = shift;
            for (char step : word) {
                edges.push_back(make_edge(x[i % 3], y[j % 3]));
                (step == 'x' ? i : j) += 1;
            }
            std::set<Edge> distinct(edges.begin(), edges.end());
            if (distinct.size() == edges.size()) out.push_back(std::move(edges));
        }
    return out;
}

}  // namespace

SurgeryResult join_triangulations(const EmbeddedGraph& a, std::array<Vertex, 3> outer_a, std::array<Vertex, 3> inner_a,
                                  const EmbeddedGraph& b, std::array<Vertex, 3> outer_b, std::array<Vertex, 3> inner_b,
                                  int extra_edges) {
    if (extra_edges < 0 || extra_edges > 6) throw PreconditionError("extra edge count must be in 0..6");
    const auto pa = prepare(a, outer_a, inner_a, "first triangulation");
    const auto pb = prepare(b, outer_b, inner_b, "second triangulation");
    const int na = a.graph.n();
    const int total = na + b.graph.n();
    if (total > kMaxVertices) throw CapabilityError("result exceeds vertex cap");

    auto lift = [&](Walk w) { return Walk{w[0] + na, w[1] + na, w[2] + na}; };
    // Gluing across a tube pairs a boundary with the reversal of the other one.
    auto reversed = [](Walk w) { return Walk{w[0], w[2], w[1]}; };
    const Walk outer_b_walk = lift(pb.outer), inner_b_walk = lift(pb.inner);

    // The exceptional vertices (the single vertex an inner face shares with its outer face) must
    // not be joined across the handle.
    std::optional<Edge> forbidden;
    const auto xa = shared_vertices(pa.inner, pa.outer);
    const auto xb = shared_vertices(pb.inner, pb.outer);
    if (xa.size() == 1 && xb.size() == 1) forbidden = make_edge(xa[0], xb[0] + na);

    const LabeledGraph base_graph = a.graph.disjoint_union(b.graph);
    RotationSystem base = shifted(a.rotation, 0, total);
    merge_into(base, shifted(b.rotation, na, total));
    const int bound_before = pa.summary.genus + pb.summary.genus;
    const int bound_after = bound_before + (extra_edges > 0 ? 1 : 0);

    bool simple_alignment = false;
    const auto outer_bands = bands(pa.outer, reversed(outer_b_walk));
    const auto inner_bands = bands(pa.inner, reversed(inner_b_walk));
    for (const auto& outer_edges : outer_bands) {
        for (const auto& full_inner : inner_bands) {
            const std::vector<Edge> inner_edges(full_inner.begin(), full_inner.begin() + extra_edges);
            if (forbidden && std::find(inner_edges.begin(), inner_edges.end(), *forbidden) != inner_edges.end())
                continue;
            std::set<Edge> all(outer_edges.begin(), outer_edges.end());
            bool simple = true;
            for (const Edge& e : inner_edges) simple = simple && all.insert(e).second;
            if (!simple) continue;
            simple_alignment = true;

            std::vector<Edge> es(base_graph.edges());
            es.insert(es.end(), all.begin(), all.end());
            const LabeledGraph joined = make_graph(total, es);
            const std::vector<CornerGroup> groups{corners_of(pa.outer, outer_edges, true), corners_of(outer_b_walk, outer_edges, true),
                                                  corners_of(pa.inner, inner_edges, extra_edges == 6),
                                                  corners_of(inner_b_walk, inner_edges, extra_edges == 6)};
            auto witness = realise(joined, base, groups, bound_after);
            if (!witness) continue;

            SurgeryResult out;
            out.graph = joined;
            out.edge_delta = 6 + extra_edges;
            out.genus_bound_before = bound_before;
            out.genus_bound_after = bound_after;
            out.witness = std::move(*witness);
            out.certificate = "outer faces " + walk_text(pa.outer) + " and " + walk_text(outer_b_walk) +
                              " joined by a six-edge band";
            if (extra_edges > 0)
                out.certificate += "; " + std::to_string(extra_edges) + " edges routed over a handle between " +
                                   walk_text(pa.inner) + " and " + walk_text(inner_b_walk);
            return out;
        }
    }
    if (!simple_alignment) throw PreconditionError("every band alignment would create a parallel edge");
    throw Error("no band alignment realises the stated genus bound");
}

}  // namespace sgnm
