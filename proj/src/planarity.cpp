#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>
#include <boost/graph/graph_traits.hpp>

#include <bit>
#include <vector>

#include "sgnm/embedding.hpp"

namespace sgnm {

namespace {

using BoostGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                         boost::property<boost::vertex_index_t, int>,
                                         boost::property<boost::edge_index_t, int>>;

BoostGraph to_boost(const LabeledGraph& g) {
    BoostGraph bg(g.n());
    int index = 0;
    for (const Edge& e : g.edges()) {
        auto [edge, ok] = boost::add_edge(e.u - 1, e.v - 1, bg);
        boost::put(boost::edge_index, bg, edge, index++);
    }
    return bg;
}

// Deletes vertices of degree at most one and smooths vertices of degree two (a parallel edge
// created by smoothing is dropped). Neither step changes planarity.
// Returns the surviving vertex mask; `adj` is updated in place.
std::uint64_t reduce(std::vector<std::uint64_t>& adj) {
    const int n = static_cast<int>(adj.size());
    std::uint64_t alive = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::uint64_t rest = alive; rest; rest &= rest - 1) {
            const int v = std::countr_zero(rest);
            const std::uint64_t nb = adj[v];
            const int d = std::popcount(nb);
            if (d > 2) continue;
            for (std::uint64_t w = nb; w; w &= w - 1) adj[std::countr_zero(w)] &= ~(std::uint64_t{1} << v);
            if (d == 2) {
                const int a = std::countr_zero(nb), b = 63 - std::countl_zero(nb);
                adj[a] |= std::uint64_t{1} << b;
                adj[b] |= std::uint64_t{1} << a;
            }
            adj[v] = 0;
            alive &= ~(std::uint64_t{1} << v);
            changed = true;
        }
    }
    return alive;
}

}  // namespace

bool is_planar(const LabeledGraph& g) {
    const int n = g.n();
    if (g.m() <= 8) return true;  // K3,3 has the fewest edges of any non-planar graph
    if (n >= 3 && static_cast<long>(g.m()) > 3L * n - 6) return false;
    std::vector<std::uint64_t> adj(n);
    for (Vertex v = 1; v <= n; ++v) adj[v - 1] = g.neighbor_mask(v);
    const std::uint64_t alive = reduce(adj);
    const int core_n = std::popcount(alive);
    long core_m = 0;
    for (auto a : adj) core_m += std::popcount(a);
    core_m /= 2;
    // every vertex of the core has degree at least three, so K5 and K3,3 are the only small cases
    if (core_n <= 4) return true;
    if (core_n == 5) return core_m < 10;
    if (core_m > 3L * core_n - 6) return false;
    if (core_m <= 8) return true;
    if (core_n == n) return boost::boyer_myrvold_planarity_test(to_boost(g));
    std::vector<Vertex> keep;
    for (std::uint64_t rest = alive; rest; rest &= rest - 1) keep.push_back(std::countr_zero(rest) + 1);
    std::vector<std::uint64_t> packed;
    for (Vertex v : keep) {
        std::uint64_t row = 0;
        for (std::size_t j = 0; j < keep.size(); ++j)
            if (adj[v - 1] >> (keep[j] - 1) & 1u) row |= std::uint64_t{1} << j;
        packed.push_back(row);
    }
    return boost::boyer_myrvold_planarity_test(to_boost(LabeledGraph::from_adjacency(core_n, packed)));
}

std::optional<RotationSystem> planar_rotation(const LabeledGraph& g) {
    if (g.n() == 0) return RotationSystem{};
    BoostGraph bg = to_boost(g);
    using EdgeDesc = boost::graph_traits<BoostGraph>::edge_descriptor;
    std::vector<std::vector<EdgeDesc>> embedding(g.n());
    if (!boost::boyer_myrvold_planarity_test(boost::boyer_myrvold_params::graph = bg,
                                             boost::boyer_myrvold_params::embedding = &embedding[0]))
        return std::nullopt;
    RotationSystem r;
    r.order.resize(g.n());
    for (int v = 0; v < g.n(); ++v)
        for (const EdgeDesc& e : embedding[v]) {
            const int a = static_cast<int>(boost::source(e, bg)), b = static_cast<int>(boost::target(e, bg));
            r.order[v].push_back((a == v ? b : a) + 1);
        }
    return r;
}

}  // namespace sgnm
