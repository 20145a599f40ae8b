#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sgnm {

// Vertices are labelled 1..n throughout the public interface.
using Vertex = int;

inline constexpr int kMaxVertices = 64;

struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Normalised edge with u < v.
inline Edge make_edge(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

std::string to_string(const Edge& e);

// Simple undirected graph on {1..n}, n <= 64. Immutable once built.
class LabeledGraph {
  public:
    LabeledGraph() = default;

    int n() const { return n_; }
    std::size_t m() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_edge(Vertex a, Vertex b) const { return (adj_[a - 1] >> (b - 1)) & 1u; }
    int degree(Vertex v) const;
    // Bit (w-1) set iff w is adjacent to v.
    std::uint64_t neighbor_mask(Vertex v) const { return adj_[v - 1]; }
    std::vector<Vertex> neighbors(Vertex v) const;
    std::vector<int> degrees() const;
    int max_degree() const;

    LabeledGraph with_edge(Vertex a, Vertex b) const;
    LabeledGraph without_edge(Vertex a, Vertex b) const;
    // Induced subgraph on `vs`, relabelled by the increasing bijection onto 1..|vs|.
    LabeledGraph induced(std::span<const Vertex> vs) const;
    // Disjoint union; the vertices of `other` are shifted by n().
    LabeledGraph disjoint_union(const LabeledGraph& other) const;
    // Relabel: vertex v becomes perm[v-1].
    LabeledGraph relabeled(std::span<const Vertex> perm) const;

    static LabeledGraph from_adjacency(int n, std::span<const std::uint64_t> adj);

    friend bool operator==(const LabeledGraph& a, const LabeledGraph& b) {
        return a.n_ == b.n_ && a.adj_ == b.adj_;
    }

  private:
    friend LabeledGraph make_graph(int n, std::span<const Edge> edges);
    void rebuild_edges();

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::uint64_t> adj_;
};

// Validating constructor. Throws ConstructionError naming the offending pair.
LabeledGraph make_graph(int n, std::span<const Edge> edges);
inline LabeledGraph make_graph(int n, std::initializer_list<Edge> edges) {
    return make_graph(n, std::span<const Edge>(edges.begin(), edges.size()));
}
inline LabeledGraph make_graph(int n, const std::vector<Edge>& edges) {
    return make_graph(n, std::span<const Edge>(edges));
}

// Lexicographic index of the pair {u,v} among all pairs of {1..n}.
int edge_slot(Vertex u, Vertex v, int n);
Edge slot_edge(int slot, int n);
inline int slot_count(int n) { return n * (n - 1) / 2; }

// Common small graphs.
LabeledGraph complete_graph(int n);
LabeledGraph complete_bipartite(int a, int b);
LabeledGraph path_graph(int n);
LabeledGraph cycle_graph(int n);
LabeledGraph star_graph(int leaves);
LabeledGraph empty_graph(int n);

// ---------------------------------------------------------------- components

enum class ComponentKind { tree, unicyclic, multicyclic };

std::string_view to_string(ComponentKind k);

struct ComponentClass {
    ComponentKind kind = ComponentKind::tree;
    std::vector<Vertex> vertices;  // increasing
    std::size_t edges = 0;
};

// Components ordered by their smallest vertex.
std::vector<ComponentClass> components(const LabeledGraph& g);
bool is_connected(const LabeledGraph& g);
// Component index per vertex (index 0 unused).
std::vector<int> component_labels(const LabeledGraph& g);

struct BlockDecomposition {
    std::vector<std::vector<Edge>> blocks;  // each sorted; bridges appear as single-edge blocks
    std::vector<Edge> cut_edges;            // sorted
    std::vector<Vertex> cut_vertices;       // sorted
};

BlockDecomposition block_decomposition(const LabeledGraph& g);

// ---------------------------------------------------------------- patterns

inline constexpr int kDefaultPatternLimit = 8;

struct CopyOptions {
    bool induced = false;
    int pattern_limit = kDefaultPatternLimit;
};

// Number of subgraphs of g isomorphic to h.
std::uint64_t copies_of(const LabeledGraph& h, const LabeledGraph& g, CopyOptions opt = {});
struct CopyWitness {
    std::vector<Vertex> vertices;  // sorted
    std::vector<Edge> edges;       // sorted
    friend auto operator<=>(const CopyWitness&, const CopyWitness&) = default;
};

// Every distinct copy, sorted. Its size equals copies_of(h, g, opt).
std::vector<CopyWitness> copy_witnesses(const LabeledGraph& h, const LabeledGraph& g,
                                        CopyOptions opt = {});
std::uint64_t automorphism_count(const LabeledGraph& h);

// Number of connected components of g isomorphic to h.
std::uint64_t components_isomorphic_to(const LabeledGraph& h, const LabeledGraph& g,
                                       int pattern_limit = kDefaultPatternLimit);

inline constexpr int kDefaultCanonicalLimit = 10;

// Equal iff isomorphic. Byte 0 is n, the rest is the packed upper-triangle adjacency of the
// lexicographically smallest relabelling compatible with the refined degree partition.
std::string canonical_code(const LabeledGraph& g, int limit = kDefaultCanonicalLimit);
bool isomorphic(const LabeledGraph& a, const LabeledGraph& b);

// ---------------------------------------------------------------- graph6

// Short form only (n <= 62). "?" is the 0-vertex graph.
std::string to_graph6(const LabeledGraph& g);
LabeledGraph from_graph6(std::string_view line);

}  // namespace sgnm
