#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sgnm/embedding.hpp"
#include "sgnm/graph.hpp"

namespace sgnm {

struct PendantStats {
    int vertices = 0;  // degree-1 vertices
    int edges = 0;     // edges incident to a degree-1 vertex
};

PendantStats pendant_stats(const LabeledGraph& g);

// H appears at W: the increasing bijection [|H|] -> W is an isomorphism onto G[W], and exactly one
// edge leaves W, at its smallest vertex.
struct Appearance {
    std::vector<Vertex> vertices;  // W, increasing
    Vertex root = 0;
    Edge connecting_edge;
    friend bool operator==(const Appearance& a, const Appearance& b) { return a.vertices == b.vertices; }
};

// Requires h connected and |h| < n. Sorted by W.
std::vector<Appearance> appearances(const LabeledGraph& h, const LabeledGraph& g);

// Induced copies of connected h joined to the rest of g by exactly one edge (any labelling).
std::vector<std::vector<Vertex>> pendant_copies(const LabeledGraph& h, const LabeledGraph& g);

inline constexpr int kDisjointExactCap = 24;

// Maximum number of pairwise vertex-disjoint appearances. Each connected piece of the overlap
// graph above kDisjointExactCap members raises BudgetExceeded carrying the greedy lower bound.
int max_vertex_disjoint_appearances(const LabeledGraph& h, const LabeledGraph& g);

struct TriangulatedAppearance {
    std::vector<Vertex> vertices;       // W, increasing
    std::array<Vertex, 3> boundary{};   // r1, r2, r3 in W
    std::array<Vertex, 3> anchors{};    // v1, v2, v3 outside W, a triangle
    std::vector<Edge> total_edges;      // E(G[W]) plus the six connecting edges, sorted
    bool rooted = false;                // r's are the three lowest labels of W
};

// Triangulated appearances of the connected pattern t.
std::vector<TriangulatedAppearance> triangulated_appearances(const LabeledGraph& t, const LabeledGraph& g,
                                                             bool rooted_only = false);
// Triangulated appearances of any connected graph on `order` vertices.
std::vector<TriangulatedAppearance> triangulated_appearances_of_order(int order, const LabeledGraph& g);

int max_totally_edge_disjoint_tri_appearances(const LabeledGraph& t, const LabeledGraph& g);

// Non-edges whose addition keeps genus <= bound. Requires is_genus_at_most(g, bound).
std::vector<Edge> addable_nonedges(const LabeledGraph& g, int bound, const GenusOptions& opt = {});

// Triangles of g with a vertex of degree at most 6.
int good_triangles(const LabeledGraph& g);
int triangle_count(const LabeledGraph& g);

struct Mass {
    int vertices = 0;
    int edges = 0;
};

// Vertices and edges in tree or unicyclic components.
Mass non_multicyclic_mass(const LabeledGraph& g);

struct StatReport {
    int n = 0;
    int m = 0;
    int genus_bound = 0;
    int pendant_edges = 0;
    int pendant_vertices = 0;
    int max_degree = 0;
    int good_triangles = 0;
    int cut_edges = 0;
    int addable_nonedges = 0;
    int non_multicyclic_vertices = 0;
    int non_multicyclic_edges = 0;
    std::map<std::string, int> appearance_counts;  // keyed by pattern graph6
};

StatReport stat_report(const LabeledGraph& g, int genus_bound, const std::vector<LabeledGraph>& patterns = {},
                       const GenusOptions& opt = {});

// Fixed column order: n,m,g,pendantEdges,pendantVertices,maxDegree,goodTriangles,cutEdges,
// addableNonEdges,nonMulticyclicVertices,nonMulticyclicEdges, then app:<graph6> per pattern.
std::string stat_csv_header(const StatReport& r);
std::string stat_csv_row(const StatReport& r);
std::string stat_json(const StatReport& r);

// Maximum pairwise-compatible subfamily: `conflicts[i]` lists members clashing with i.
// Exact per connected piece up to `cap` members, else BudgetExceeded with a greedy lower bound.
int max_compatible_family(const std::vector<std::vector<int>>& conflicts, int cap = kDisjointExactCap);

// Structural inequalities every graph of genus at most `genus_bound` satisfies: K1 appearances
// match pendant vertices, a pendant copy of order k meets at most k-1 others, a triangulated
// appearance of order t meets at most C(t+3,3) others, 2c < 3n-m+6g for c cut edges, and the
// good-triangle floor for connected graphs. One message per violation; empty when all hold.
std::vector<std::string> invariant_violations(const LabeledGraph& g, int genus_bound, int max_pattern_order = 4);

// Integer-valued graph statistic; indicators take the values 0 and 1.
using GraphStatistic = std::function<long long(const LabeledGraph&)>;

// Statistics addressable by name from the command line and the census. `genus_bound` matters only
// to the statistics defined relative to a surface (maxFaceSize, addableNonEdges).
// Unknown names raise PreconditionError.
GraphStatistic named_statistic(std::string_view name, int genus_bound, const GenusOptions& opt = {});
const std::vector<std::string>& statistic_names();

}  // namespace sgnm
