#pragma once

#include <array>
#include <string>

#include "sgnm/embedding.hpp"
#include "sgnm/graph.hpp"

namespace sgnm {

// A rewritten graph together with the genus bound that the construction guarantees.
struct SurgeryResult {
    LabeledGraph graph;
    int edge_delta = 0;          // m(after) - m(before)
    int genus_bound_before = 0;
    int genus_bound_after = 0;
    RotationSystem witness;  // an embedding of `graph` whose traced genus is at most genus_bound_after
    std::string certificate;
};

// Copy of connected planar h on {n+1..n+|h|} (increasing labels), joined by the single edge v-(n+1).
SurgeryResult attach_appearance(const LabeledGraph& g, const LabeledGraph& h, Vertex v,
                                const GenusOptions& opt = {});

// Planar triangulation t drawn inside the triangular face `face` of the embedding (g, r). Vertices
// 1,2,3 of t (which must bound a face of t) become the boundary r1,r2,r3 and are joined to the face
// corners by the alternating hexagon r1v1, v1r2, r2v2, v2r3, r3v3, v3r1.
SurgeryResult attach_triangulated(const LabeledGraph& g, const RotationSystem& r, std::array<Vertex, 3> face,
                                  const LabeledGraph& t);

struct EmbeddedGraph {
    LabeledGraph graph;
    RotationSystem rotation;
};

// Two triangulations joined by six edges across their outer faces, plus up to six edges across a
// handle between the inner faces. B is relabelled to follow A.
SurgeryResult join_triangulations(const EmbeddedGraph& a, std::array<Vertex, 3> outer_a, std::array<Vertex, 3> inner_a,
                                  const EmbeddedGraph& b, std::array<Vertex, 3> outer_b, std::array<Vertex, 3> inner_b,
                                  int extra_edges);

// True if vertices 1,2,3 of the planar triangulation t bound a face.
bool is_facial_base_triangle(const LabeledGraph& t);

}  // namespace sgnm
