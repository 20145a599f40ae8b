#pragma once

// Branch-and-bound over rotation systems of one connected graph.

#include <cstdint>
#include <span>
#include <vector>

#include "sgnm/embedding.hpp"
#include "sgnm/graph.hpp"

namespace sgnm::detail {

// Connected graph on local vertices 0..nv-1.
struct LocalGraph {
    int nv = 0;
    std::size_t m = 0;
    std::vector<std::vector<int>> nbrs;
    std::vector<Vertex> label;  // local -> global vertex
};

LocalGraph local_graph(const LabeledGraph& g, std::span<const Vertex> vertices);
LocalGraph local_graph(std::span<const Edge> edges);

enum class Objective {
    max_faces,         // metric = number of faces
    max_largest_face,  // metric = largest face size, subject to faces >= min_faces
};

struct SearchSpec {
    Objective objective = Objective::max_faces;
    int accept_above = -1;  // only metrics strictly above this are solutions
    int stop_at = 1 << 30;  // stop once a solution reaches this metric
    int min_faces = 0;
};

struct SearchOutcome {
    bool found = false;
    bool budget_exhausted = false;
    int best = -1;
    std::vector<std::vector<int>> rotation;  // local neighbour cycles of the best solution
    std::uint64_t nodes = 0;
};

SearchOutcome search_rotations(const LocalGraph& g, const SearchSpec& spec, ExecPolicy policy,
                               std::uint64_t budget);

// Face count of a local rotation (one entry per local vertex).
int count_faces(const LocalGraph& g, const std::vector<std::vector<int>>& rotation);

}  // namespace sgnm::detail

