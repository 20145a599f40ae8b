#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgnm/graph.hpp"

namespace sgnm {

enum class ExecPolicy { serial, parallel };

// Cyclic order of neighbours around each vertex. order[v-1] lists the neighbours of v;
// the successor of order[v-1][i] is order[v-1][(i+1) % deg].
struct RotationSystem {
    std::vector<std::vector<Vertex>> order;
};

bool is_valid_rotation(const LabeledGraph& g, const RotationSystem& r);

struct EmbeddingSummary {
    // Each face as its cyclic vertex walk; consecutive entries (wrapping) are the traversed darts.
    std::vector<std::vector<Vertex>> faces;
    std::vector<int> face_sizes;
    int genus = 0;

    int max_face_size() const;
};

// Faces of the cellular embedding given by `r`. Requires g connected with n >= 1.
EmbeddingSummary trace_faces(const LabeledGraph& g, const RotationSystem& r);

// Sum of the traced genera of all components under `r`.
int embedding_genus(const LabeledGraph& g, const RotationSystem& r);

// "genus <g> faces <F>" followed by one cyclic vertex walk per line.
std::string dump_embedding(const EmbeddingSummary& s);

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

struct GenusOptions {
    std::uint64_t budget = kDefaultBudget;  // branch nodes across the whole call
    ExecPolicy policy = ExecPolicy::serial;
    bool use_blocks = true;          // solve blocks independently and add
    bool planarity_fast_path = true;  // certify genus 0 with the planarity test
};

struct GenusResult {
    int genus = 0;
    RotationSystem witness;  // covers every vertex; re-traces to `genus`
    std::uint64_t nodes_explored = 0;
};

// ceil((m - 3n + 6) / 6) for n >= 3, else 0.
int euler_genus_lower_bound(int n, std::size_t m);

GenusResult min_genus(const LabeledGraph& g, const GenusOptions& opt = {});
bool is_genus_at_most(const LabeledGraph& g, int bound, const GenusOptions& opt = {});

// Largest face over embeddings of genus <= bound. Disconnected graphs use the nesting model:
// components are drawn inside one common face, so per-component largest faces add and genera add.
int max_face_size(const LabeledGraph& g, int bound, const GenusOptions& opt = {});

bool is_planar(const LabeledGraph& g);
// A planar rotation system when g is planar.
std::optional<RotationSystem> planar_rotation(const LabeledGraph& g);

}  // namespace sgnm
