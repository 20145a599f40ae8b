#include "sgnm/graph.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "sgnm/errors.hpp"

namespace sgnm {

std::string to_string(const Edge& e) {
    return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}";
}

std::string_view to_string(ComponentKind k) {
    switch (k) {
        case ComponentKind::tree: return "tree";
        case ComponentKind::unicyclic: return "unicyclic";
        case ComponentKind::multicyclic: return "multicyclic";
    }
    return "?";
}

// ---------------------------------------------------------------- LabeledGraph

int LabeledGraph::degree(Vertex v) const { return std::popcount(adj_[v - 1]); }

std::vector<Vertex> LabeledGraph::neighbors(Vertex v) const {
    std::vector<Vertex> out;
    for (std::uint64_t mask = adj_[v - 1]; mask; mask &= mask - 1)
        out.push_back(std::countr_zero(mask) + 1);
    return out;
}

std::vector<int> LabeledGraph::degrees() const {
    std::vector<int> d(n_);
    for (int i = 0; i < n_; ++i) d[i] = std::popcount(adj_[i]);
    return d;
}

int LabeledGraph::max_degree() const {
    int best = 0;
    for (auto a : adj_) best = std::max(best, std::popcount(a));
    return best;
}

void LabeledGraph::rebuild_edges() {
    edges_.clear();
    for (int i = 0; i < n_; ++i) {
        std::uint64_t upper = adj_[i] & ~((std::uint64_t{2} << i) - 1);
        for (; upper; upper &= upper - 1) edges_.push_back({i + 1, std::countr_zero(upper) + 1});
    }
}

LabeledGraph LabeledGraph::from_adjacency(int n, std::span<const std::uint64_t> adj) {
    if (n < 0 || n > kMaxVertices) throw ConstructionError("vertex count out of range: " + std::to_string(n));
    LabeledGraph g;
    g.n_ = n;
    g.adj_.assign(adj.begin(), adj.end());
    g.adj_.resize(n, 0);
    g.rebuild_edges();
    return g;
}

LabeledGraph make_graph(int n, std::span<const Edge> edges) {
    if (n < 0 || n > kMaxVertices) throw ConstructionError("vertex count out of range: " + std::to_string(n));
    LabeledGraph g;
    g.n_ = n;
    g.adj_.assign(n, 0);
    for (const Edge& e : edges) {
        if (e.u < 1 || e.u > n || e.v < 1 || e.v > n)
            throw ConstructionError("vertex out of range in pair " + to_string(e));
        if (e.u == e.v) throw ConstructionError("loop " + to_string(e));
        if (g.has_edge(e.u, e.v)) throw ConstructionError("duplicate edge " + to_string(e));
        g.adj_[e.u - 1] |= std::uint64_t{1} << (e.v - 1);
        g.adj_[e.v - 1] |= std::uint64_t{1} << (e.u - 1);
    }
    g.rebuild_edges();
    return g;
}

LabeledGraph LabeledGraph::with_edge(Vertex a, Vertex b) const {
    if (a == b || has_edge(a, b)) throw ConstructionError("cannot add " + to_string(make_edge(a, b)));
    auto adj = adj_;
    adj[a - 1] |= std::uint64_t{1} << (b - 1);
    adj[b - 1] |= std::uint64_t{1} << (a - 1);
    return from_adjacency(n_, adj);
}

LabeledGraph LabeledGraph::without_edge(Vertex a, Vertex b) const {
    if (!has_edge(a, b)) throw ConstructionError("cannot remove non-edge " + to_string(make_edge(a, b)));
    auto adj = adj_;
    adj[a - 1] &= ~(std::uint64_t{1} << (b - 1));
    adj[b - 1] &= ~(std::uint64_t{1} << (a - 1));
    return from_adjacency(n_, adj);
}

LabeledGraph LabeledGraph::induced(std::span<const Vertex> vs) const {
    std::vector<Vertex> sorted(vs.begin(), vs.end());
    std::sort(sorted.begin(), sorted.end());
    const int k = static_cast<int>(sorted.size());
    std::vector<std::uint64_t> adj(k, 0);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (has_edge(sorted[i], sorted[j])) {
                adj[i] |= std::uint64_t{1} << j;
                adj[j] |= std::uint64_t{1} << i;
            }
    return from_adjacency(k, adj);
}

LabeledGraph LabeledGraph::disjoint_union(const LabeledGraph& other) const {
    const int total = n_ + other.n_;
    if (total > kMaxVertices) throw ConstructionError("disjoint union exceeds vertex cap");
    std::vector<std::uint64_t> adj(adj_);
    for (auto a : other.adj_) adj.push_back(a << n_);
    return from_adjacency(total, adj);
}

LabeledGraph LabeledGraph::relabeled(std::span<const Vertex> perm) const {
    std::vector<std::uint64_t> adj(n_, 0);
    for (const Edge& e : edges_) {
        const int a = perm[e.u - 1] - 1, b = perm[e.v - 1] - 1;
        adj[a] |= std::uint64_t{1} << b;
        adj[b] |= std::uint64_t{1} << a;
    }
    return from_adjacency(n_, adj);
}

int edge_slot(Vertex u, Vertex v, int n) {
    if (u > v) std::swap(u, v);
    // pairs (1,*) come first: (u-1) rows precede, row r has n-r entries
    const int before = (u - 1) * n - (u - 1) * u / 2;
    return before + (v - u - 1);
}

Edge slot_edge(int slot, int n) {
    int u = 1;
    while (slot >= n - u) {
        slot -= n - u;
        ++u;
    }
    return {u, u + 1 + slot};
}

LabeledGraph complete_graph(int n) {
    std::vector<Edge> es;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) es.push_back({i, j});
    return make_graph(n, es);
}

LabeledGraph complete_bipartite(int a, int b) {
    std::vector<Edge> es;
    for (int i = 1; i <= a; ++i)
        for (int j = 1; j <= b; ++j) es.push_back({i, a + j});
    return make_graph(a + b, es);
}

LabeledGraph path_graph(int n) {
    std::vector<Edge> es;
    for (int i = 1; i < n; ++i) es.push_back({i, i + 1});
    return make_graph(n, es);
}

LabeledGraph cycle_graph(int n) {
    std::vector<Edge> es;
    for (int i = 1; i < n; ++i) es.push_back({i, i + 1});
    es.push_back({1, n});
    return make_graph(n, es);
}

LabeledGraph star_graph(int leaves) {
    std::vector<Edge> es;
    for (int i = 2; i <= leaves + 1; ++i) es.push_back({1, i});
    return make_graph(leaves + 1, es);
}

LabeledGraph empty_graph(int n) { return make_graph(n, std::vector<Edge>{}); }

// ---------------------------------------------------------------- components

std::vector<int> component_labels(const LabeledGraph& g) {
    std::vector<int> label(g.n() + 1, -1);
    int next = 0;
    for (Vertex s = 1; s <= g.n(); ++s) {
        if (label[s] >= 0) continue;
        std::uint64_t seen = std::uint64_t{1} << (s - 1), frontier = seen;
        while (frontier) {
            std::uint64_t grow = 0;
            for (std::uint64_t f = frontier; f; f &= f - 1) grow |= g.neighbor_mask(std::countr_zero(f) + 1);
            frontier = grow & ~seen;
            seen |= grow;
        }
        for (std::uint64_t f = seen; f; f &= f - 1) label[std::countr_zero(f) + 1] = next;
        ++next;
    }
    return label;
}

std::vector<ComponentClass> components(const LabeledGraph& g) {
    const auto label = component_labels(g);
    int count = 0;
    for (Vertex v = 1; v <= g.n(); ++v) count = std::max(count, label[v] + 1);
    std::vector<ComponentClass> out(count);
    for (Vertex v = 1; v <= g.n(); ++v) out[label[v]].vertices.push_back(v);
    for (const Edge& e : g.edges()) ++out[label[e.u]].edges;
    for (auto& c : out) {
        const auto nv = c.vertices.size();
        c.kind = c.edges + 1 == nv ? ComponentKind::tree
                 : c.edges == nv   ? ComponentKind::unicyclic
                                   : ComponentKind::multicyclic;
    }
    return out;
}

bool is_connected(const LabeledGraph& g) {
    if (g.n() <= 1) return true;
    const auto label = component_labels(g);
    return std::all_of(label.begin() + 1, label.end(), [](int l) { return l == 0; });
}

BlockDecomposition block_decomposition(const LabeledGraph& g) {
    const int n = g.n();
    BlockDecomposition out;
    std::vector<int> disc(n + 1, 0), low(n + 1, 0);
    std::vector<Edge> stack;
    std::set<Vertex> cuts;
    int timer = 0;

    std::function<void(Vertex, Vertex)> dfs = [&](Vertex v, Vertex parent) {
        disc[v] = low[v] = ++timer;
        int children = 0;
        for (Vertex w : g.neighbors(v)) {
            if (w == parent) continue;
            if (disc[w] == 0) {
                ++children;
                stack.push_back(make_edge(v, w));
                dfs(w, v);
                low[v] = std::min(low[v], low[w]);
                if (low[w] >= disc[v]) {
                    if (parent != 0 || children > 1) cuts.insert(v);
                    std::vector<Edge> block;
                    const Edge top = make_edge(v, w);
                    while (true) {
                        Edge e = stack.back();
                        stack.pop_back();
                        block.push_back(e);
                        if (e == top) break;
                    }
                    std::sort(block.begin(), block.end());
                    if (block.size() == 1) out.cut_edges.push_back(block.front());
                    out.blocks.push_back(std::move(block));
                }
            } else if (disc[w] < disc[v]) {
                stack.push_back(make_edge(v, w));
                low[v] = std::min(low[v], disc[w]);
            }
        }
        if (parent == 0 && children > 1) cuts.insert(v);
    };
    for (Vertex v = 1; v <= n; ++v)
        if (disc[v] == 0) dfs(v, 0);

    std::sort(out.blocks.begin(), out.blocks.end());
    std::sort(out.cut_edges.begin(), out.cut_edges.end());
    out.cut_vertices.assign(cuts.begin(), cuts.end());
    return out;
}

// ---------------------------------------------------------------- patterns

namespace {

// Enumerates injective maps h -> g that preserve edges (and non-edges when induced).
class MonomorphismSearch {
  public:
    MonomorphismSearch(const LabeledGraph& h, const LabeledGraph& g, bool induced)
        : h_(h), g_(g), induced_(induced), image_(h.n() + 1, 0) {
        // Order: repeatedly take the vertex with most already-ordered neighbours, ties by degree.
        const int k = h.n();
        std::vector<bool> placed(k + 1, false);
        for (int step = 0; step < k; ++step) {
            Vertex best = 0;
            int best_links = -1, best_deg = -1;
            for (Vertex v = 1; v <= k; ++v) {
                if (placed[v]) continue;
                int links = 0;
                for (Vertex u : order_) links += h.has_edge(u, v);
                if (links > best_links || (links == best_links && h.degree(v) > best_deg)) {
                    best = v;
                    best_links = links;
                    best_deg = h.degree(v);
                }
            }
            placed[best] = true;
            order_.push_back(best);
        }
    }

    template <class Visit>
    void run(Visit&& visit) {
        if (h_.n() > g_.n()) return;
        extend(0, 0, visit);
    }

    const std::vector<Vertex>& image() const { return image_; }

  private:
    template <class Visit>
    void extend(int depth, std::uint64_t used, Visit& visit) {
        if (depth == h_.n()) {
            visit(image_);
            return;
        }
        const Vertex hv = order_[depth];
        std::uint64_t cand = g_.n() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g_.n()) - 1;
        cand &= ~used;
        for (int i = 0; i < depth; ++i) {
            const Vertex hu = order_[i];
            const std::uint64_t nb = g_.neighbor_mask(image_[hu]);
            if (h_.has_edge(hu, hv)) cand &= nb;
            else if (induced_) cand &= ~nb;
        }
        const int need = h_.degree(hv);
        for (; cand; cand &= cand - 1) {
            const Vertex gv = std::countr_zero(cand) + 1;
            if (g_.degree(gv) < need) continue;
            image_[hv] = gv;
            extend(depth + 1, used | (std::uint64_t{1} << (gv - 1)), visit);
        }
        image_[hv] = 0;
    }

    const LabeledGraph& h_;
    const LabeledGraph& g_;
    bool induced_;
    std::vector<Vertex> order_;
    std::vector<Vertex> image_;
};

void check_pattern(const LabeledGraph& h, int limit) {
    if (h.n() > limit)
        throw CapabilityError("pattern has " + std::to_string(h.n()) + " vertices, limit is " +
                              std::to_string(limit));
}

std::uint64_t count_monomorphisms(const LabeledGraph& h, const LabeledGraph& g, bool induced) {
    std::uint64_t count = 0;
    MonomorphismSearch search(h, g, induced);
    search.run([&](const std::vector<Vertex>&) { ++count; });
    return count;
}

}  // namespace

std::uint64_t automorphism_count(const LabeledGraph& h) { return count_monomorphisms(h, h, true); }

std::uint64_t copies_of(const LabeledGraph& h, const LabeledGraph& g, CopyOptions opt) {
    check_pattern(h, opt.pattern_limit);
    if (h.n() > g.n()) return 0;
    return count_monomorphisms(h, g, opt.induced) / automorphism_count(h);
}

std::vector<CopyWitness> copy_witnesses(const LabeledGraph& h, const LabeledGraph& g, CopyOptions opt) {
    check_pattern(h, opt.pattern_limit);
    std::set<CopyWitness> seen;
    MonomorphismSearch search(h, g, opt.induced);
    search.run([&](const std::vector<Vertex>& image) {
        CopyWitness w;
        for (Vertex v = 1; v <= h.n(); ++v) w.vertices.push_back(image[v]);
        for (const Edge& e : h.edges()) w.edges.push_back(make_edge(image[e.u], image[e.v]));
        std::sort(w.vertices.begin(), w.vertices.end());
        std::sort(w.edges.begin(), w.edges.end());
        seen.insert(std::move(w));
    });
    return {seen.begin(), seen.end()};
}

std::uint64_t components_isomorphic_to(const LabeledGraph& h, const LabeledGraph& g, int pattern_limit) {
    check_pattern(h, pattern_limit);
    const std::string target = canonical_code(h, std::max(pattern_limit, kDefaultCanonicalLimit));
    std::uint64_t count = 0;
    for (const auto& c : components(g)) {
        if (static_cast<int>(c.vertices.size()) != h.n() || c.edges != h.m()) continue;
        if (canonical_code(g.induced(c.vertices), std::max(pattern_limit, kDefaultCanonicalLimit)) == target)
            ++count;
    }
    return count;
}

// ---------------------------------------------------------------- canonical form

namespace {

// Colour refinement starting from degrees; colours are ranks of sorted signatures so that the
// resulting ordered partition is itself an isomorphism invariant.
std::vector<int> refine_colours(const LabeledGraph& g) {
    const int n = g.n();
    std::vector<int> colour(n);
    for (int i = 0; i < n; ++i) colour[i] = g.degree(i + 1);
    int classes = -1;
    while (true) {
        std::vector<std::pair<int, std::vector<int>>> sig(n);
        for (int i = 0; i < n; ++i) {
            sig[i].first = colour[i];
            for (Vertex w : g.neighbors(i + 1)) sig[i].second.push_back(colour[w - 1]);
            std::sort(sig[i].second.begin(), sig[i].second.end());
        }
        std::vector<std::pair<int, std::vector<int>>> distinct(sig);
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (int i = 0; i < n; ++i)
            colour[i] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), sig[i]) - distinct.begin());
        const int now = static_cast<int>(distinct.size());
        if (now == classes) break;
        classes = now;
    }
    return colour;
}

class CanonicalSearch {
  public:
    explicit CanonicalSearch(const LabeledGraph& g) : g_(g), n_(g.n()) {
        const auto colour = refine_colours(g);
        std::vector<int> verts(n_);
        std::iota(verts.begin(), verts.end(), 0);
        std::stable_sort(verts.begin(), verts.end(), [&](int a, int b) { return colour[a] < colour[b]; });
        cell_of_pos_.resize(n_);
        for (int p = 0; p < n_; ++p) cell_of_pos_[p] = colour[verts[p]];
        cell_members_.resize(n_);
        for (int v = 0; v < n_; ++v) cell_members_[colour[v]] |= std::uint64_t{1} << v;
        current_.assign(n_, 0);
        best_.assign(n_, 0);
        at_pos_.assign(n_, 0);
    }

    std::string run() {
        if (n_ > 0) descend(0, 0);
        std::string code(1, static_cast<char>(n_));
        int bit = 0;
        unsigned char acc = 0;
        for (int p = 1; p < n_; ++p)
            for (int i = 0; i < p; ++i) {
                acc = static_cast<unsigned char>((acc << 1) | ((best_[p] >> (p - 1 - i)) & 1u));
                if (++bit == 8) {
                    code.push_back(static_cast<char>(acc));
                    bit = 0;
                    acc = 0;
                }
            }
        if (bit) code.push_back(static_cast<char>(acc << (8 - bit)));
        return code;
    }

  private:
    // Column p holds adjacency of position p to positions 0..p-1 (position 0 most significant).
    int compare_prefix(int upto) const {
        for (int p = 0; p <= upto; ++p)
            if (current_[p] != best_[p]) return current_[p] < best_[p] ? -1 : 1;
        return 0;
    }

    void descend(int pos, std::uint64_t used) {
        if (pos == n_) {
            if (!have_best_ || compare_prefix(n_ - 1) < 0) {
                best_ = current_;
                have_best_ = true;
            }
            return;
        }
        for (std::uint64_t cand = cell_members_[cell_of_pos_[pos]] & ~used; cand; cand &= cand - 1) {
            const int v = std::countr_zero(cand);
            std::uint64_t col = 0;
            const std::uint64_t nb = g_.neighbor_mask(v + 1);
            for (int i = 0; i < pos; ++i) col = (col << 1) | ((nb >> at_pos_[i]) & 1u);
            current_[pos] = col;
            at_pos_[pos] = v;
            if (have_best_ && compare_prefix(pos) > 0) continue;
            descend(pos + 1, used | (std::uint64_t{1} << v));
        }
    }

    const LabeledGraph& g_;
    int n_;
    std::vector<int> cell_of_pos_;
    std::vector<std::uint64_t> cell_members_;
    std::vector<std::uint64_t> current_, best_;
    std::vector<int> at_pos_;
    bool have_best_ = false;
};

}  // namespace

std::string canonical_code(const LabeledGraph& g, int limit) {
    if (g.n() > limit)
        throw CapabilityError("canonical form requested for n=" + std::to_string(g.n()) + ", limit is " +
                              std::to_string(limit));
    return CanonicalSearch(g).run();
}

bool isomorphic(const LabeledGraph& a, const LabeledGraph& b) {
    if (a.n() != b.n() || a.m() != b.m()) return false;
    auto da = a.degrees(), db = b.degrees();
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    if (da != db) return false;
    return canonical_code(a, kMaxVertices) == canonical_code(b, kMaxVertices);
}

// ---------------------------------------------------------------- graph6

std::string to_graph6(const LabeledGraph& g) {
    const int n = g.n();
    if (n > 62) throw CapabilityError("graph6 short form supports n <= 62");
    std::string out(1, static_cast<char>(n + 63));
    int bit = 0, acc = 0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            acc = (acc << 1) | (g.has_edge(i + 1, j + 1) ? 1 : 0);
            if (++bit == 6) {
                out.push_back(static_cast<char>(acc + 63));
                bit = acc = 0;
            }
        }
    if (bit) out.push_back(static_cast<char>((acc << (6 - bit)) + 63));
    return out;
}

LabeledGraph from_graph6(std::string_view line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
    if (line.empty()) throw DecodeError("empty graph6 line", 0);
    const int first = static_cast<unsigned char>(line[0]);
    if (first == 126) throw DecodeError("graph6 long form (n > 62) not supported", 0);
    if (first < 63 || first > 125) throw DecodeError("invalid graph6 size byte", 0);
    const int n = first - 63;
    const std::size_t bits = static_cast<std::size_t>(n) * (n - 1) / 2;
    const std::size_t need = (bits + 5) / 6;
    if (line.size() - 1 < need) throw DecodeError("truncated graph6 line", line.size());
    if (line.size() - 1 > need) throw DecodeError("trailing bytes in graph6 line", 1 + need);
    std::vector<std::uint64_t> adj(n, 0);
    std::size_t k = 0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i, ++k) {
            const int c = static_cast<unsigned char>(line[1 + k / 6]);
            if (c < 63 || c > 126) throw DecodeError("invalid graph6 data byte", 1 + k / 6);
            if (((c - 63) >> (5 - k % 6)) & 1) {
                adj[i] |= std::uint64_t{1} << j;
                adj[j] |= std::uint64_t{1} << i;
            }
        }
    for (std::size_t b = 0; b < need; ++b) {
        const int c = static_cast<unsigned char>(line[1 + b]);
        if (c < 63 || c > 126) throw DecodeError("invalid graph6 data byte", 1 + b);
    }
    if (need > 0) {
        const int pad = static_cast<int>(need * 6 - bits);
        const int c = static_cast<unsigned char>(line[need]) - 63;
        if (c & ((1 << pad) - 1)) throw DecodeError("nonzero graph6 padding bits", need);
    }
    return LabeledGraph::from_adjacency(n, adj);
}

}  // namespace sgnm
