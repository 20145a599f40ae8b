#include "rotation_search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <map>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sgnm::detail {

LocalGraph local_graph(const LabeledGraph& g, std::span<const Vertex> vertices) {
    LocalGraph out;
    out.nv = static_cast<int>(vertices.size());
    out.label.assign(vertices.begin(), vertices.end());
    std::vector<int> index(g.n() + 1, -1);
    for (int i = 0; i < out.nv; ++i) index[vertices[i]] = i;
    out.nbrs.resize(out.nv);
    for (int i = 0; i < out.nv; ++i)
        for (Vertex w : g.neighbors(vertices[i]))
            if (index[w] >= 0) {
                out.nbrs[i].push_back(index[w]);
                ++out.m;
            }
    out.m /= 2;
    return out;
}

LocalGraph local_graph(std::span<const Edge> edges) {
    std::map<Vertex, int> index;
    for (const Edge& e : edges) {
        index.emplace(e.u, 0);
        index.emplace(e.v, 0);
    }
    LocalGraph out;
    for (auto& [v, i] : index) {
        i = out.nv++;
        out.label.push_back(v);
    }
    out.nbrs.resize(out.nv);
    for (const Edge& e : edges) {
        out.nbrs[index[e.u]].push_back(index[e.v]);
        out.nbrs[index[e.v]].push_back(index[e.u]);
    }
    out.m = edges.size();
    return out;
}

int count_faces(const LocalGraph& g, const std::vector<std::vector<int>>& rotation) {
    // dart (v, i): v -> rotation[v][i]
    std::vector<int> off(g.nv + 1, 0);
    for (int v = 0; v < g.nv; ++v) off[v + 1] = off[v] + static_cast<int>(rotation[v].size());
    auto pos = [&](int v, int w) {
        const auto& r = rotation[v];
        return static_cast<int>(std::find(r.begin(), r.end(), w) - r.begin());
    };
    std::vector<bool> seen(off[g.nv], false);
    int faces = 0;
    for (int v = 0; v < g.nv; ++v)
        for (int i = 0; i < static_cast<int>(rotation[v].size()); ++i) {
            if (seen[off[v] + i]) continue;
            ++faces;
            int cv = v, ci = i;
            while (!seen[off[cv] + ci]) {
                seen[off[cv] + ci] = true;
                const int w = rotation[cv][ci];
                const auto& rw = rotation[w];
                const int back = pos(w, cv);
                ci = (back + 1) % static_cast<int>(rw.size());
                cv = w;
            }
        }
    return faces;
}

namespace {

constexpr long kMaxTasks = 4096;

struct Shared {
    std::atomic<int> best;
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> stop{false};
    std::atomic<bool> exhausted{false};
    std::uint64_t budget = 0;
    std::mutex witness_lock;
    std::vector<int> witness_succ;
    int witness_metric = -1;
};

// Dart layout: out-darts of local vertex v are off[v] .. off[v+1]-1, dart off[v]+i goes to nbrs[v][i].
// Assigning the rotation successor succ(e) = f at v fixes the face-walk step rev(e) -> f.
// Face walks are grown as chains; a chain closing on itself is a completed face.
class Engine {
  public:
    Engine(const LocalGraph& g, const SearchSpec& spec, Shared& shared, const std::vector<int>& vorder,
           const std::vector<int>& first_choice)
        : g_(g), spec_(spec), shared_(shared), vorder_(vorder), first_choice_(first_choice) {
        off_.assign(g.nv + 1, 0);
        for (int v = 0; v < g.nv; ++v) off_[v + 1] = off_[v] + static_cast<int>(g.nbrs[v].size());
        const int nd = off_[g.nv];
        head_.resize(nd);
        rev_.resize(nd);
        for (int v = 0; v < g.nv; ++v)
            for (int i = 0; i < static_cast<int>(g.nbrs[v].size()); ++i) {
                const int w = g.nbrs[v][i];
                head_[off_[v] + i] = w;
                const auto& nw = g.nbrs[w];
                rev_[off_[v] + i] = off_[w] + static_cast<int>(std::find(nw.begin(), nw.end(), v) - nw.begin());
            }
        end_of_.resize(nd);
        len_.assign(nd, 1);
        for (int d = 0; d < nd; ++d) end_of_[d] = d;
        succ_.assign(nd, -1);
        pred_.assign(nd, -1);
        assigned_.assign(g.nv, 0);
        tail_.resize(nd);
        for (int v = 0; v < g.nv; ++v)
            for (int d = off_[v]; d < off_[v + 1]; ++d) tail_[d] = v;
        short_darts_ = nd;
        parity_ = ((2 - g.nv + static_cast<int>(g.m)) % 2 + 2) % 2;
        position_.assign(g.nv, 0);
        for (int i = 0; i < g.nv; ++i) position_[vorder_[i]] = i;
        // dart order inside each vertex: by search position of the far end
        local_order_.resize(g.nv);
        for (int v = 0; v < g.nv; ++v) {
            auto& lo = local_order_[v];
            for (int i = 0; i < static_cast<int>(g.nbrs[v].size()); ++i) lo.push_back(off_[v] + i);
            std::sort(lo.begin(), lo.end(), [&](int a, int b) { return position_[head_[a]] < position_[head_[b]]; });
        }
    }

    // first_choice: forced rotation (sequence of local dart indices after the first) for the
    // first one or two vertices of degree >= 3, used to split the tree into tasks.
    void run() {
        std::vector<Undo> undos;
        fix_initial(undos);
        if (!tick() && !prune()) branch();
        for (auto it = undos.rbegin(); it != undos.rend(); ++it) unlink(*it);
    }

    std::uint64_t flush_nodes() {
        shared_.nodes.fetch_add(pending_nodes_, std::memory_order_relaxed);
        pending_nodes_ = 0;
        return shared_.nodes.load(std::memory_order_relaxed);
    }

  private:
    struct Undo {
        int a, b, end_a, end_b, len_a, len_b;
        int closed, closed_darts, largest, long_chains, short_darts;
    };

    static int contribution_long(int len) { return len >= 3 ? 1 : 0; }
    static int contribution_short(int len) { return len >= 3 ? 0 : len; }

    Undo link(int x, int y) {
        const int a = end_of_[x];  // head of x's chain
        const int b = end_of_[y];  // tail of y's chain
        Undo u{a, b, end_of_[a], end_of_[b], len_[a], len_[b], closed_, closed_darts_, largest_, long_chains_,
               short_darts_};
        if (a == y) {
            const int l = len_[a];
            long_chains_ -= contribution_long(l);
            short_darts_ -= contribution_short(l);
            ++closed_;
            closed_darts_ += l;
            largest_ = std::max(largest_, l);
        } else {
            const int la = len_[a], lb = len_[y];
            long_chains_ -= contribution_long(la) + contribution_long(lb);
            short_darts_ -= contribution_short(la) + contribution_short(lb);
            const int l = la + lb;
            long_chains_ += contribution_long(l);
            short_darts_ += contribution_short(l);
            end_of_[a] = b;
            end_of_[b] = a;
            len_[a] = len_[b] = l;
        }
        return u;
    }

    void unlink(const Undo& u) {
        end_of_[u.a] = u.end_a;
        end_of_[u.b] = u.end_b;
        len_[u.a] = u.len_a;
        len_[u.b] = u.len_b;
        closed_ = u.closed;
        closed_darts_ = u.closed_darts;
        largest_ = u.largest;
        long_chains_ = u.long_chains;
        short_darts_ = u.short_darts;
    }

    int parity_floor(int x) const { return ((x - parity_) & 1) ? x - 1 : x; }

    int face_bound() const {
        const int open = off_[g_.nv] - closed_darts_;
        if (g_.m <= 1) return closed_ + (open > 0 ? 1 : 0);
        return parity_floor(closed_ + long_chains_ + short_darts_ / 3);
    }

    // True if this partial assignment cannot yield a recordable solution.
    bool prune() const {
        const int best = shared_.best.load(std::memory_order_relaxed);
        const int fb = face_bound();
        if (spec_.objective == Objective::max_faces) return fb <= best;
        if (fb < spec_.min_faces) return true;
        const int open = off_[g_.nv] - closed_darts_;
        int lb = largest_;
        if (open > 0) {
            const int still = std::max(1, spec_.min_faces - closed_);
            lb = std::max(lb, open - 3 * (still - 1));
        }
        return lb <= best;
    }

    bool tick() {
        if (++pending_nodes_ >= 4096) {
            if (flush_nodes() > shared_.budget) {
                shared_.exhausted.store(true);
                shared_.stop.store(true);
            }
        }
        return shared_.stop.load(std::memory_order_relaxed);
    }

    void leaf() {
        const int metric = spec_.objective == Objective::max_faces ? closed_ : largest_;
        if (spec_.objective == Objective::max_largest_face && closed_ < spec_.min_faces) return;
        int cur = shared_.best.load();
        while (metric > cur && !shared_.best.compare_exchange_weak(cur, metric)) {
        }
        if (metric <= cur) return;
        {
            std::lock_guard<std::mutex> lock(shared_.witness_lock);
            if (metric > shared_.witness_metric) {
                shared_.witness_metric = metric;
                shared_.witness_succ = succ_;
            }
        }
        if (metric >= spec_.stop_at) shared_.stop.store(true);
    }

    // Rotations fixed up front: the task prefix, then every vertex of degree one or two.
    void fix_initial(std::vector<Undo>& undos) {
        for (std::size_t i = 0; i < first_choice_.size();) {
            const int v = first_choice_[i];
            const auto& lo = local_order_[v];
            const int d = static_cast<int>(lo.size());
            std::vector<int> cycle{lo[0]};
            for (int k = 1; k < d; ++k) cycle.push_back(lo[first_choice_[i + k]]);
            assign_cycle(cycle, undos);
            i += d;
        }
        for (int v = 0; v < g_.nv; ++v) {
            const auto d = g_.nbrs[v].size();
            if (d == 0 || d > 2 || succ_[off_[v]] != -1) continue;
            assign_cycle(local_order_[v], undos);
        }
    }

    void assign(int cur, int f) {
        succ_[cur] = f;
        pred_[f] = cur;
        ++assigned_[tail_[cur]];
    }
    void unassign(int cur, int f) {
        succ_[cur] = -1;
        pred_[f] = -1;
        --assigned_[tail_[cur]];
    }

    void assign_cycle(const std::vector<int>& cycle, std::vector<Undo>& undos) {
        for (std::size_t k = 0; k < cycle.size(); ++k) {
            const int cur = cycle[k], f = cycle[(k + 1) % cycle.size()];
            assign(cur, f);
            undos.push_back(link(rev_[cur], f));
        }
    }

    // Face-driven branching: always continue the longest open face walk, so faces close early
    // and the face bound bites as soon as a walk grows too long.
    void branch() {
        if (shared_.stop.load(std::memory_order_relaxed)) return;
        const int nd = off_[g_.nv];
        int cur = -1, longest = -1;
        for (int d = 0; d < nd; ++d) {
            if (succ_[d] != -1) continue;
            // rev_[d] ends an open walk whose next step is the successor of d
            const int l = len_[rev_[d]];
            if (l > longest) {
                longest = l;
                cur = d;
            }
        }
        if (cur < 0) {
            leaf();
            return;
        }
        const int w = tail_[cur];
        const int deg = off_[w + 1] - off_[w];
        const bool last = assigned_[w] == deg - 1;
        const int start_of_walk = end_of_[rev_[cur]];
        int options[64];
        int count = 0;
        for (int f = off_[w]; f < off_[w + 1]; ++f) {
            if (pred_[f] != -1) continue;
            if (!last) {
                // the partial rotation at w must stay a set of paths until its final link
                int x = f;
                while (x != -1 && x != cur) x = succ_[x];
                if (x == cur) continue;
            }
            options[count++] = f;
        }
        // closing the current walk first tends to reach good embeddings sooner
        std::stable_partition(options, options + count, [&](int f) { return f == start_of_walk; });
        for (int i = 0; i < count; ++i) {
            const int f = options[i];
            assign(cur, f);
            const Undo u = link(rev_[cur], f);
            const bool stop = tick();
            if (!stop && !prune()) branch();
            unlink(u);
            unassign(cur, f);
            if (stop || shared_.stop.load(std::memory_order_relaxed)) return;
        }
    }

    const LocalGraph& g_;
    const SearchSpec& spec_;
    Shared& shared_;
    const std::vector<int>& vorder_;
    const std::vector<int>& first_choice_;

    std::vector<int> off_, head_, tail_, rev_, end_of_, len_, succ_, pred_, assigned_, position_;
    std::vector<std::vector<int>> local_order_;
    int closed_ = 0, closed_darts_ = 0, largest_ = 0, long_chains_ = 0, short_darts_ = 0;
    int parity_ = 0;
    std::uint64_t pending_nodes_ = 0;

  public:
    const std::vector<int>& local_order(int v) const { return local_order_[v]; }
    std::vector<std::vector<int>> rotation_from_succ(const std::vector<int>& succ) const {
        std::vector<std::vector<int>> rot(g_.nv);
        for (int v = 0; v < g_.nv; ++v) {
            const int d = static_cast<int>(g_.nbrs[v].size());
            if (d == 0) continue;
            int cur = off_[v];
            for (int k = 0; k < d; ++k) {
                rot[v].push_back(head_[cur]);
                cur = succ[cur];
            }
        }
        return rot;
    }
};

// Greedy order: each next vertex has the most already-ordered neighbours.
std::vector<int> search_order(const LocalGraph& g) {
    std::vector<int> order;
    std::vector<int> links(g.nv, 0);
    std::vector<bool> taken(g.nv, false);
    for (int step = 0; step < g.nv; ++step) {
        int best = -1;
        for (int v = 0; v < g.nv; ++v) {
            if (taken[v]) continue;
            if (best < 0 || links[v] > links[best] ||
                (links[v] == links[best] && g.nbrs[v].size() > g.nbrs[best].size()))
                best = v;
        }
        taken[best] = true;
        order.push_back(best);
        for (int w : g.nbrs[best]) ++links[w];
    }
    return order;
}

// Cyclic orders of positions 1..d-1 after position 0, honouring the mirror rule when asked.
std::vector<std::vector<int>> cyclic_orders(int d, bool mirror_rule) {
    std::vector<int> perm(d - 1);
    for (int i = 0; i < d - 1; ++i) perm[i] = i + 1;
    std::vector<std::vector<int>> out;
    do {
        if (mirror_rule) {
            const auto p1 = std::find(perm.begin(), perm.end(), 1);
            const auto p2 = std::find(perm.begin(), perm.end(), 2);
            if (p2 < p1) continue;
        }
        out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace

SearchOutcome search_rotations(const LocalGraph& g, const SearchSpec& spec, ExecPolicy policy,
                               std::uint64_t budget) {
    Shared shared;
    shared.best.store(spec.accept_above);
    shared.budget = budget;
    const auto vorder = search_order(g);

    // Split on up to two branching vertices of smallest degree, keeping the task count modest.
    // The first one also carries the mirror-symmetry restriction.
    std::vector<int> candidates;
    for (int v : vorder)
        if (g.nbrs[v].size() >= 3) candidates.push_back(v);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](int a, int b) { return g.nbrs[a].size() < g.nbrs[b].size(); });
    std::vector<int> branching;
    long task_count = 1;
    for (int v : candidates) {
        long orders = 1;
        for (int k = 2; k < static_cast<int>(g.nbrs[v].size()); ++k) orders *= k;
        if (!branching.empty() && (branching.size() == 2 || task_count * orders > kMaxTasks)) break;
        branching.push_back(v);
        task_count *= branching.size() == 1 ? std::max(1L, orders / 2) : orders;
    }
    std::vector<std::vector<int>> tasks{{}};
    for (std::size_t bi = 0; bi < branching.size(); ++bi) {
        const int v = branching[bi];
        std::vector<std::vector<int>> next;
        for (const auto& prefix : tasks)
            for (const auto& ord : cyclic_orders(static_cast<int>(g.nbrs[v].size()), bi == 0)) {
                auto t = prefix;
                t.push_back(v);
                t.insert(t.end(), ord.begin(), ord.end());
                next.push_back(std::move(t));
            }
        tasks = std::move(next);
    }

    auto run_task = [&](const std::vector<int>& task) {
        if (shared.stop.load()) return;
        Engine engine(g, spec, shared, vorder, task);
        engine.run();
        engine.flush_nodes();
    };

    const long ntasks = static_cast<long>(tasks.size());
    if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long t = 0; t < ntasks; ++t) run_task(tasks[t]);
    } else {
        for (long t = 0; t < ntasks; ++t) run_task(tasks[t]);
    }

    SearchOutcome out;
    out.nodes = shared.nodes.load();
    out.budget_exhausted = shared.exhausted.load();
    if (shared.witness_metric > spec.accept_above) {
        out.found = true;
        out.best = shared.witness_metric;
        std::vector<int> none;
        Engine decoder(g, spec, shared, vorder, none);
        out.rotation = decoder.rotation_from_succ(shared.witness_succ);
    }
    return out;
}

}  // namespace sgnm::detail
