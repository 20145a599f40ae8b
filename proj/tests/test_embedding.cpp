#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sgnm/embedding.hpp"
#include "sgnm/errors.hpp"

using namespace sgnm;

namespace {

RotationSystem to_rotation(const std::vector<std::vector<int>>& rot) { return RotationSystem{rot}; }

RotationSystem random_rotation(const LabeledGraph& g, std::mt19937_64& rng) {
    RotationSystem r;
    for (Vertex v = 1; v <= g.n(); ++v) {
        auto nb = g.neighbors(v);
        std::shuffle(nb.begin(), nb.end(), rng);
        r.order.push_back(nb);
    }
    return r;
}

const GenusOptions kDirect{.use_blocks = false, .planarity_fast_path = false};

}  // namespace

TEST_CASE("trace_faces on small graphs") {
    auto k3 = complete_graph(3);
    auto s = trace_faces(k3, to_rotation({{2, 3}, {1, 3}, {1, 2}}));
    CHECK(s.faces.size() == 2);
    CHECK(s.face_sizes == std::vector<int>{3, 3});
    CHECK(s.genus == 0);

    std::mt19937_64 rng(3);
    for (int n = 2; n <= 8; ++n) {
        auto t = oracle::random_tree(rng, n);
        auto st = trace_faces(t, random_rotation(t, rng));
        CHECK(st.faces.size() == 1);
        CHECK(st.face_sizes[0] == 2 * (n - 1));
        CHECK(st.genus == 0);
    }
    CHECK_THROWS_AS(trace_faces(empty_graph(2), to_rotation({{}, {}})), PreconditionError);
}

TEST_CASE("K4 has a rotation with two faces") {
    // found by enumerating all 3!^4 rotation systems
    auto k4 = complete_graph(4);
    bool found = false;
    oracle::for_each_rotation(k4, [&](const auto& rot) {
        if (found || oracle::face_count(4, rot) != 2) return;
        found = true;
        auto s = trace_faces(k4, to_rotation(rot));
        CHECK(s.genus == 1);
        CHECK(s.face_sizes[0] + s.face_sizes[1] == 12);
    });
    CHECK(found);
}

TEST_CASE("known genera") {
    CHECK(oracle::exhaustive_genus(complete_graph(5)) == 1);
    CHECK(oracle::exhaustive_genus(complete_bipartite(3, 3)) == 1);
    CHECK(min_genus(complete_graph(5)).genus == 1);
    CHECK(min_genus(complete_bipartite(3, 3)).genus == 1);
    CHECK(min_genus(complete_graph(5), kDirect).genus == 1);
    CHECK(min_genus(path_graph(6)).genus == 0);
    CHECK(min_genus(complete_graph(6)).genus == 1);
    CHECK(min_genus(complete_graph(6), kDirect).genus == 1);
    // two K5 blocks sharing a vertex
    std::vector<Edge> es;
    for (int i = 1; i <= 5; ++i)
        for (int j = i + 1; j <= 5; ++j) {
            es.push_back({i, j});
            es.push_back({i + 4, j + 4});
        }
    auto two = make_graph(9, es);
    auto r = min_genus(two);
    CHECK(r.genus == 2);
    CHECK(embedding_genus(two, r.witness) == 2);
}

TEST_CASE("is_genus_at_most") {
    CHECK_FALSE(is_genus_at_most(complete_graph(5), 0));
    CHECK(is_genus_at_most(complete_graph(5), 1));
    CHECK_FALSE(is_genus_at_most(complete_graph(5), 0, kDirect));
    CHECK(is_genus_at_most(complete_graph(5), 1, kDirect));
    CHECK(is_genus_at_most(empty_graph(5), 0));
    std::mt19937_64 rng(9);
    CHECK(is_genus_at_most(oracle::random_tree(rng, 9), 0));
    CHECK_FALSE(is_genus_at_most(complete_graph(8), 1));
    CHECK(is_genus_at_most(complete_graph(8), 2));
}

TEST_CASE("budget exhaustion reports bounds") {
    GenusOptions tiny{.budget = 10, .use_blocks = false, .planarity_fast_path = false};
    try {
        min_genus(complete_graph(8), tiny);
        FAIL("expected budget error");
    } catch (const BudgetExceeded& e) {
        CHECK(e.lower == 2);
        CHECK(e.upper >= 2);
    }
}

TEST_CASE("max_face_size") {
    std::mt19937_64 rng(21);
    for (int n = 2; n <= 8; ++n) CHECK(max_face_size(oracle::random_tree(rng, n), 0) == 2 * (n - 1));
    CHECK(max_face_size(complete_graph(3), 0) == 3);
    auto two = make_graph(6, {{1, 2}, {2, 3}, {1, 3}, {4, 5}, {5, 6}, {4, 6}});
    CHECK(max_face_size(two, 0) == 6);
    CHECK(max_face_size(empty_graph(3), 0) == 0);
    CHECK_THROWS_AS(max_face_size(complete_graph(5), 0), PreconditionError);
    // K4 on the torus: the exhaustive maximum over genus-1 rotations
    int best = 0;
    oracle::for_each_rotation(complete_graph(4), [&](const auto& rot) {
        auto s = trace_faces(complete_graph(4), to_rotation(rot));
        best = std::max(best, s.max_face_size());
    });
    CHECK(max_face_size(complete_graph(4), 1) == best);
    CHECK(max_face_size(complete_graph(4), 0) == 3);
}

TEST_CASE("property: face accounting and witness re-tracing") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        auto g = oracle::random_connected_graph(rng, n, 0.5);
        auto s = trace_faces(g, random_rotation(g, rng));
        int total = 0;
        for (int f : s.face_sizes) total += f;
        CHECK(total == 2 * static_cast<int>(g.m()));
        CHECK(n - static_cast<int>(g.m()) + static_cast<int>(s.faces.size()) == 2 - 2 * s.genus);

        auto r = min_genus(g);
        CHECK(is_valid_rotation(g, r.witness));
        CHECK(embedding_genus(g, r.witness) == r.genus);
        CHECK(r.genus >= euler_genus_lower_bound(n, g.m()));
        CHECK(r.genus == min_genus(g, kDirect).genus);
    }
}

TEST_CASE("parallel and serial searches agree") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = oracle::random_connected_graph(rng, 7, 0.7);
        GenusOptions par = kDirect;
        par.policy = ExecPolicy::parallel;
        CHECK(min_genus(g, kDirect).genus == min_genus(g, par).genus);
        CHECK(min_genus(g, kDirect).genus == min_genus(g, kDirect).genus);
    }
}

TEST_CASE("dump format") {
    auto s = trace_faces(complete_graph(3), to_rotation({{2, 3}, {1, 3}, {1, 2}}));
    auto text = dump_embedding(s);
    CHECK(text.rfind("genus 0 faces 2\n", 0) == 0);
}
