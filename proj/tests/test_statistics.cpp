#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sgnm/errors.hpp"
#include "sgnm/statistics.hpp"
#include "sgnm/surgery.hpp"

using namespace sgnm;

namespace {

LabeledGraph figure_host() {
    return make_graph(8, {{6, 3}, {3, 2}, {2, 7}, {7, 4}, {1, 8}, {6, 1}, {3, 8}, {7, 5}, {2, 5}});
}
LabeledGraph figure_pattern() { return make_graph(4, {{1, 4}, {4, 2}, {4, 3}, {1, 3}}); }

LabeledGraph triangle_with_tail() { return make_graph(4, {{1, 2}, {2, 3}, {1, 3}, {3, 4}}); }

// Independent appearance search: try every vertex subset of the right size.
std::vector<std::vector<Vertex>> brute_appearances(const LabeledGraph& h, const LabeledGraph& g) {
    std::vector<std::vector<Vertex>> out;
    const int n = g.n();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        if (std::popcount(mask) != h.n()) continue;
        std::vector<Vertex> w;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) w.push_back(i + 1);
        bool iso = true;
        for (int a = 1; a <= h.n() && iso; ++a)
            for (int b = a + 1; b <= h.n() && iso; ++b) iso = h.has_edge(a, b) == g.has_edge(w[a - 1], w[b - 1]);
        if (!iso) continue;
        int leaving = 0;
        bool at_root = true;
        for (Vertex x : w)
            for (Vertex y : g.neighbors(x))
                if (!(mask >> (y - 1) & 1)) {
                    ++leaving;
                    at_root = at_root && x == w.front();
                }
        if (leaving == 1 && at_root) out.push_back(w);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("pendant_stats") {
    CHECK(pendant_stats(star_graph(3)).vertices == 3);
    CHECK(pendant_stats(star_graph(3)).edges == 3);
    CHECK(pendant_stats(path_graph(2)).vertices == 2);
    CHECK(pendant_stats(path_graph(2)).edges == 1);
    CHECK(pendant_stats(complete_graph(4)).vertices == 0);
    CHECK(pendant_stats(complete_graph(4)).edges == 0);
}

TEST_CASE("appearances") {
    CHECK(appearances(empty_graph(1), star_graph(3)).size() == 3);
    CHECK(appearances(path_graph(2), complete_graph(3)).empty());
    CHECK_THROWS_AS(appearances(empty_graph(2), star_graph(3)), PreconditionError);
    CHECK_THROWS_AS(appearances(complete_graph(4), complete_graph(4)), PreconditionError);

    const auto apps = appearances(figure_pattern(), figure_host());
    REQUIRE(apps.size() == 1);
    CHECK(apps[0].vertices == std::vector<Vertex>{2, 4, 5, 7});
    CHECK(apps[0].root == 2);
    CHECK(apps[0].connecting_edge == Edge{2, 3});

    // swapping the labels of two vertices inside W destroys the order-isomorphism
    for (auto [a, b] : {std::pair{4, 5}, std::pair{2, 7}, std::pair{5, 7}}) {
        std::vector<Vertex> perm(8);
        for (int v = 1; v <= 8; ++v) perm[v - 1] = v;
        std::swap(perm[a - 1], perm[b - 1]);
        const auto moved = appearances(figure_pattern(), figure_host().relabeled(perm));
        CHECK(std::none_of(moved.begin(), moved.end(),
                           [](const Appearance& x) { return x.vertices == std::vector<Vertex>{2, 4, 5, 7}; }));
    }
}

TEST_CASE("appearances agree with subset search") {
    std::mt19937_64 rng(41);
    const std::vector<LabeledGraph> patterns{empty_graph(1), path_graph(2), path_graph(3), make_graph(3, {{1, 3}, {2, 3}}),
                                             complete_graph(3), star_graph(3)};
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 5 + static_cast<int>(rng() % 5);
        const auto g = oracle::random_graph(rng, n, 0.25);
        for (const auto& h : patterns) {
            std::vector<std::vector<Vertex>> got;
            for (const auto& a : appearances(h, g)) got.push_back(a.vertices);
            INFO(to_graph6(g), " pattern ", to_graph6(h));
            CHECK(got == brute_appearances(h, g));
        }
    }
}

TEST_CASE("K1 appearances equal pendant vertices") {
    for (int n = 2; n <= 6; ++n) {
        const int slots = n * (n - 1) / 2;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots); ++mask) {
            const auto g = oracle::graph_from_mask(n, mask);
            REQUIRE(appearances(empty_graph(1), g).size() == static_cast<std::size_t>(pendant_stats(g).vertices));
        }
    }
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10000; ++trial) {
        const auto g = oracle::random_graph(rng, 7 + static_cast<int>(rng() % 10), 0.15);
        REQUIRE(appearances(empty_graph(1), g).size() == static_cast<std::size_t>(pendant_stats(g).vertices));
    }
}

TEST_CASE("vertex-disjoint appearances") {
    CHECK(max_vertex_disjoint_appearances(empty_graph(1), star_graph(3)) == 3);
    CHECK(max_vertex_disjoint_appearances(empty_graph(1), path_graph(3)) == 2);
    const auto two = triangle_with_tail().disjoint_union(triangle_with_tail());
    CHECK(max_vertex_disjoint_appearances(empty_graph(1), two) == 2);
}

TEST_CASE("max_compatible_family") {
    // a 5-cycle of conflicts has independence number 2
    CHECK(max_compatible_family({{1, 4}, {0, 2}, {1, 3}, {2, 4}, {3, 0}}) == 2);
    CHECK(max_compatible_family({{}, {}, {}}) == 3);
    std::vector<std::vector<int>> path(30);
    for (int i = 0; i + 1 < 30; ++i) {
        path[i].push_back(i + 1);
        path[i + 1].push_back(i);
    }
    try {
        max_compatible_family(path);
        FAIL("expected budget error");
    } catch (const BudgetExceeded& e) {
        CHECK(e.lower == 15);
    }
    CHECK(max_compatible_family(path, 40) == 15);
}

TEST_CASE("triangulated appearances") {
    const auto k4 = complete_graph(4);
    CHECK(triangulated_appearances(k4, k4).empty());
    CHECK(triangulated_appearances(complete_graph(3), path_graph(6)).empty());

    const auto r = *planar_rotation(k4);
    const auto once = attach_triangulated(k4, r, {1, 2, 3}, k4);
    const auto rooted = triangulated_appearances(k4, once.graph, true);
    // the construction is symmetric, so the original K4 can also qualify
    const auto fresh = std::find_if(rooted.begin(), rooted.end(),
                                    [](const auto& a) { return a.vertices == std::vector<Vertex>{5, 6, 7, 8}; });
    REQUIRE(fresh != rooted.end());
    CHECK(fresh->total_edges.size() == 12);
    CHECK(fresh->boundary == std::array<Vertex, 3>{5, 6, 7});
    CHECK(max_totally_edge_disjoint_tri_appearances(k4, once.graph) == 1);

    const auto with_k3 = attach_triangulated(k4, r, {1, 2, 4}, complete_graph(3));
    CHECK(triangulated_appearances(complete_graph(3), with_k3.graph).size() >= 1);

    // a second copy in a face the first one did not touch
    const auto twice = attach_triangulated(once.graph, *planar_rotation(once.graph), {1, 2, 4}, k4);
    CHECK(triangulated_appearances(k4, twice.graph, true).size() == 2);
    CHECK(max_totally_edge_disjoint_tri_appearances(k4, twice.graph) == 2);
}

TEST_CASE("addable_nonedges") {
    CHECK(addable_nonedges(empty_graph(2), 0) == std::vector<Edge>{{1, 2}});
    const auto k5e = complete_graph(5).without_edge(1, 2);
    CHECK(addable_nonedges(k5e, 0).empty());
    CHECK(addable_nonedges(k5e, 1) == std::vector<Edge>{{1, 2}});
    CHECK_THROWS_AS(addable_nonedges(complete_graph(5), 0), PreconditionError);

    // cross-component pairs always qualify; compare everything against direct recomputation
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 60; ++trial) {
        const auto g = oracle::random_graph(rng, 6, 0.5);
        const int bound = min_genus(g).genus;
        const auto got = addable_nonedges(g, bound);
        GenusOptions par;
        par.policy = ExecPolicy::parallel;
        CHECK(got == addable_nonedges(g, bound, par));
        std::vector<Edge> expect;
        for (Vertex a = 1; a <= 6; ++a)
            for (Vertex b = a + 1; b <= 6; ++b)
                if (!g.has_edge(a, b) && oracle::exhaustive_genus(g.with_edge(a, b)) <= bound) expect.push_back({a, b});
        CHECK(got == expect);
    }
}

TEST_CASE("triangles and masses") {
    CHECK(good_triangles(complete_graph(4)) == 4);
    CHECK(good_triangles(complete_graph(8)) == 0);
    CHECK(triangle_count(complete_graph(8)) == 56);
    CHECK(good_triangles(triangle_with_tail()) == 1);

    const auto tri_edge = make_graph(5, {{1, 2}, {2, 3}, {1, 3}, {4, 5}});
    CHECK(non_multicyclic_mass(tri_edge).vertices == 5);
    CHECK(non_multicyclic_mass(tri_edge).edges == 4);
    const auto k4_iso = complete_graph(4).disjoint_union(empty_graph(1));
    CHECK(non_multicyclic_mass(k4_iso).vertices == 1);
    CHECK(non_multicyclic_mass(k4_iso).edges == 0);
    std::mt19937_64 rng(2);
    const auto forest = oracle::random_tree(rng, 5).disjoint_union(oracle::random_tree(rng, 4));
    CHECK(non_multicyclic_mass(forest).vertices == 9);
    CHECK(non_multicyclic_mass(forest).edges == 7);
}

TEST_CASE("stat report serialization") {
    const auto r = stat_report(star_graph(3), 0, {empty_graph(1)});
    CHECK(stat_csv_header(r) ==
          "n,m,g,pendantEdges,pendantVertices,maxDegree,goodTriangles,cutEdges,addableNonEdges,"
          "nonMulticyclicVertices,nonMulticyclicEdges,app:@");
    CHECK(stat_csv_row(r) == "4,3,0,3,3,3,0,3,3,4,3,3");
    CHECK(stat_json(r) ==
          R"({"n":4,"m":3,"g":0,"pendantEdges":3,"pendantVertices":3,"maxDegree":3,"goodTriangles":0,)"
          R"("cutEdges":3,"addableNonEdges":3,"nonMulticyclicVertices":4,"nonMulticyclicEdges":3,"app:@":3})");
}

TEST_CASE("invariant checker flags planted violations") {
    CHECK(invariant_violations(complete_graph(4), 0).empty());
    CHECK(invariant_violations(path_graph(6), 0).empty());
    // a path has 2c = 2(n-1), which does not stay below 3n-m+6g once the bound is made negative
    CHECK_FALSE(invariant_violations(path_graph(6), -2).empty());
}

TEST_CASE("named statistics agree with the direct computations") {
    std::mt19937_64 rng(2024);
    const auto k3 = named_statistic("copyK3", 0);
    const auto k4 = named_statistic("copyK4", 0);
    const auto tri = named_statistic("triangles", 0);
    const auto pend = named_statistic("pendantEdges", 0);
    for (int trial = 0; trial < 300; ++trial) {
        const auto g = oracle::random_graph(rng, 4 + trial % 5, 0.55);
        CHECK(k4(g) == (copies_of(complete_graph(4), g) > 0));
        CHECK(k3(g) == (triangle_count(g) > 0));
        CHECK(tri(g) == triangle_count(g));
        CHECK(pend(g) == pendant_stats(g).edges);
    }
    CHECK(statistic_names().size() == 15);
    CHECK_THROWS_AS(named_statistic("diameter", 0), PreconditionError);
}
