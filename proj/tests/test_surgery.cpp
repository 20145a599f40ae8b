#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sgnm/errors.hpp"
#include "sgnm/statistics.hpp"
#include "sgnm/surgery.hpp"

using namespace sgnm;

namespace {

EmbeddedGraph embedded(const LabeledGraph& g) { return {g, *planar_rotation(g)}; }

// The witness embedding must belong to the result and realise the stated bound.
void check_witness(const SurgeryResult& r) {
    REQUIRE(is_valid_rotation(r.graph, r.witness));
    CHECK(embedding_genus(r.graph, r.witness) <= r.genus_bound_after);
}

std::array<Vertex, 3> face_at(const EmbeddedGraph& e, std::size_t i) {
    const auto s = trace_faces(e.graph, e.rotation);
    const auto& w = s.faces.at(i);
    return {w[0], w[1], w[2]};
}

}  // namespace

TEST_CASE("attach_appearance") {
    const auto tri = attach_appearance(complete_graph(3), empty_graph(1), 1);
    CHECK(tri.graph == make_graph(4, {{1, 2}, {2, 3}, {1, 3}, {1, 4}}));
    CHECK(tri.edge_delta == 1);
    CHECK(tri.genus_bound_after == 0);
    check_witness(tri);

    const auto k5 = attach_appearance(complete_graph(5), complete_graph(3), 2);
    CHECK(k5.edge_delta == 4);
    CHECK(k5.genus_bound_before == 1);
    CHECK(k5.genus_bound_after == 1);
    CHECK(min_genus(k5.graph).genus == 1);
    CHECK(min_genus(k5.graph, {.use_blocks = false, .planarity_fast_path = false}).genus == 1);
    const auto apps = appearances(complete_graph(3), k5.graph);
    REQUIRE(apps.size() == 1);
    CHECK(apps[0].vertices == std::vector<Vertex>{6, 7, 8});

    const auto p3 = attach_appearance(empty_graph(1), path_graph(2), 1);
    CHECK(p3.graph == path_graph(3));
    CHECK(p3.genus_bound_after == 0);

    CHECK_THROWS_AS(attach_appearance(complete_graph(3), complete_graph(5), 1), PreconditionError);
    CHECK_THROWS_AS(attach_appearance(complete_graph(3), empty_graph(2), 1), PreconditionError);
}

TEST_CASE("attach_appearance preserves minimum genus") {
    std::mt19937_64 rng(77);
    const std::vector<LabeledGraph> patterns{empty_graph(1), path_graph(2), complete_graph(3)};
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const auto g = oracle::random_connected_graph(rng, n, 0.6);
        const auto& h = patterns[rng() % patterns.size()];
        const Vertex v = 1 + static_cast<int>(rng() % n);
        const auto r = attach_appearance(g, h, v);
        CHECK(r.graph.m() == g.m() + r.edge_delta);
        check_witness(r);
        CHECK(oracle::exhaustive_genus(r.graph) == oracle::exhaustive_genus(g));
        const auto apps = appearances(h, r.graph);
        CHECK(std::any_of(apps.begin(), apps.end(), [&](const Appearance& a) { return a.vertices.front() == n + 1; }));
    }
}

TEST_CASE("attach_triangulated") {
    const auto k4 = complete_graph(4);
    const auto r = attach_triangulated(k4, *planar_rotation(k4), {1, 2, 3}, k4);
    CHECK(r.graph.n() == 8);
    CHECK(r.graph.m() == 18);
    CHECK(r.edge_delta == 12);
    CHECK(r.genus_bound_after == 0);
    CHECK(is_planar(r.graph));
    check_witness(r);

    // genus-1 rotations of K4 whose two faces are not both triangles with distinct corners
    int rejected = 0;
    oracle::for_each_rotation(k4, [&](const auto& rot) {
        const RotationSystem rs{rot};
        const auto s = trace_faces(k4, rs);
        if (s.genus != 1 || std::count(s.face_sizes.begin(), s.face_sizes.end(), 3) > 0) return;
        CHECK_THROWS_AS(attach_triangulated(k4, rs, {1, 2, 3}, k4), PreconditionError);
        ++rejected;
    });
    CHECK(rejected > 0);

    CHECK_THROWS_AS(attach_triangulated(k4, *planar_rotation(k4), {1, 1, 2}, k4), PreconditionError);
    CHECK_THROWS_AS(attach_triangulated(k4, *planar_rotation(k4), {1, 2, 3}, path_graph(3)), PreconditionError);
}

TEST_CASE("attach_triangulated yields rooted appearances") {
    std::mt19937_64 rng(91);
    for (int trial = 0; trial < 60; ++trial) {
        const auto g = oracle::random_triangulation(rng, 3 + static_cast<int>(rng() % 3));
        const auto t = oracle::random_triangulation(rng, 3 + static_cast<int>(rng() % 2));
        const auto e = embedded(g);
        const auto faces = trace_faces(e.graph, e.rotation).faces;
        const auto r = attach_triangulated(g, e.rotation, face_at(e, rng() % faces.size()), t);
        CHECK(r.graph.m() == g.m() + t.m() + 6);
        check_witness(r);
        CHECK(is_genus_at_most(r.graph, r.genus_bound_after));
        const auto rooted = triangulated_appearances(t, r.graph, true);
        CHECK(std::any_of(rooted.begin(), rooted.end(),
                          [&](const auto& a) { return a.vertices.front() == g.n() + 1; }));
        CHECK(invariant_violations(r.graph, r.genus_bound_after).empty());
    }
}

TEST_CASE("join_triangulations of two K4s") {
    const auto a = embedded(complete_graph(4));
    const auto zero = join_triangulations(a, face_at(a, 0), face_at(a, 1), a, face_at(a, 0), face_at(a, 1), 0);
    CHECK(zero.graph.n() == 8);
    CHECK(zero.graph.m() == 18);
    CHECK(zero.genus_bound_after == 0);
    CHECK(is_planar(zero.graph));

    const auto one = join_triangulations(a, face_at(a, 0), face_at(a, 1), a, face_at(a, 0), face_at(a, 1), 1);
    CHECK(one.genus_bound_after == 1);
    CHECK(is_genus_at_most(one.graph, 1));

    const auto six = join_triangulations(a, face_at(a, 0), face_at(a, 1), a, face_at(a, 0), face_at(a, 1), 6);
    CHECK(six.graph.m() == 24);
    CHECK(six.graph.m() == 3 * 8 - 6 + 6);
    CHECK(six.edge_delta == 12);
    CHECK(min_genus(six.graph).genus == 1);
    check_witness(six);

    CHECK_THROWS_AS(join_triangulations(a, face_at(a, 0), face_at(a, 0), a, face_at(a, 0), face_at(a, 1), 0),
                    PreconditionError);
    CHECK_THROWS_AS(join_triangulations(a, face_at(a, 0), face_at(a, 1), a, face_at(a, 0), face_at(a, 1), 7),
                    PreconditionError);
}

TEST_CASE("join_triangulations certificates re-verify") {
    std::mt19937_64 rng(13);
    int built = 0;
    for (int trial = 0; trial < 80; ++trial) {
        const int na = 4 + static_cast<int>(rng() % 2);
        const auto a = embedded(oracle::random_triangulation(rng, na));
        const auto b = embedded(oracle::random_triangulation(rng, 9 - na - static_cast<int>(rng() % 2)));
        const auto fa = trace_faces(a.graph, a.rotation).faces.size();
        const auto fb = trace_faces(b.graph, b.rotation).faces.size();
        const std::size_t oa = rng() % fa, ia = (oa + 1 + rng() % (fa - 1)) % fa;
        const std::size_t ob = rng() % fb, ib = (ob + 1 + rng() % (fb - 1)) % fb;
        const int extra = static_cast<int>(rng() % 7);
        try {
            const auto r = join_triangulations(a, face_at(a, oa), face_at(a, ia), b, face_at(b, ob), face_at(b, ib), extra);
            ++built;
            CHECK(r.graph.m() == a.graph.m() + b.graph.m() + r.edge_delta);
            check_witness(r);
            CHECK(is_genus_at_most(r.graph, r.genus_bound_after));
            if (extra == 6) CHECK(r.graph.m() == 3 * r.graph.n() - 6 + 6 * r.genus_bound_after);
        } catch (const PreconditionError&) {
            // every alignment would have doubled an edge
        }
    }
    CHECK(built > 40);
}
