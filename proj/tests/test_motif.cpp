#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ustatlab/motif.hpp"

using namespace ustatlab;

namespace {

// Every labeled graph on `v` vertices, one per edge-subset mask.
std::vector<Motif> all_motifs(int v) {
    auto pairs = [](int k) {
        std::vector<std::pair<int, int>> out;
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) out.emplace_back(i, j);
        }
        return out;
    }(v);
    std::vector<Motif> out;
    for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
        std::vector<std::pair<int, int>> edges;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            if (mask & (1u << p)) edges.push_back(pairs[p]);
        }
        out.emplace_back(v, std::move(edges));
    }
    return out;
}

// Independent 2-star count: exhaustive scan over ordered (center, leaf pair).
int two_stars_by_scan(const Motif& m) {
    int count = 0;
    for (int c = 0; c < m.vertex_count; ++c) {
        for (int u = 0; u < m.vertex_count; ++u) {
            for (int w = u + 1; w < m.vertex_count; ++w) {
                if (u != c && w != c && m.has_edge(c, u) && m.has_edge(c, w)) ++count;
            }
        }
    }
    return count;
}

}  // namespace

TEST_CASE("motif stats on the named small graphs") {
    MotifStats tri = motif_stats(make_triangle_motif());
    CHECK(tri.edge_count == 3);
    CHECK(tri.two_star_count == 3);
    CHECK(tri.triangle_count == 1);

    MotifStats star = motif_stats(make_two_star_motif());
    CHECK(star.edge_count == 2);
    CHECK(star.two_star_count == 1);
    CHECK(star.triangle_count == 0);

    MotifStats empty = motif_stats(Motif(4, {}));
    CHECK(empty.edge_count == 0);
    CHECK(empty.two_star_count == 0);
    CHECK(empty.triangle_count == 0);
}

TEST_CASE("degree-formula 2-star count matches exhaustive scan on <= 5 vertices") {
    for (int v = 1; v <= 5; ++v) {
        // full enumeration is 2^10 graphs at v = 5
        for (const auto& m : all_motifs(v)) {
            CHECK(motif_stats(m).two_star_count == two_stars_by_scan(m));
        }
    }
}

TEST_CASE("automorphism counts") {
    CHECK(automorphism_count(make_two_star_motif()) == 2);
    CHECK(automorphism_count(make_triangle_motif()) == 6);
    CHECK(automorphism_count(make_path_motif(4)) == 2);
    CHECK(automorphism_count(Motif(4, {})) == 24);
    CHECK(automorphism_count(make_cycle_motif(4)) == 8);
    CHECK_THROWS_AS(automorphism_count(Motif(11, {})), CapabilityError);
}

TEST_CASE("automorphism count divides v! and matches embeddings") {
    for (int v = 2; v <= 4; ++v) {
        std::int64_t fact = 1;
        for (int i = 2; i <= v; ++i) fact *= i;
        for (const auto& m : all_motifs(v)) {
            std::int64_t aut = automorphism_count(m);
            CHECK(fact % aut == 0);
            CHECK(static_cast<std::int64_t>(isomorphic_embeddings(m, v).size()) * aut == fact);
        }
    }
}

TEST_CASE("marked automorphisms respect the marked subset") {
    Motif edge = make_edge_motif();
    CHECK(marked_automorphism_count(edge, {}) == 2);
    CHECK(marked_automorphism_count(edge, {0}) == 1);
    CHECK(marked_automorphism_count(edge, {0, 1}) == 2);
    Motif star = make_two_star_motif();
    CHECK(marked_automorphism_count(star, {1}) == 1);
    CHECK(marked_automorphism_count(star, {0}) == 2);
}

TEST_CASE("connectivity") {
    CHECK(is_connected(make_triangle_motif()));
    CHECK_FALSE(is_connected(Motif(4, {{0, 1}, {2, 3}})));
    CHECK(is_connected(make_edge_motif()));
    CHECK(is_connected(Motif(1, {})));
    CHECK(is_connected(Motif(4, {})));  // no non-isolated vertices
    // isolated vertices are ignored
    CHECK(is_connected(Motif(5, {{1, 2}})));
}

TEST_CASE("strong connectivity in the vertex-deleted sense") {
    CHECK(is_strongly_connected(make_triangle_motif()));
    CHECK_FALSE(is_strongly_connected(make_two_star_motif()));
    CHECK(is_strongly_connected(make_edge_motif()));
    CHECK_FALSE(is_strongly_connected(make_path_motif(4)));
    CHECK(is_strongly_connected(make_cycle_motif(4)));
    CHECK_FALSE(is_strongly_connected(Motif(4, {{0, 1}, {2, 3}})));
}

TEST_CASE("strongly connected implies connected") {
    for (int v = 2; v <= 4; ++v) {
        for (const auto& m : all_motifs(v)) {
            if (m.non_isolated_vertices().size() < 2) continue;
            if (is_strongly_connected(m)) CHECK(is_connected(m));
        }
    }
}

TEST_CASE("isomorphic embeddings") {
    auto star = isomorphic_embeddings(make_two_star_motif(), 3);
    REQUIRE(star.size() == 3);
    using EdgeSet = std::vector<std::pair<int, int>>;
    CHECK(std::find(star.begin(), star.end(), EdgeSet{{0, 1}, {0, 2}}) != star.end());
    CHECK(std::find(star.begin(), star.end(), EdgeSet{{0, 1}, {1, 2}}) != star.end());
    CHECK(std::find(star.begin(), star.end(), EdgeSet{{0, 2}, {1, 2}}) != star.end());

    CHECK(isomorphic_embeddings(make_triangle_motif(), 3).size() == 1);
    CHECK(isomorphic_embeddings(make_edge_motif(), 2).size() == 1);
    CHECK_THROWS_AS(isomorphic_embeddings(make_edge_motif(), 3), ArgumentError);
}

TEST_CASE("motif text format") {
    Motif tri = make_triangle_motif();
    std::istringstream in(format_motif(tri));
    CHECK(parse_motif(in) == tri);

    std::istringstream dup("v 3\ne 0 1\ne 1 0\n");
    CHECK_THROWS_AS(parse_motif(dup), ParseError);
    std::istringstream loop("v 3\ne 1 1\n");
    CHECK_THROWS_AS(parse_motif(loop), ParseError);
    std::istringstream range("v 3\ne 0 3\n");
    CHECK_THROWS_AS(parse_motif(range), ParseError);
    std::istringstream missing("e 0 1\n");
    CHECK_THROWS_AS(parse_motif(missing), ParseError);
    std::istringstream comments("# triangle\nv 3\n\ne 0 1\ne 0 2\ne 1 2\n");
    CHECK(parse_motif(comments) == tri);
}

TEST_CASE("motif validation") {
    CHECK_THROWS_AS(Motif(2, {{0, 0}}), ValidationError);
    CHECK_THROWS_AS(Motif(2, {{0, 1}, {1, 0}}), ValidationError);
    CHECK_THROWS_AS(Motif(2, {{0, 2}}), ValidationError);
}
