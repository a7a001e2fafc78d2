#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <sstream>

#include "polyzero/canonical.hpp"
#include "polyzero/graph.hpp"

using namespace polyzero;

namespace {

std::set<std::uint64_t> mask_set(const std::vector<std::uint64_t>& v) {
    return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("build_dual on canonical meshes") {
    SECTION("regular tetrahedron -> tetrahedral graph") {
        auto [g, records] = build_dual(build_canonical(tetrahedron_spec()));
        CHECK(g.node_count == 4);
        CHECK(g.link_count() == 6);
        for (int d : node_degrees(g)) CHECK(d == 3);
        CHECK(is_connected(g));
    }
    SECTION("pancake -> theta graph with three parallel links") {
        auto [g, records] = build_dual(build_canonical(pancake_spec()));
        CHECK(g.node_count == 2);
        CHECK(g.link_count() == 3);
        for (const auto& l : g.links) CHECK(((l.a == 0 && l.b == 1) || (l.a == 1 && l.b == 0)));
    }
    SECTION("double pyramid -> cube graph") {
        auto [g, records] = build_dual(build_canonical(double_pyramid_spec(1.0, 1.0)));
        CHECK(g.node_count == 8);
        CHECK(g.link_count() == 12);
        for (int d : node_degrees(g)) CHECK(d == 3);
        // cube graph is triangle-free: no 3-cycle among the even subgraphs
        for (std::uint64_t mask : enumerate_even_subgraphs(g))
            if (mask) CHECK(std::popcount(mask) >= 4);
    }
    SECTION("torus dual: node degrees match face side counts") {
        auto [g, records] = build_dual(build_canonical(torus_spec(1, 2, 1)));
        CHECK(g.node_count == 12);
        CHECK(g.link_count() == 24);
        for (int d : node_degrees(g)) CHECK(d == 4);  // all faces are quads
    }
    SECTION("handshake: sum of degrees = 2 x links") {
        auto [g, records] = build_dual(build_canonical(pyramid_spec(1.0)));
        int total = 0;
        for (int d : node_degrees(g)) total += d;
        CHECK(total == 2 * g.link_count());
    }
}

TEST_CASE("cycle_space_basis") {
    SECTION("theta graph: dimension 2") {
        auto [g, records] = build_dual(build_canonical(pancake_spec()));
        CHECK(cycle_space_basis(g).size() == 2);
    }
    SECTION("cube graph: dimension 5") {
        auto [g, records] = build_dual(build_canonical(double_pyramid_spec(1.0, 1.0)));
        CHECK(cycle_space_basis(g).size() == 5);
    }
    SECTION("tetrahedral graph: dimension 3, spanning all of P_T") {
        IsingGraph g;
        g.node_count = 4;
        // Y1=cd Y2=bd Y3=ad Y4=ab Y5=ac Y6=bc (a=0 b=1 c=2 d=3), link i <-> Y_{i+1}
        g.links = {{2, 3}, {1, 3}, {0, 3}, {0, 1}, {0, 2}, {1, 2}};
        const auto basis = cycle_space_basis(g);
        CHECK(basis.size() == 3);
        const auto evens = enumerate_even_subgraphs(g);
        CHECK(evens.size() == 8);
        auto bits = [](std::initializer_list<int> ids) {
            std::uint64_t m = 0;
            for (int i : ids) m |= 1ull << (i - 1);
            return m;
        };
        const std::set<std::uint64_t> expected = {
            0,
            bits({1, 2, 6}), bits({1, 5, 3}), bits({4, 2, 3}), bits({4, 5, 6}),
            bits({1, 2, 4, 5}), bits({2, 3, 5, 6}), bits({1, 3, 4, 6})};
        CHECK(mask_set(evens) == expected);
    }
    SECTION("every basis element and XOR combination is even") {
        auto [g, records] = build_dual(build_canonical(torus_spec(1, 2, 1)));
        const auto basis = cycle_space_basis(g);
        CHECK(basis.size() == 13);  // L - N + 1 = 24 - 12 + 1
        for (std::uint64_t m : basis) CHECK(is_even_subgraph(g, m));
        std::uint64_t acc = 0;
        for (std::uint64_t m : basis) {
            acc ^= m;
            CHECK(is_even_subgraph(g, acc));
        }
    }
    SECTION("disconnected graph is rejected") {
        IsingGraph g;
        g.node_count = 4;
        g.links = {{0, 1}, {2, 3}};
        CHECK_THROWS_AS(cycle_space_basis(g), Error);
    }
}

TEST_CASE("theta-graph even subgraphs are the pairings") {
    auto [g, records] = build_dual(build_canonical(pancake_spec()));
    const auto evens = enumerate_even_subgraphs(g);
    const std::set<std::uint64_t> expected = {0, 0b011, 0b110, 0b101};
    CHECK(mask_set(evens) == expected);
}

TEST_CASE("graph text export") {
    auto [g, records] = build_dual(build_canonical(pancake_spec()));
    std::ostringstream os;
    write_graph(os, g);
    const std::string text = os.str();
    CHECK(text.find("polyzero-graph 1") == 0);
    CHECK(text.find("nodes 2") != std::string::npos);
    CHECK(text.find("links 3") != std::string::npos);
    CHECK(text.find("0 0 1") != std::string::npos);
}
