#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <numeric>

#include "idenet/io.hpp"
#include "idenet/netgen.hpp"

using namespace idenet;

TEST_CASE("BA edge counts and tree structure") {
    const auto tree = generate_ba(10, 1, 1);
    CHECK(tree.edge_count() == 9);
    // m=1 gives a connected tree: n-1 edges and a single component
    std::vector<int> comp(10, -1);
    std::vector<int64_t> stack{0};
    comp[0] = 0;
    while (!stack.empty()) {
        const int64_t v = stack.back();
        stack.pop_back();
        for (int64_t k = tree.row_offsets[v]; k < tree.row_offsets[v + 1]; ++k) {
            const auto w = tree.col_indices[k];
            if (comp[w] < 0) {
                comp[w] = 0;
                stack.push_back(w);
            }
        }
    }
    CHECK(std::count(comp.begin(), comp.end(), 0) == 10);

    CHECK(generate_ba(3000, 5, 7).edge_count() == 5 * (3000 - 5));
    CHECK(generate_ba(2, 1, 3).edge_count() == 1);
    CHECK_THROWS_AS(generate_ba(5, 5, 1), InvalidParams);
    CHECK_THROWS_AS(generate_ba(5, 0, 1), InvalidParams);
}

TEST_CASE("BA degree distribution is heavy tailed") {
    int heavy = 0;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const auto net = generate_ba(3000, 5, seed);
        int64_t max_deg = 0;
        for (int64_t i = 0; i < net.n; ++i) max_deg = std::max(max_deg, net.degree(i));
        const double mean_deg = 2.0 * net.edge_count() / net.n;
        if (max_deg > 10 * mean_deg) ++heavy;
    }
    CHECK(heavy >= 9);
}

TEST_CASE("WS edge counts are exact") {
    CHECK(generate_ws(3000, 6, 0.5, 1).edge_count() == 9000);
    CHECK(generate_ws(3000, 300, 0.5, 2).edge_count() == 450000);
    CHECK_THROWS_AS(generate_ws(10, 3, 0.5, 1), InvalidParams);
    CHECK_THROWS_AS(generate_ws(10, 10, 0.5, 1), InvalidParams);
}

TEST_CASE("WS with no rewiring is the ring lattice") {
    const auto ring = generate_ws(10, 2, 0.0, 5);
    CHECK(ring.edge_count() == 10);
    for (int64_t i = 0; i < 10; ++i) {
        CHECK(ring.degree(i) == 2);
        const auto lo = ring.row_offsets[i];
        const int64_t left = (i + 9) % 10, right = (i + 1) % 10;
        CHECK(ring.col_indices[lo] == std::min(left, right));
        CHECK(ring.col_indices[lo + 1] == std::max(left, right));
    }
}

TEST_CASE("attribute sampling matches the declared distributions") {
    auto net = generate_ba(100000, 1, 11);
    sample_attributes(net, 11);
    const auto& c = net.node_column("C");
    const auto& z = net.node_column("Z");
    const auto& zr = net.edge_column("Z_r");

    const double c_mean = std::accumulate(c.begin(), c.end(), 0.0) / c.size();
    CHECK(std::abs(c_mean - 0.5) < 0.02);
    for (const double v : c) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }

    const double zr_mean = std::accumulate(zr.begin(), zr.end(), 0.0) / zr.size();
    CHECK(std::abs(zr_mean - 5.5) < 0.05);
    for (const double v : zr) {
        CHECK(v >= 1.0);
        CHECK(v <= 10.0);
    }

    std::vector<int64_t> counts(5, 0);
    for (const double v : z) {
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 4.0);
        ++counts[static_cast<size_t>(v)];
    }
    const int64_t total = std::accumulate(counts.begin(), counts.end(), int64_t{0});
    CHECK(total == net.n);
    for (const auto count : counts) CHECK(count > 0);
}

TEST_CASE("identical seeds give bit-identical networks and attributes") {
    auto a = generate_ba(500, 3, 99);
    auto b = generate_ba(500, 3, 99);
    sample_attributes(a, 42);
    sample_attributes(b, 42);
    CHECK(a.edges == b.edges);
    CHECK(a.node_attrs == b.node_attrs);
    CHECK(a.edge_attrs == b.edge_attrs);

    auto w1 = generate_ws(500, 6, 0.5, 7);
    auto w2 = generate_ws(500, 6, 0.5, 7);
    CHECK(w1.edges == w2.edges);
}

TEST_CASE("network round-trips through the dataset directory") {
    const std::string dir = "netgen_roundtrip_tmp";
    auto net = generate_ws(60, 4, 0.5, 3);
    sample_attributes(net, 3);
    save_network(net, dir);
    const auto back = load_network(dir);
    CHECK(back.n == net.n);
    CHECK(back.edges == net.edges);
    CHECK(back.node_attrs == net.node_attrs);
    CHECK(back.edge_attrs == net.edge_attrs);

    // byte-identical rewrite
    const auto before = io::read_text_file(dir + "/edges.csv");
    save_network(back, dir);
    CHECK(io::read_text_file(dir + "/edges.csv") == before);
    std::filesystem::remove_all(dir);
}

TEST_CASE("mutual neighbor counts") {
    AttributedNetwork tri;
    tri.n = 3;
    tri.edges = {{0, 1}, {0, 2}, {1, 2}};
    tri.finalize();
    for (const double c : tri.mutual_neighbor_counts()) CHECK(c == 1.0);

    AttributedNetwork path;
    path.n = 3;
    path.edges = {{0, 1}, {1, 2}};
    path.finalize();
    for (const double c : path.mutual_neighbor_counts()) CHECK(c == 0.0);
}
