#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <set>

#include "fquake/error.hpp"
#include "fquake/network.hpp"

using namespace fquake;

namespace {

// Structural invariants every network must satisfy.
void check_simple_graph(const TraderNetwork& net) {
    std::size_t degree_sum = 0;
    for (NodeId u = 0; u < net.node_count(); ++u) {
        const auto nbrs = net.neighbors(u);
        std::set<NodeId> unique(nbrs.begin(), nbrs.end());
        REQUIRE(unique.size() == nbrs.size());
        REQUIRE(unique.count(u) == 0);
        for (NodeId v : nbrs) REQUIRE(net.has_edge(v, u));
        degree_sum += nbrs.size();
    }
    REQUIRE(degree_sum == 2 * net.edge_count());
}

// Edges of an open lattice counted by enumerating coordinate pairs at
// Manhattan distance one.
std::size_t brute_lattice_edges(std::size_t rows, std::size_t cols) {
    std::size_t count = 0;
    for (std::size_t a = 0; a < rows * cols; ++a) {
        for (std::size_t b = a + 1; b < rows * cols; ++b) {
            const long dr = std::labs(static_cast<long>(a / cols) - static_cast<long>(b / cols));
            const long dc = std::labs(static_cast<long>(a % cols) - static_cast<long>(b % cols));
            count += (dr + dc == 1);
        }
    }
    return count;
}

bool lattice_connected(const std::vector<NodeId>& ids, std::size_t cols) {
    std::set<NodeId> members(ids.begin(), ids.end());
    std::set<NodeId> seen{ids.front()};
    std::deque<NodeId> queue{ids.front()};
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        const std::size_t r = u / cols;
        const std::size_t c = u % cols;
        std::vector<NodeId> cand;
        if (c > 0) cand.push_back(u - 1);
        if (c + 1 < cols) cand.push_back(u + 1);
        if (r > 0) cand.push_back(static_cast<NodeId>(u - cols));
        cand.push_back(static_cast<NodeId>(u + cols));
        for (NodeId v : cand) {
            if (members.count(v) && seen.insert(v).second) queue.push_back(v);
        }
    }
    return seen.size() == members.size();
}

}  // namespace

TEST_CASE("smallest open lattice") {
    const auto net = build_lattice(2, 2);
    CHECK(net.node_count() == 4);
    CHECK(net.edge_count() == 4);
    for (NodeId u = 0; u < 4; ++u) CHECK(net.degree(u) == 2);
    check_simple_graph(net);
}

TEST_CASE("40x40 lattice edge count matches enumeration") {
    const auto net = build_lattice(40, 40);
    CHECK(net.node_count() == 1600);
    CHECK(brute_lattice_edges(40, 40) == 3120);
    CHECK(net.edge_count() == 3120);
    CHECK(net.edges().size() == 3120);
    CHECK(net.mean_degree() == doctest::Approx(3.9));
    check_simple_graph(net);
}

TEST_CASE("open boundary degrees") {
    const auto net = build_lattice(3, 3);
    CHECK(net.degree(4) == 4);
    for (NodeId corner : {0u, 2u, 6u, 8u}) CHECK(net.degree(corner) == 2);
    for (NodeId edge : {1u, 3u, 5u, 7u}) CHECK(net.degree(edge) == 3);

    const auto big = build_lattice(5, 7);
    CHECK(big.edge_count() == brute_lattice_edges(5, 7));
}

TEST_CASE("lattice dimensions below two are rejected") {
    CHECK_THROWS_AS(build_lattice(1, 5), InvalidConfig);
    CHECK_THROWS_AS(build_lattice(5, 1), InvalidConfig);
}

TEST_CASE("rewire with p = 0 is the identity") {
    const auto lattice = build_lattice(10, 10);
    Rng rng(7);
    const auto net = rewire(lattice, 0.0, rng);
    CHECK(net.edges() == lattice.edges());
    CHECK(net.rewired_edges() == 0);
}

TEST_CASE("rewire with p = 1 moves every edge") {
    const auto lattice = build_lattice(40, 40);
    Rng rng(11);
    const auto net = rewire(lattice, 1.0, rng);
    CHECK(net.rewired_edges() == 3120);
    CHECK(net.edge_count() == 3120);
    check_simple_graph(net);
}

TEST_CASE("rewired edge count follows the binomial mean") {
    const auto lattice = build_lattice(40, 40);
    constexpr int kSeeds = 10'000;
    double total = 0.0;
    for (int seed = 0; seed < kSeeds; ++seed) {
        auto rng = make_stream(static_cast<std::uint64_t>(seed), Stream::Topology);
        total += static_cast<double>(rewire(lattice, 0.02, rng).rewired_edges());
    }
    const double expected = 0.02 * 3120;  // 62.4
    CHECK(total / kSeeds == doctest::Approx(expected).epsilon(3.0 / expected));
}

TEST_CASE("rewiring keeps the graph simple for arbitrary p and seeds") {
    Rng gen(2024);
    std::uniform_real_distribution<double> prob(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> dim(2, 12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto lattice = build_lattice(dim(gen), dim(gen));
        const double p = prob(gen);
        Rng a(gen());
        Rng b = a;
        const auto net = rewire(lattice, p, a);
        CAPTURE(p);
        check_simple_graph(net);
        CHECK(net.edge_count() == lattice.edge_count());
        CHECK(rewire(lattice, p, b) == net);
    }
}

TEST_CASE("rewiring shortens paths") {
    const auto lattice = build_lattice(40, 40);
    const double pristine = mean_shortest_path(lattice);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto rng = make_stream(seed, Stream::Topology);
        CHECK(mean_shortest_path(rewire(lattice, 0.02, rng)) < pristine);
    }
}

TEST_CASE("lattice blocks") {
    const auto net = build_lattice(40, 40);

    SUBCASE("single cell") {
        CHECK(lattice_block(net, 123, 1) == std::vector<NodeId>{123});
    }
    SUBCASE("2x2 interior patch") {
        const NodeId anchor = 10 * 40 + 10;
        const auto block = lattice_block(net, anchor, 4);
        CHECK(block == std::vector<NodeId>{anchor, anchor + 1, anchor + 40, anchor + 41});
    }
    SUBCASE("160 cells form a trimmed 13x13 patch") {
        for (NodeId anchor : {0u, 820u, 1599u, 39u, 1560u}) {
            const auto block = lattice_block(net, anchor, 160);
            REQUIRE(block.size() == 160);
            std::set<NodeId> unique(block.begin(), block.end());
            CHECK(unique.size() == 160);
            const auto [rmin, rmax] = std::minmax_element(block.begin(), block.end(),
                [](NodeId a, NodeId b) { return a / 40 < b / 40; });
            const auto [cmin, cmax] = std::minmax_element(block.begin(), block.end(),
                [](NodeId a, NodeId b) { return a % 40 < b % 40; });
            CHECK(*rmax / 40 - *rmin / 40 + 1 == 13);
            CHECK(*cmax % 40 - *cmin % 40 + 1 == 13);
            CHECK(lattice_connected(block, 40));
        }
    }
    SUBCASE("oversized block") {
        CHECK_THROWS_AS(lattice_block(net, 0, 1601), InvalidConfig);
        CHECK_THROWS_AS(lattice_block(net, 1600, 4), InvalidConfig);
    }
}

TEST_CASE("graphs from explicit edges") {
    const std::vector<std::pair<NodeId, NodeId>> path{{0, 1}, {1, 2}};
    const auto net = TraderNetwork::from_edges(3, path);
    CHECK(net.degree(1) == 2);
    CHECK(net.edge_count() == 2);
    check_simple_graph(net);

    const std::vector<std::pair<NodeId, NodeId>> loop{{1, 1}};
    CHECK_THROWS_AS(TraderNetwork::from_edges(3, loop), InvalidConfig);
    const std::vector<std::pair<NodeId, NodeId>> dup{{0, 1}, {1, 0}};
    CHECK_THROWS_AS(TraderNetwork::from_edges(3, dup), InvalidConfig);
}

TEST_CASE("edge list export") {
    const auto path = std::filesystem::temp_directory_path() / "fquake_edges.txt";
    write_edge_list(build_lattice(2, 2), path);
    std::ifstream in(path);
    std::string all((std::istreambuf_iterator<char>(in)), {});
    CHECK(all == "0 1\n0 2\n1 3\n2 3\n");
    std::filesystem::remove(path);
}
