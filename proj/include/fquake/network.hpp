#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "fquake/rng.hpp"

namespace fquake {

using NodeId = std::uint32_t;

// Undirected trading topology laid over a rows x cols grid. Node ids are
// row-major lattice coordinates (id = row * cols + col) even after rewiring,
// so lattice geometry stays available for community placement.
class TraderNetwork {
public:
    TraderNetwork() = default;

    // Arbitrary undirected graph laid out as a single lattice row. Rejects
    // self-loops, duplicates and out-of-range ids.
    static TraderNetwork from_edges(std::size_t node_count,
                                    std::span<const std::pair<NodeId, NodeId>> edges);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t node_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    double rewire_prob() const noexcept { return rewire_prob_; }
    // Edges whose endpoint was moved by the last rewire().
    std::size_t rewired_edges() const noexcept { return rewired_edges_; }

    std::span<const NodeId> neighbors(NodeId node) const { return adjacency_.at(node); }
    std::size_t degree(NodeId node) const { return adjacency_.at(node).size(); }
    bool has_edge(NodeId a, NodeId b) const;

    // Canonical (u < v) edge list, sorted.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    double mean_degree() const;

    friend TraderNetwork build_lattice(std::size_t rows, std::size_t cols);
    friend TraderNetwork rewire(const TraderNetwork& net, double p, Rng& rng);

    friend bool operator==(const TraderNetwork&, const TraderNetwork&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::vector<NodeId>> adjacency_;
    double rewire_prob_ = 0.0;
    std::size_t edge_count_ = 0;
    std::size_t rewired_edges_ = 0;
};

// Open-boundary square lattice with von Neumann neighborhoods.
TraderNetwork build_lattice(std::size_t rows, std::size_t cols);

// Each edge is picked independently with probability p; one of its endpoints
// (chosen by coin) is reattached to a uniformly random node. Self-loops and
// duplicate edges are rejected and redrawn, so the edge count is preserved.
TraderNetwork rewire(const TraderNetwork& net, double p, Rng& rng);

// Contiguous square-ish patch of `size` lattice cells whose top-left corner
// is `anchor`. The patch is ceil(sqrt(size)) cells wide (capped at cols),
// filled row by row until exactly `size` cells, and shifted up/left when it
// would cross the lattice boundary.
std::vector<NodeId> lattice_block(const TraderNetwork& net, NodeId anchor, std::size_t size);

// Mean shortest-path length over all connected ordered pairs (BFS).
double mean_shortest_path(const TraderNetwork& net);

// One "u v" line per edge, 0-based ids.
void write_edge_list(const TraderNetwork& net, const std::filesystem::path& path);

}  // namespace fquake
