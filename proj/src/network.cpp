#include "fquake/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>

#include "fquake/error.hpp"

namespace fquake {

namespace {

void add_edge(std::vector<std::vector<NodeId>>& adj, NodeId a, NodeId b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
}

void remove_edge(std::vector<std::vector<NodeId>>& adj, NodeId a, NodeId b) {
    std::erase(adj[a], b);
    std::erase(adj[b], a);
}

bool contains(const std::vector<NodeId>& list, NodeId x) {
    return std::find(list.begin(), list.end(), x) != list.end();
}

}  // namespace

bool TraderNetwork::has_edge(NodeId a, NodeId b) const {
    return contains(adjacency_.at(a), b);
}

std::vector<std::pair<NodeId, NodeId>> TraderNetwork::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < adjacency_.size(); ++u) {
        for (NodeId v : adjacency_[u]) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

TraderNetwork TraderNetwork::from_edges(std::size_t node_count,
                                        std::span<const std::pair<NodeId, NodeId>> edges) {
    if (node_count == 0) throw InvalidConfig("network needs at least one node");
    TraderNetwork net;
    net.rows_ = 1;
    net.cols_ = node_count;
    net.adjacency_.resize(node_count);
    for (const auto& [a, b] : edges) {
        if (a >= node_count || b >= node_count) throw InvalidConfig("edge endpoint out of range");
        if (a == b) throw InvalidConfig("self-loop");
        if (contains(net.adjacency_[a], b)) throw InvalidConfig("duplicate edge");
        add_edge(net.adjacency_, a, b);
    }
    for (auto& list : net.adjacency_) std::sort(list.begin(), list.end());
    net.edge_count_ = edges.size();
    return net;
}

double TraderNetwork::mean_degree() const {
    if (adjacency_.empty()) return 0.0;
    return 2.0 * static_cast<double>(edge_count_) / static_cast<double>(adjacency_.size());
}

TraderNetwork build_lattice(std::size_t rows, std::size_t cols) {
    if (rows < 2 || cols < 2) {
        throw InvalidConfig("lattice needs at least 2 rows and 2 columns");
    }
    if (rows * cols > std::numeric_limits<NodeId>::max()) {
        throw InvalidConfig("lattice too large");
    }
    TraderNetwork net;
    net.rows_ = rows;
    net.cols_ = cols;
    net.adjacency_.resize(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const auto id = static_cast<NodeId>(r * cols + c);
            if (c + 1 < cols) add_edge(net.adjacency_, id, id + 1);
            if (r + 1 < rows) add_edge(net.adjacency_, id, static_cast<NodeId>(id + cols));
        }
    }
    for (auto& list : net.adjacency_) std::sort(list.begin(), list.end());
    net.edge_count_ = rows * (cols - 1) + cols * (rows - 1);
    return net;
}

TraderNetwork rewire(const TraderNetwork& net, double p, Rng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidConfig("rewiring probability must lie in [0, 1]");
    }
    TraderNetwork out = net;
    out.rewire_prob_ = p;
    out.rewired_edges_ = 0;

    const std::size_t n = net.node_count();
    std::uniform_int_distribution<NodeId> pick_node(0, static_cast<NodeId>(n - 1));
    std::bernoulli_distribution select(p);

    for (const auto& [u, v] : net.edges()) {
        if (!select(rng)) continue;
        NodeId keep = coin_flip(rng) ? u : v;
        NodeId moved = keep == u ? v : u;
        // A node already linked to everyone has no legal new partner.
        if (out.adjacency_[keep].size() + 1 >= n) std::swap(keep, moved);
        if (out.adjacency_[keep].size() + 1 >= n) continue;

        NodeId target = 0;
        do {
            target = pick_node(rng);
        } while (target == keep || contains(out.adjacency_[keep], target));

        remove_edge(out.adjacency_, keep, moved);
        add_edge(out.adjacency_, keep, target);
        ++out.rewired_edges_;
    }
    for (auto& list : out.adjacency_) std::sort(list.begin(), list.end());
    return out;
}

std::vector<NodeId> lattice_block(const TraderNetwork& net, NodeId anchor, std::size_t size) {
    const std::size_t n = net.node_count();
    if (size > n) throw InvalidConfig("block larger than the network");
    if (anchor >= n) throw InvalidConfig("block anchor outside the lattice");
    if (size == 0) return {};

    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(size))));
    const std::size_t width = std::min(side, net.cols());
    const std::size_t height = (size + width - 1) / width;

    std::size_t row = anchor / net.cols();
    std::size_t col = anchor % net.cols();
    row = std::min(row, net.rows() - height);
    col = std::min(col, net.cols() - width);

    std::vector<NodeId> out;
    out.reserve(size);
    for (std::size_t r = row; r < row + height && out.size() < size; ++r) {
        for (std::size_t c = col; c < col + width && out.size() < size; ++c) {
            out.push_back(static_cast<NodeId>(r * net.cols() + c));
        }
    }
    return out;
}

double mean_shortest_path(const TraderNetwork& net) {
    const std::size_t n = net.node_count();
    std::vector<std::int64_t> dist(n);
    std::deque<NodeId> queue;
    double total = 0.0;
    std::size_t pairs = 0;
    for (NodeId src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[src] = 0;
        queue.assign(1, src);
        while (!queue.empty()) {
            const NodeId u = queue.front();
            queue.pop_front();
            for (NodeId v : net.neighbors(u)) {
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    total += static_cast<double>(dist[v]);
                    ++pairs;
                    queue.push_back(v);
                }
            }
        }
    }
    return pairs == 0 ? 0.0 : total / static_cast<double>(pairs);
}

void write_edge_list(const TraderNetwork& net, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    for (const auto& [u, v] : net.edges()) out << u << ' ' << v << '\n';
}

}  // namespace fquake
