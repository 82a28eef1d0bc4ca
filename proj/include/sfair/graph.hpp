#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sfair/errors.hpp"
#include "sfair/rng.hpp"

namespace sfair {

using NodeId = std::uint32_t;

inline constexpr NodeId kUnreachable = std::numeric_limits<NodeId>::max();

// Immutable undirected graph in CSR form. Neighbor lists are sorted,
// duplicate-free, and contain no self-loops; adjacency is symmetric.
class Graph {
public:
    Graph() = default;

    // Symmetrizes, deduplicates, and drops self-loops.
    static Graph from_edges(std::size_t num_nodes,
                            std::vector<std::pair<NodeId, NodeId>> edges) {
        std::vector<std::pair<NodeId, NodeId>> sym;
        sym.reserve(edges.size() * 2);
        for (auto [u, v] : edges) {
            if (u == v) continue;
            if (u >= num_nodes || v >= num_nodes) {
                throw UsageError("edge endpoint out of range");
            }
            sym.emplace_back(u, v);
            sym.emplace_back(v, u);
        }
        std::sort(sym.begin(), sym.end());
        sym.erase(std::unique(sym.begin(), sym.end()), sym.end());

        Graph g;
        g.offsets_.assign(num_nodes + 1, 0);
        g.neighbors_.reserve(sym.size());
        std::size_t read = 0;
        for (std::size_t i = 0; i < num_nodes; ++i) {
            g.offsets_[i] = g.neighbors_.size();
            while (read < sym.size() && sym[read].first == i) {
                g.neighbors_.push_back(sym[read].second);
                ++read;
            }
        }
        g.offsets_[num_nodes] = g.neighbors_.size();
        return g;
    }

    std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_edges() const { return neighbors_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId i) const {
        return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }

    std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }

    const std::vector<std::size_t>& csr_offsets() const { return offsets_; }
    const std::vector<NodeId>& csr_neighbors() const { return neighbors_; }

    bool operator==(const Graph& other) const = default;

private:
    std::vector<std::size_t> offsets_;  // length num_nodes + 1
    std::vector<NodeId> neighbors_;
};

namespace detail {

// Parses "src dst" with tab or space separation; returns false for blank
// and '#'-comment lines.
inline bool parse_id_pair(const std::string& line, long long& a, long long& b) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') return false;
    std::istringstream ss(line);
    if (!(ss >> a >> b)) throw UsageError("expected two integers");
    std::string rest;
    if (ss >> rest) throw UsageError("trailing tokens");
    if (a < 0 || b < 0) throw UsageError("negative node id");
    return true;
}

}  // namespace detail

inline Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open edge list: " + path);
    std::vector<std::pair<NodeId, NodeId>> edges;
    long long max_id = -1;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        long long a, b;
        try {
            if (!detail::parse_id_pair(line, a, b)) continue;
        } catch (const UsageError& e) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
        max_id = std::max({max_id, a, b});
    }
    if (edges.empty()) throw UsageError("empty edge list: " + path);
    return Graph::from_edges(static_cast<std::size_t>(max_id) + 1, std::move(edges));
}

inline void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write edge list: " + path);
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
        for (NodeId j : g.neighbors(i)) {
            if (i < j) out << i << '\t' << j << '\n';
        }
    }
}

inline std::vector<NodeId> bfs_distances(const Graph& g, NodeId source) {
    const std::size_t n = g.num_nodes();
    if (source >= n) throw UsageError("bfs source out of range");
    std::vector<NodeId> dist(n, kUnreachable);
    std::vector<NodeId> frontier{source};
    dist[source] = 0;
    std::vector<NodeId> next;
    NodeId d = 0;
    while (!frontier.empty()) {
        ++d;
        next.clear();
        for (NodeId u : frontier) {
            for (NodeId v : g.neighbors(u)) {
                if (dist[v] == kUnreachable) {
                    dist[v] = d;
                    next.push_back(v);
                }
            }
        }
        frontier.swap(next);
    }
    return dist;
}

struct LabeledDataset {
    Graph graph;
    std::vector<int> labels;  // per node, in [0, num_classes)
    int num_classes = 0;
    std::vector<std::uint8_t> train_mask;
    std::vector<std::uint8_t> test_mask;
};

inline LabeledDataset load_labels(const std::string& path, Graph graph) {
    std::ifstream in(path);
    if (!in) throw UsageError("labels not found: " + path);
    const std::size_t n = graph.num_nodes();
    std::vector<int> labels(n, -1);
    int num_classes = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        long long id, cls;
        try {
            if (!detail::parse_id_pair(line, id, cls)) continue;
        } catch (const UsageError& e) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (static_cast<std::size_t>(id) >= n) {
            throw UsageError(path + ":" + std::to_string(lineno) +
                             ": node id " + std::to_string(id) + " out of range");
        }
        labels[id] = static_cast<int>(cls);
        num_classes = std::max(num_classes, static_cast<int>(cls) + 1);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] < 0) {
            throw UsageError(path + ": missing label for node " + std::to_string(i));
        }
    }
    LabeledDataset ds;
    ds.graph = std::move(graph);
    ds.labels = std::move(labels);
    ds.num_classes = num_classes;
    return ds;
}

// Uniform random permutation under `seed`; first floor(ratio*N) nodes train.
inline LabeledDataset split_train_test(LabeledDataset ds, double ratio,
                                       std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw UsageError("split ratio must be in (0,1)");
    const std::size_t n = ds.graph.num_nodes();
    std::vector<NodeId> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<NodeId>(i);
    Rng rng(seed);
    rng.shuffle(perm);
    const std::size_t n_train = static_cast<std::size_t>(ratio * static_cast<double>(n));
    ds.train_mask.assign(n, 0);
    ds.test_mask.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        (i < n_train ? ds.train_mask : ds.test_mask)[perm[i]] = 1;
    }
    return ds;
}

}  // namespace sfair
