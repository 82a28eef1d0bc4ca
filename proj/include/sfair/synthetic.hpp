#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "sfair/errors.hpp"
#include "sfair/graph.hpp"
#include "sfair/rng.hpp"

namespace sfair {

enum class NodeGroup : int { central = 0, middle = 1, marginal = 2 };

struct GroupedGraph {
    Graph graph;
    std::vector<int> group;  // NodeGroup value per node
};

// Clique-star-chain family: a clique of central nodes, middle nodes hanging
// off each central node, and a marginal chain extending each middle node.
// The seed only shuffles which central node each middle node attaches to.
inline GroupedGraph generate_three_group(std::size_t core_size = 5,
                                         std::size_t middle_per_core = 2,
                                         std::size_t chain_len = 3,
                                         std::uint64_t seed = 0) {
    if (core_size < 3) throw UsageError("core_size must be >= 3");
    if (chain_len < 1) throw UsageError("chain_len must be >= 1");
    const std::size_t num_middle = core_size * middle_per_core;
    const std::size_t n = core_size + num_middle * (1 + chain_len);

    GroupedGraph gg;
    gg.group.assign(n, static_cast<int>(NodeGroup::marginal));
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < core_size; ++i) {
        gg.group[i] = static_cast<int>(NodeGroup::central);
        for (NodeId j = i + 1; j < core_size; ++j) edges.emplace_back(i, j);
    }
    std::vector<NodeId> anchors;
    for (NodeId c = 0; c < core_size; ++c) {
        for (std::size_t m = 0; m < middle_per_core; ++m) anchors.push_back(c);
    }
    Rng rng(seed);
    rng.shuffle(anchors);

    NodeId next_id = static_cast<NodeId>(core_size);
    for (NodeId anchor : anchors) {
        const NodeId middle = next_id++;
        gg.group[middle] = static_cast<int>(NodeGroup::middle);
        edges.emplace_back(anchor, middle);
        NodeId prev = middle;
        for (std::size_t s = 0; s < chain_len; ++s) {
            const NodeId leaf = next_id++;
            edges.emplace_back(prev, leaf);
            prev = leaf;
        }
    }
    gg.graph = Graph::from_edges(n, std::move(edges));
    return gg;
}

// Two cliques joined by one bridge edge; labels are clique membership,
// split 80/20. Structure alone separates the classes.
inline LabeledDataset generate_separable_fixture(std::uint64_t seed = 0,
                                                 std::size_t clique_size = 10) {
    const std::size_t n = 2 * clique_size;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t side = 0; side < 2; ++side) {
        const NodeId base = static_cast<NodeId>(side * clique_size);
        for (NodeId i = 0; i < clique_size; ++i) {
            for (NodeId j = i + 1; j < clique_size; ++j) {
                edges.emplace_back(base + i, base + j);
            }
        }
    }
    edges.emplace_back(static_cast<NodeId>(clique_size - 1),
                       static_cast<NodeId>(clique_size));  // bridge

    LabeledDataset ds;
    ds.graph = Graph::from_edges(n, std::move(edges));
    ds.labels.assign(n, 0);
    for (std::size_t i = clique_size; i < n; ++i) ds.labels[i] = 1;
    ds.num_classes = 2;
    return split_train_test(std::move(ds), 0.8, seed);
}

inline void save_groups_csv(const GroupedGraph& gg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write: " + path);
    out << "node_id,group\n";
    static const char* names[] = {"central", "middle", "marginal"};
    for (std::size_t i = 0; i < gg.group.size(); ++i) {
        out << i << ',' << names[gg.group[i]] << '\n';
    }
}

}  // namespace sfair
