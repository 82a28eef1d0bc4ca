#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "sfair/centrality.hpp"
#include "sfair/errors.hpp"
#include "sfair/graph.hpp"

namespace sfair {

struct MarginConfig {
    double line = 0.5;
    CentralityKind centrality_kind = CentralityKind::closeness;
    bool normalized_space = true;  // threshold applies to min-max scores
};

// mask[i] = (s_i <= line)
inline std::vector<std::uint8_t> mark_marginal(const CentralityVector& cv,
                                               const MarginConfig& cfg) {
    if (cv.kind != cfg.centrality_kind) {
        throw UsageError("centrality kind does not match margin config");
    }
    if (cfg.normalized_space && !cv.normalized) {
        throw UsageError("margin config expects normalized scores");
    }
    if (cfg.normalized_space && !(cfg.line >= 0.0 && cfg.line <= 1.0)) {
        throw UsageError("margin line must be in [0,1] in normalized space");
    }
    std::vector<std::uint8_t> mask(cv.scores.size());
    for (std::size_t i = 0; i < cv.scores.size(); ++i) {
        mask[i] = cv.scores[i] <= cfg.line ? 1 : 0;
    }
    return mask;
}

// A-tilde keeps exactly the edges incident to at least one marginal node.
struct DebiasedAdjacency {
    Graph adj;
    std::vector<std::uint8_t> marginal_mask;
};

inline DebiasedAdjacency build_debiased_adjacency(
    const Graph& g, const std::vector<std::uint8_t>& mask) {
    if (mask.size() != g.num_nodes()) throw UsageError("mask length mismatch");
    std::vector<std::pair<NodeId, NodeId>> kept;
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
        for (NodeId j : g.neighbors(i)) {
            if (i < j && (mask[i] || mask[j])) kept.emplace_back(i, j);
        }
    }
    return {Graph::from_edges(g.num_nodes(), std::move(kept)), mask};
}

// Per-hop neighbor sets in CSR form; each set is sorted, duplicate-free,
// and contains the node itself.
class HopNeighborhoods {
public:
    HopNeighborhoods(std::size_t num_nodes, int h_max)
        : num_nodes_(num_nodes), h_max_(h_max), offsets_(h_max), targets_(h_max) {}

    int h_max() const { return h_max_; }
    std::size_t num_nodes() const { return num_nodes_; }

    std::span<const NodeId> set(int hop, NodeId i) const {
        const auto& off = offsets_[hop - 1];
        return {targets_[hop - 1].data() + off[i], off[i + 1] - off[i]};
    }

    std::size_t total_pairs(int hop) const { return targets_[hop - 1].size(); }

    // Builder access: rows must be appended in node order per hop.
    void append_row(int hop, const std::vector<NodeId>& sorted_row) {
        auto& off = offsets_[hop - 1];
        auto& tgt = targets_[hop - 1];
        if (off.empty()) off.push_back(0);
        tgt.insert(tgt.end(), sorted_row.begin(), sorted_row.end());
        off.push_back(tgt.size());
    }

private:
    std::size_t num_nodes_;
    int h_max_;
    std::vector<std::vector<std::size_t>> offsets_;  // [hop][node+1]
    std::vector<std::vector<NodeId>> targets_;       // [hop] flat ids
};

namespace detail {

// One boolean sparse row-times-matrix step: out_i = union of base rows over
// the previous power's row i.
inline void bool_spmm_step(const std::vector<std::vector<NodeId>>& prev,
                           const Graph& base,
                           std::vector<std::vector<NodeId>>& out,
                           std::vector<std::uint8_t>& scratch) {
    const std::size_t n = prev.size();
    out.assign(n, {});
    for (NodeId i = 0; i < n; ++i) {
        auto& row = out[i];
        for (NodeId j : prev[i]) {
            for (NodeId t : base.neighbors(j)) {
                if (!scratch[t]) {
                    scratch[t] = 1;
                    row.push_back(t);
                }
            }
        }
        std::sort(row.begin(), row.end());
        for (NodeId t : row) scratch[t] = 0;
    }
}

inline std::vector<NodeId> with_self(std::span<const NodeId> row, NodeId i) {
    std::vector<NodeId> out;
    out.reserve(row.size() + 1);
    bool placed = false;
    for (NodeId t : row) {
        if (!placed && t >= i) {
            if (t != i) out.push_back(i);
            placed = true;
        }
        out.push_back(t);
    }
    if (!placed) out.push_back(i);
    return out;
}

}  // namespace detail

// Hop-1 sets come from the original adjacency; hops >= 2 are the nonzeros
// of the boolean power A-tilde^h (walks of length exactly h). Self is
// always unioned in. `within` switches to the cumulative union of powers
// 1..h of A-tilde instead of the exact power.
inline HopNeighborhoods expand(const DebiasedAdjacency& dadj, int h_max,
                               const Graph& original, bool within = false) {
    if (h_max < 1) throw UsageError("h_max must be >= 1");
    const std::size_t n = original.num_nodes();
    if (dadj.adj.num_nodes() != n) throw UsageError("adjacency size mismatch");

    HopNeighborhoods hops(n, h_max);
    for (NodeId i = 0; i < n; ++i) {
        hops.append_row(1, detail::with_self(original.neighbors(i), i));
    }

    // power[i] holds the current A-tilde^h row (without self union).
    std::vector<std::vector<NodeId>> power(n), next;
    std::vector<std::vector<NodeId>> cumulative;
    if (within) cumulative.assign(n, {});
    for (NodeId i = 0; i < n; ++i) {
        auto nb = dadj.adj.neighbors(i);
        power[i].assign(nb.begin(), nb.end());
        if (within) cumulative[i] = power[i];
    }
    std::vector<std::uint8_t> scratch(n, 0);
    for (int h = 2; h <= h_max; ++h) {
        detail::bool_spmm_step(power, dadj.adj, next, scratch);
        power.swap(next);
        for (NodeId i = 0; i < n; ++i) {
            if (within) {
                std::vector<NodeId> merged;
                std::set_union(cumulative[i].begin(), cumulative[i].end(),
                               power[i].begin(), power[i].end(),
                               std::back_inserter(merged));
                cumulative[i] = std::move(merged);
                hops.append_row(h, detail::with_self(cumulative[i], i));
            } else {
                hops.append_row(h, detail::with_self(power[i], i));
            }
        }
    }
    return hops;
}

// Closeness statistics of the per-hop expanded graphs, per node group.
// The hop-1 graph is the original adjacency (nothing expanded yet); the
// hop-h graph for h >= 2 is the union of the debiased powers A-tilde^g for
// g <= h, i.e. the connections the expansion has strengthened so far.
// Central-central edges are absent from A-tilde by construction, which is
// what lets the marginal groups catch up. Gap is max - min of group mean
// closeness.
struct ExpansionReport {
    struct HopRow {
        int hop;
        std::vector<double> group_mean_closeness;
        double gap;
    };
    std::vector<HopRow> rows;
};

inline ExpansionReport expansion_report(const Graph& graph,
                                        const DebiasedAdjacency& dadj,
                                        const HopNeighborhoods& hops,
                                        const std::vector<int>& group_of,
                                        int num_groups) {
    const std::size_t n = graph.num_nodes();
    if (group_of.size() != n || num_groups < 1) throw UsageError("bad grouping");
    if (dadj.adj.num_nodes() != n) throw UsageError("adjacency size mismatch");
    ExpansionReport report;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j : dadj.adj.neighbors(i)) {
            if (i < j) edges.emplace_back(i, j);
        }
    }
    for (int h = 1; h <= hops.h_max(); ++h) {
        if (h >= 2) {
            for (NodeId i = 0; i < n; ++i) {
                for (NodeId j : hops.set(h, i)) {
                    if (j != i) edges.emplace_back(std::min(i, j), std::max(i, j));
                }
            }
        }
        const auto cc =
            h == 1 ? closeness(graph) : closeness(Graph::from_edges(n, edges));
        std::vector<double> sum(num_groups, 0.0);
        std::vector<std::size_t> count(num_groups, 0);
        for (NodeId i = 0; i < n; ++i) {
            sum[group_of[i]] += cc.scores[i];
            ++count[group_of[i]];
        }
        ExpansionReport::HopRow row{h, {}, 0.0};
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (int gid = 0; gid < num_groups; ++gid) {
            const double mean = count[gid] ? sum[gid] / static_cast<double>(count[gid]) : 0.0;
            row.group_mean_closeness.push_back(mean);
            if (count[gid] == 0) continue;
            lo = first ? mean : std::min(lo, mean);
            hi = first ? mean : std::max(hi, mean);
            first = false;
        }
        row.gap = hi - lo;
        report.rows.push_back(std::move(row));
    }
    return report;
}

// Equal-width grouping of centrality scores, for report grouping when no
// intrinsic groups exist.
inline std::vector<int> bin_groups(const CentralityVector& cv, int num_groups) {
    if (num_groups < 1) throw UsageError("num_groups must be >= 1");
    double lo = cv.scores[0], hi = cv.scores[0];
    for (double v : cv.scores) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<int> group(cv.scores.size(), 0);
    if (hi > lo) {
        for (std::size_t i = 0; i < cv.scores.size(); ++i) {
            const int g = static_cast<int>((cv.scores[i] - lo) / (hi - lo) * num_groups);
            group[i] = std::min(g, num_groups - 1);
        }
    }
    return group;
}

}  // namespace sfair
