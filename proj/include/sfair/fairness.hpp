#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfair/centrality.hpp"
#include "sfair/errors.hpp"
#include "sfair/graph.hpp"
#include "sfair/matrix.hpp"

namespace sfair {

// Equal-width centrality bins over the test nodes; left-closed right-open
// except the last bin, which is right-closed.
struct BinTable {
    std::vector<double> edges;        // num_bins + 1 ascending boundaries
    std::vector<std::size_t> counts;  // test nodes per bin
    std::vector<double> accuracy;     // mean fraction correct per bin
    std::vector<std::uint8_t> retained;  // count >= min_count, used for STD
};

inline std::size_t bin_index(const BinTable& table, double score);

inline BinTable bin_by_centrality(const CentralityVector& cv,
                                  const std::vector<std::uint8_t>& test_mask,
                                  int num_bins, std::size_t min_count) {
    if (num_bins < 2) throw UsageError("need at least 2 bins");
    if (test_mask.size() != cv.scores.size()) throw UsageError("mask length mismatch");
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < cv.scores.size(); ++i) {
        if (!test_mask[i]) continue;
        lo = first ? cv.scores[i] : std::min(lo, cv.scores[i]);
        hi = first ? cv.scores[i] : std::max(hi, cv.scores[i]);
        first = false;
    }
    if (first) throw UsageError("empty test mask");

    BinTable table;
    if (hi == lo) {
        // constant scores: one degenerate bin holds everything
        table.edges = {lo, hi};
        table.counts = {0};
        table.accuracy = {0.0};
        table.retained = {0};
    } else {
        table.edges.resize(num_bins + 1);
        for (int b = 0; b <= num_bins; ++b) {
            table.edges[b] = lo + (hi - lo) * static_cast<double>(b) / num_bins;
        }
        // pin the endpoints so the extreme scores always land inside
        table.edges.front() = lo;
        table.edges.back() = hi;
        table.counts.assign(num_bins, 0);
        table.accuracy.assign(num_bins, 0.0);
        table.retained.assign(num_bins, 0);
    }
    for (std::size_t i = 0; i < cv.scores.size(); ++i) {
        if (!test_mask[i]) continue;
        ++table.counts[bin_index(table, cv.scores[i])];
    }
    bool any = false;
    for (std::size_t b = 0; b < table.counts.size(); ++b) {
        table.retained[b] = table.counts[b] >= min_count ? 1 : 0;
        any = any || table.retained[b];
    }
    if (!any) throw UsageError("all centrality bins are underpopulated");
    return table;
}

inline std::size_t bin_index(const BinTable& table, double score) {
    const std::size_t num_bins = table.counts.size();
    if (num_bins == 1) return 0;
    const double lo = table.edges.front();
    const double hi = table.edges.back();
    auto idx = static_cast<long long>((score - lo) / (hi - lo) * static_cast<double>(num_bins));
    if (idx < 0) idx = 0;
    if (idx >= static_cast<long long>(num_bins)) idx = static_cast<long long>(num_bins) - 1;
    return static_cast<std::size_t>(idx);
}

// Population standard deviation of retained per-bin accuracies, x100.
inline double std_metric(const BinTable& table) {
    std::vector<double> vals;
    for (std::size_t b = 0; b < table.counts.size(); ++b) {
        if (table.retained[b]) vals.push_back(table.accuracy[b]);
    }
    if (vals.size() < 2) throw UsageError("std_metric needs at least 2 retained bins");
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= static_cast<double>(vals.size());
    return std::sqrt(var) * 100.0;
}

// Two-pass Pearson correlation; nullopt when either variable is constant.
inline std::optional<double> pearson(const std::vector<double>& x,
                                     const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw UsageError("pearson needs >= 2 pairs");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

// Pearson correlation (x100) between centrality and the model's probability
// for each test node's true class.
inline std::optional<double> pcc_metric(const CentralityVector& cv,
                                        const std::vector<double>& true_class_prob,
                                        const std::vector<std::uint8_t>& test_mask) {
    if (cv.scores.size() != true_class_prob.size() || cv.scores.size() != test_mask.size()) {
        throw UsageError("pcc_metric length mismatch");
    }
    std::vector<double> s, p;
    for (std::size_t i = 0; i < test_mask.size(); ++i) {
        if (!test_mask[i]) continue;
        s.push_back(cv.scores[i]);
        p.push_back(true_class_prob[i]);
    }
    auto r = pearson(s, p);
    if (!r) return std::nullopt;
    return *r * 100.0;
}

struct FairnessReport {
    double accuracy_pct = 0.0;
    std::optional<double> std_metric;  // nullopt when < 2 retained bins
    std::optional<double> pcc_metric;  // continuous true-class probability
    std::optional<double> pcc_binary;  // point-biserial 0/1 correctness variant
    BinTable bin_table;
    std::map<std::string, std::string> config;  // resolved run config echo
    // Per-metric improvement over a baseline, (baseline - ours)/baseline.
    std::optional<double> std_improvement_pct;
    std::optional<double> pcc_improvement_pct;
};

inline double improvement_pct(double baseline, double ours) {
    return (baseline - ours) / baseline * 100.0;
}

inline FairnessReport build_report(const LabeledDataset& ds, const CentralityVector& cv,
                                   const DenseMatrix& probabilities,
                                   const std::vector<int>& predicted,
                                   int num_bins, std::size_t min_count,
                                   std::map<std::string, std::string> config,
                                   const FairnessReport* baseline = nullptr) {
    const std::size_t n = ds.graph.num_nodes();
    if (probabilities.rows != n || predicted.size() != n) {
        throw UsageError("predictions do not cover the dataset");
    }
    FairnessReport rep;
    rep.config = std::move(config);

    std::vector<double> true_prob(n, 0.0), correct(n, 0.0);
    std::size_t test_count = 0, test_correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        true_prob[i] = probabilities.at(i, ds.labels[i]);
        correct[i] = predicted[i] == ds.labels[i] ? 1.0 : 0.0;
        if (ds.test_mask[i]) {
            ++test_count;
            test_correct += predicted[i] == ds.labels[i];
        }
    }
    if (test_count == 0) throw UsageError("empty test mask");
    rep.accuracy_pct = 100.0 * static_cast<double>(test_correct) / static_cast<double>(test_count);

    rep.bin_table = bin_by_centrality(cv, ds.test_mask, num_bins, min_count);
    std::vector<double> bin_correct(rep.bin_table.counts.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!ds.test_mask[i]) continue;
        bin_correct[bin_index(rep.bin_table, cv.scores[i])] += correct[i];
    }
    for (std::size_t b = 0; b < rep.bin_table.counts.size(); ++b) {
        if (rep.bin_table.counts[b] > 0) {
            rep.bin_table.accuracy[b] =
                bin_correct[b] / static_cast<double>(rep.bin_table.counts[b]);
        }
    }
    std::size_t retained = 0;
    for (auto r : rep.bin_table.retained) retained += r;
    if (retained >= 2) rep.std_metric = std_metric(rep.bin_table);
    rep.pcc_metric = pcc_metric(cv, true_prob, ds.test_mask);
    rep.pcc_binary = pcc_metric(cv, correct, ds.test_mask);

    if (baseline) {
        if (baseline->std_metric && rep.std_metric) {
            rep.std_improvement_pct = improvement_pct(*baseline->std_metric, *rep.std_metric);
        }
        if (baseline->pcc_metric && rep.pcc_metric) {
            rep.pcc_improvement_pct = improvement_pct(*baseline->pcc_metric, *rep.pcc_metric);
        }
    }
    return rep;
}

}  // namespace sfair
