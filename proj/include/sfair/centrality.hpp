#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include "sfair/errors.hpp"
#include "sfair/graph.hpp"

namespace sfair {

enum class CentralityKind { closeness, eigenvector };

inline const char* to_string(CentralityKind k) {
    return k == CentralityKind::closeness ? "closeness" : "eigenvector";
}

inline CentralityKind centrality_kind_from_string(const std::string& s) {
    if (s == "closeness") return CentralityKind::closeness;
    if (s == "eigenvector") return CentralityKind::eigenvector;
    throw UsageError("unknown centrality kind: " + s);
}

struct PowerIterationError : NumericError {
    PowerIterationError(std::vector<double> iterate, double res, std::size_t iters)
        : NumericError("power iteration did not converge in " +
                       std::to_string(iters) + " iterations (residual " +
                       std::to_string(res) + "); bipartite oscillation?"),
          last_iterate(std::move(iterate)),
          residual(res) {}

    std::vector<double> last_iterate;
    double residual;
};

struct CentralityVector {
    CentralityKind kind;
    std::vector<double> scores;  // one per node, finite, >= 0
    bool normalized = false;     // min-max rescaled to [0,1]
};

// Wasserman-Faust component-scaled closeness: for node i reaching R other
// nodes with distance sum D, score = (R/D) * (R/(N-1)). Equals the plain
// (N-1)/sum(d) form on connected graphs; isolated nodes get 0.
inline CentralityVector closeness(const Graph& g) {
    const std::size_t n = g.num_nodes();
    if (n < 2) throw UsageError("closeness needs at least 2 nodes");
    CentralityVector cv{CentralityKind::closeness, std::vector<double>(n, 0.0), false};
    for (NodeId i = 0; i < n; ++i) {
        const auto dist = bfs_distances(g, i);
        double sum = 0.0;
        std::size_t reached = 0;
        for (NodeId j = 0; j < n; ++j) {
            if (j == i || dist[j] == kUnreachable) continue;
            sum += static_cast<double>(dist[j]);
            ++reached;
        }
        if (reached > 0) {
            const double r = static_cast<double>(reached);
            cv.scores[i] = (r / sum) * (r / static_cast<double>(n - 1));
        }
    }
    return cv;
}

// Power iteration for the dominant eigenvector of A. Iterates on A + I,
// which has exactly the same eigenvectors as A but a strictly positive
// dominant gap, so bipartite +/- oscillation cannot occur. Converged when
// the max per-entry change drops below tol and the Rayleigh residual
// ||A x - lambda x||_2 of the unshifted matrix is below 5 * tol.
inline CentralityVector eigenvector(const Graph& g, double tol = 1e-8,
                                    std::size_t max_iter = 10000) {
    const std::size_t n = g.num_nodes();
    if (n < 1) throw UsageError("eigenvector needs at least 1 node");
    if (!(tol > 0.0)) throw UsageError("tol must be positive");

    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> y(n);
    double change = 0.0;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        for (NodeId i = 0; i < n; ++i) {
            double acc = x[i];  // the +I shift
            for (NodeId j : g.neighbors(i)) acc += x[j];
            y[i] = acc;
        }
        double norm = 0.0;
        for (double v : y) norm += v * v;
        norm = std::sqrt(norm);
        change = 0.0;
        for (NodeId i = 0; i < n; ++i) {
            y[i] /= norm;
            change = std::max(change, std::abs(y[i] - x[i]));
        }
        x.swap(y);
        if (change < tol) {
            // y still holds the previous iterate; reuse it for A*x.
            double lambda = 0.0;
            for (NodeId i = 0; i < n; ++i) {
                double acc = 0.0;
                for (NodeId j : g.neighbors(i)) acc += x[j];
                y[i] = acc;
                lambda += acc * x[i];
            }
            double resid = 0.0;
            for (NodeId i = 0; i < n; ++i) {
                const double r = y[i] - lambda * x[i];
                resid += r * r;
            }
            if (std::sqrt(resid) < 5.0 * tol) {
                return {CentralityKind::eigenvector, std::move(x), false};
            }
        }
    }
    throw PowerIterationError(std::move(x), change, max_iter);
}

// Affine rescale to [0,1]; constant input maps to all-zeros.
inline CentralityVector normalize_minmax(CentralityVector cv) {
    double lo = cv.scores.empty() ? 0.0 : cv.scores[0];
    double hi = lo;
    for (double v : cv.scores) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi > lo) {
        for (double& v : cv.scores) v = (v - lo) / (hi - lo);
    } else {
        for (double& v : cv.scores) v = 0.0;
    }
    cv.normalized = true;
    return cv;
}

inline void export_centrality_csv(const CentralityVector& cv, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write: " + path);
    out << "node_id,score\n" << std::setprecision(17);
    for (std::size_t i = 0; i < cv.scores.size(); ++i) {
        out << i << ',' << cv.scores[i] << '\n';
    }
}

}  // namespace sfair
