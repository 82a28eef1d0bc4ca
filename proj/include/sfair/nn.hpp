#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sfair/errors.hpp"
#include "sfair/matrix.hpp"
#include "sfair/rng.hpp"

namespace sfair {

struct Parameter {
    std::string name;
    DenseMatrix value;
    DenseMatrix grad;

    Parameter() = default;
    Parameter(std::string n, DenseMatrix v)
        : name(std::move(n)), value(std::move(v)), grad(value.rows, value.cols) {}

    void zero_grad() { grad.fill(0.0); }
};

// Xavier/Glorot uniform: i.i.d. on [-sqrt(6/(rows+cols)), +sqrt(6/(rows+cols))].
inline DenseMatrix xavier_init(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    if (rows == 0 || cols == 0) throw UsageError("xavier_init: zero dimension");
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    DenseMatrix m(rows, cols);
    Rng rng(seed);
    for (double& v : m.data) v = rng.uniform(-bound, bound);
    return m;
}

inline double leaky_relu(double x, double slope) {
    return x >= 0.0 ? x : slope * x;
}

inline double leaky_relu_grad(double x, double slope) {
    return x >= 0.0 ? 1.0 : slope;
}

inline double elu(double x) { return x >= 0.0 ? x : std::expm1(x); }

inline double elu_grad(double x) { return x >= 0.0 ? 1.0 : std::exp(x); }

// Row-wise softmax with per-row max subtraction.
inline DenseMatrix softmax_rows(const DenseMatrix& m) {
    DenseMatrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* in = m.row(i);
        double* o = out.row(i);
        double mx = in[0];
        for (std::size_t j = 1; j < m.cols; ++j) mx = std::max(mx, in[j]);
        double sum = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) {
            o[j] = std::exp(in[j] - mx);
            sum += o[j];
        }
        for (std::size_t j = 0; j < m.cols; ++j) o[j] /= sum;
    }
    return out;
}

struct CrossEntropyResult {
    double loss;
    DenseMatrix grad;  // d loss / d logits
};

// Mean over masked rows of -log softmax(logits)[label].
inline CrossEntropyResult cross_entropy(const DenseMatrix& logits,
                                        const std::vector<int>& labels,
                                        const std::vector<std::uint8_t>& mask) {
    if (labels.size() != logits.rows || mask.size() != logits.rows) {
        throw UsageError("cross_entropy: label/mask length mismatch");
    }
    std::size_t count = 0;
    for (auto m : mask) count += m;
    if (count == 0) throw UsageError("cross_entropy: empty mask");

    const DenseMatrix probs = softmax_rows(logits);
    CrossEntropyResult res{0.0, DenseMatrix(logits.rows, logits.cols)};
    const double inv = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < logits.rows; ++i) {
        if (!mask[i]) continue;
        const int y = labels[i];
        if (y < 0 || static_cast<std::size_t>(y) >= logits.cols) {
            throw UsageError("cross_entropy: label out of range");
        }
        res.loss -= std::log(probs.at(i, y));
        for (std::size_t j = 0; j < logits.cols; ++j) {
            res.grad.at(i, j) = (probs.at(i, j) - (static_cast<int>(j) == y ? 1.0 : 0.0)) * inv;
        }
    }
    res.loss *= inv;
    return res;
}

struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::size_t step = 0;
    std::vector<DenseMatrix> m;  // first moments, one per parameter
    std::vector<DenseMatrix> v;  // second moments
};

inline void adam_step(std::vector<Parameter*>& params, AdamState& state, double lr) {
    if (state.m.empty()) {
        for (const Parameter* p : params) {
            state.m.emplace_back(p->value.rows, p->value.cols);
            state.v.emplace_back(p->value.rows, p->value.cols);
        }
    }
    if (state.m.size() != params.size()) throw StateError("adam state/parameter mismatch");
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t p = 0; p < params.size(); ++p) {
        auto& value = params[p]->value.data;
        const auto& grad = params[p]->grad.data;
        auto& m = state.m[p].data;
        auto& v = state.v[p].data;
        for (std::size_t i = 0; i < value.size(); ++i) {
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * grad[i];
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            value[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
        }
    }
}

// Central-difference probe of analytic gradients. `loss` must recompute the
// full forward pass (and refill every parameter's grad) when called.
// Returns the max relative error over the probed coordinates.
inline double finite_difference_check(const std::function<double()>& loss,
                                      std::vector<Parameter*>& params,
                                      std::size_t probes_per_param,
                                      double epsilon, std::uint64_t seed) {
    loss();  // populate analytic grads at the current point
    std::vector<DenseMatrix> analytic;
    for (const Parameter* p : params) analytic.push_back(p->grad);

    Rng rng(seed);
    double worst = 0.0;
    for (std::size_t p = 0; p < params.size(); ++p) {
        auto& value = params[p]->value.data;
        const std::size_t probes = std::min(probes_per_param, value.size());
        for (std::size_t k = 0; k < probes; ++k) {
            const std::size_t idx = rng.uniform_index(value.size());
            const double saved = value[idx];
            value[idx] = saved + epsilon;
            const double up = loss();
            value[idx] = saved - epsilon;
            const double down = loss();
            value[idx] = saved;
            const double fd = (up - down) / (2.0 * epsilon);
            const double an = analytic[p].data[idx];
            const double diff = std::abs(fd - an);
            if (diff < 1e-9) continue;
            worst = std::max(worst, diff / std::max({std::abs(fd), std::abs(an), 1e-8}));
        }
    }
    loss();  // restore grads at the unperturbed point
    return worst;
}

}  // namespace sfair
