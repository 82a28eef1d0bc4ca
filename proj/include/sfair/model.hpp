#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "sfair/errors.hpp"
#include "sfair/expansion.hpp"
#include "sfair/graph.hpp"
#include "sfair/matrix.hpp"
#include "sfair/nn.hpp"

namespace sfair {

enum class FusionKind { SEQ, AVG, MAX };
enum class ModelKind { sfair, gcn, gat };

inline const char* to_string(FusionKind f) {
    switch (f) {
        case FusionKind::SEQ: return "seq";
        case FusionKind::AVG: return "avg";
        default: return "max";
    }
}

inline FusionKind fusion_from_string(const std::string& s) {
    if (s == "seq" || s == "SEQ") return FusionKind::SEQ;
    if (s == "avg" || s == "AVG") return FusionKind::AVG;
    if (s == "max" || s == "MAX") return FusionKind::MAX;
    throw UsageError("unknown fusion kind: " + s);
}

inline const char* to_string(ModelKind m) {
    switch (m) {
        case ModelKind::sfair: return "sfair";
        case ModelKind::gcn: return "gcn";
        default: return "gat";
    }
}

inline ModelKind model_kind_from_string(const std::string& s) {
    if (s == "sfair") return ModelKind::sfair;
    if (s == "gcn") return ModelKind::gcn;
    if (s == "gat") return ModelKind::gat;
    throw UsageError("unknown model kind: " + s);
}

struct ModelConfig {
    ModelKind kind = ModelKind::sfair;
    int num_layers = 2;
    std::size_t embed_dim = 64;
    std::size_t hidden_dim = 64;
    int h_max = 3;
    FusionKind fusion = FusionKind::MAX;
    double attn_slope = 0.2;
};

// Symmetric-normalized adjacency with self-loops for the GCN baseline:
// coefficient 1/sqrt((deg_i+1)(deg_j+1)) on edges and self-loops.
struct NormalizedAdjacency {
    std::vector<std::size_t> offsets;
    std::vector<NodeId> targets;
    std::vector<double> weights;

    NormalizedAdjacency() = default;

    explicit NormalizedAdjacency(const Graph& g) {
        const std::size_t n = g.num_nodes();
        offsets.reserve(n + 1);
        offsets.push_back(0);
        std::vector<double> inv_sqrt(n);
        for (NodeId i = 0; i < n; ++i) {
            inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(i) + 1));
        }
        for (NodeId i = 0; i < n; ++i) {
            bool self_done = false;
            for (NodeId j : g.neighbors(i)) {
                if (!self_done && j > i) {
                    targets.push_back(i);
                    weights.push_back(inv_sqrt[i] * inv_sqrt[i]);
                    self_done = true;
                }
                targets.push_back(j);
                weights.push_back(inv_sqrt[i] * inv_sqrt[j]);
            }
            if (!self_done) {
                targets.push_back(i);
                weights.push_back(inv_sqrt[i] * inv_sqrt[i]);
            }
            offsets.push_back(targets.size());
        }
    }

    // out = A_hat * x  (A_hat symmetric)
    DenseMatrix apply(const DenseMatrix& x) const {
        DenseMatrix out(x.rows, x.cols);
        for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
            double* o = out.row(i);
            for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) {
                const double w = weights[e];
                const double* xr = x.row(targets[e]);
                for (std::size_t c = 0; c < x.cols; ++c) o[c] += w * xr[c];
            }
        }
        return out;
    }
};

// SFairGNN stack (hop-aware attentive aggregation with SEQ/AVG/MAX fusion)
// plus GCN and GAT baselines. All variants consume a trainable random
// embedding matrix as input node features. Gradients are hand-derived
// reverse-mode passes; forward() caches everything backward() needs.
class Model {
public:
    Model(ModelConfig cfg, std::size_t num_nodes, int num_classes,
          const Graph& graph, std::uint64_t seed)
        : cfg_(cfg), num_nodes_(num_nodes), num_classes_(num_classes) {
        if (cfg_.num_layers < 1) throw UsageError("need at least one layer");
        if (cfg_.kind != ModelKind::sfair) cfg_.h_max = 1;
        if (cfg_.kind == ModelKind::sfair && cfg_.fusion == FusionKind::SEQ &&
            cfg_.embed_dim != cfg_.hidden_dim) {
            throw UsageError("SEQ fusion requires embed_dim == hidden_dim");
        }
        if (cfg_.kind == ModelKind::gcn) norm_adj_ = NormalizedAdjacency(graph);

        std::uint64_t stream = seed;
        x0_ = Parameter("x0", xavier_init(num_nodes_, cfg_.embed_dim, stream++));
        layers_.resize(cfg_.num_layers);
        for (int k = 0; k < cfg_.num_layers; ++k) {
            const std::size_t din = k == 0 ? cfg_.embed_dim : cfg_.hidden_dim;
            const std::size_t dout = cfg_.hidden_dim;
            const int hops = cfg_.kind == ModelKind::gcn ? 1 : cfg_.h_max;
            for (int h = 1; h <= hops; ++h) {
                // SEQ stages beyond the first consume the previous stage's
                // output, which has dout columns.
                const std::size_t stage_in =
                    (cfg_.fusion == FusionKind::SEQ && cfg_.kind == ModelKind::sfair && h > 1)
                        ? dout : din;
                HopParams hp;
                hp.weight = Parameter(param_name(k, h, "W"),
                                      xavier_init(dout, stage_in, stream++));
                if (cfg_.kind != ModelKind::gcn) {
                    hp.attn = Parameter(param_name(k, h, "a"),
                                        xavier_init(1, 2 * dout, stream++));
                }
                layers_[k].hops.push_back(std::move(hp));
            }
        }
        head_ = Parameter("head", xavier_init(num_classes_, cfg_.hidden_dim, stream++));
    }

    const ModelConfig& config() const { return cfg_; }
    std::size_t num_nodes() const { return num_nodes_; }
    int num_classes() const { return num_classes_; }

    std::vector<Parameter*> parameters() {
        std::vector<Parameter*> out{&x0_};
        for (auto& layer : layers_) {
            for (auto& hp : layer.hops) {
                out.push_back(&hp.weight);
                if (cfg_.kind != ModelKind::gcn) out.push_back(&hp.attn);
            }
        }
        out.push_back(&head_);
        return out;
    }

    void zero_grads() {
        for (Parameter* p : parameters()) p->zero_grad();
    }

    // Returns N x C logits. hops may be null for the GCN baseline.
    DenseMatrix forward(const HopNeighborhoods* hops) {
        if (cfg_.kind != ModelKind::gcn) {
            if (hops == nullptr) throw UsageError("attention models need neighborhoods");
            if (hops->num_nodes() != num_nodes_) throw StateError("neighborhood size mismatch");
            if (cfg_.kind == ModelKind::sfair && hops->h_max() < cfg_.h_max) {
                throw StateError("neighborhoods have fewer hops than the model");
            }
        }
        cache_.layers.assign(layers_.size(), {});
        const DenseMatrix* x = &x0_.value;
        for (std::size_t k = 0; k < layers_.size(); ++k) {
            const bool last = k + 1 == layers_.size();
            cache_.layers[k].input = *x;
            layer_forward(static_cast<int>(k), *x, hops, !last);
            x = &cache_.layers[k].output;
        }
        cache_.logits_input = *x;
        return matmul_nt(*x, head_.value);
    }

    // Accumulates parameter gradients for d loss / d logits. Must follow a
    // forward() with the same neighborhoods.
    void backward(const DenseMatrix& dlogits, const HopNeighborhoods* hops) {
        DenseMatrix dw_head = matmul_tn(dlogits, cache_.logits_input);
        axpy(1.0, dw_head, head_.grad);
        DenseMatrix dx = matmul(dlogits, head_.value);
        for (int k = static_cast<int>(layers_.size()) - 1; k >= 0; --k) {
            const bool last = k + 1 == static_cast<int>(layers_.size());
            dx = layer_backward(k, dx, hops, !last);
        }
        axpy(1.0, dx, x0_.grad);
    }

    void save_checkpoint(const std::string& path,
                         const std::vector<std::pair<std::string, std::string>>& extra) const;
    static Model load_checkpoint(const std::string& path, const Graph& graph);

private:
    struct HopParams {
        Parameter weight;  // dout x din
        Parameter attn;    // 1 x 2*dout, split into source/target halves
    };
    struct Layer {
        std::vector<HopParams> hops;
    };

    // Everything one hop aggregation needs to replay in reverse.
    struct HopCache {
        DenseMatrix input;   // stage input (SEQ stages differ from layer input)
        DenseMatrix z;       // input * W^T
        DenseMatrix y;       // pre-activation aggregate
        DenseMatrix out;     // activated aggregate
        std::vector<double> alpha;  // per neighbor pair, aligned with hop CSR
        std::vector<double> pre;    // attention logit before leaky-relu
    };
    struct LayerCache {
        DenseMatrix input;
        DenseMatrix output;
        std::vector<HopCache> hops;
        std::vector<std::uint8_t> argmax;  // MAX fusion: winning hop per element
    };
    struct Cache {
        std::vector<LayerCache> layers;
        DenseMatrix logits_input;
    };

    static std::string param_name(int layer, int hop, const char* what) {
        return "layer" + std::to_string(layer) + ".hop" + std::to_string(hop) +
               "." + what;
    }

    int hop_set_index(int h) const { return cfg_.kind == ModelKind::gat ? 1 : h; }

    // x^(h,k)_i = act( sum_j alpha_ij * W x_j ) over the hop-h neighbor set.
    void hop_forward(HopCache& hc, const HopParams& hp, const DenseMatrix& x,
                     const HopNeighborhoods& hops, int h, bool use_act) {
        const std::size_t dout = hp.weight.value.rows;
        hc.input = x;
        hc.z = matmul_nt(x, hp.weight.value);
        const double* a_src = hp.attn.value.data.data();
        const double* a_dst = a_src + dout;
        std::vector<double> ssrc(num_nodes_), sdst(num_nodes_);
        for (std::size_t i = 0; i < num_nodes_; ++i) {
            const double* zi = hc.z.row(i);
            double s = 0.0, t = 0.0;
            for (std::size_t c = 0; c < dout; ++c) {
                s += a_src[c] * zi[c];
                t += a_dst[c] * zi[c];
            }
            ssrc[i] = s;
            sdst[i] = t;
        }
        hc.alpha.assign(hops.total_pairs(hop_set_index(h)), 0.0);
        hc.pre.assign(hc.alpha.size(), 0.0);
        hc.y = DenseMatrix(num_nodes_, dout);
        std::size_t pair = 0;
        for (NodeId i = 0; i < num_nodes_; ++i) {
            const auto nbrs = hops.set(hop_set_index(h), i);
            const std::size_t base = pair;
            double mx = -std::numeric_limits<double>::infinity();
            for (NodeId j : nbrs) {
                const double e = leaky_relu(ssrc[i] + sdst[j], cfg_.attn_slope);
                hc.pre[pair] = ssrc[i] + sdst[j];
                hc.alpha[pair] = e;
                mx = std::max(mx, e);
                ++pair;
            }
            double sum = 0.0;
            for (std::size_t p = base; p < pair; ++p) {
                hc.alpha[p] = std::exp(hc.alpha[p] - mx);
                sum += hc.alpha[p];
            }
            double* yi = hc.y.row(i);
            for (std::size_t p = base; p < pair; ++p) {
                hc.alpha[p] /= sum;
                const double* zj = hc.z.row(nbrs[p - base]);
                for (std::size_t c = 0; c < dout; ++c) yi[c] += hc.alpha[p] * zj[c];
            }
        }
        hc.out = hc.y;
        if (use_act) {
            for (double& v : hc.out.data) v = elu(v);
        }
    }

    // Returns d loss / d stage-input.
    DenseMatrix hop_backward(const HopCache& hc, HopParams& hp,
                             const DenseMatrix& dout_act,
                             const HopNeighborhoods& hops, int h, bool use_act) {
        const std::size_t dcols = hp.weight.value.rows;
        DenseMatrix dy = dout_act;
        if (use_act) {
            for (std::size_t i = 0; i < dy.data.size(); ++i) {
                dy.data[i] *= elu_grad(hc.y.data[i]);
            }
        }
        DenseMatrix dz(num_nodes_, dcols);
        std::vector<double> dssrc(num_nodes_, 0.0), dsdst(num_nodes_, 0.0);
        std::size_t pair = 0;
        std::vector<double> dalpha;
        for (NodeId i = 0; i < num_nodes_; ++i) {
            const auto nbrs = hops.set(hop_set_index(h), i);
            const std::size_t base = pair;
            const double* dyi = dy.row(i);
            dalpha.assign(nbrs.size(), 0.0);
            double sum_term = 0.0;
            for (std::size_t p = 0; p < nbrs.size(); ++p) {
                const double* zj = hc.z.row(nbrs[p]);
                double acc = 0.0;
                for (std::size_t c = 0; c < dcols; ++c) acc += dyi[c] * zj[c];
                dalpha[p] = acc;
                sum_term += hc.alpha[base + p] * acc;
                double* dzj = dz.row(nbrs[p]);
                const double a = hc.alpha[base + p];
                for (std::size_t c = 0; c < dcols; ++c) dzj[c] += a * dyi[c];
            }
            for (std::size_t p = 0; p < nbrs.size(); ++p) {
                const double de = hc.alpha[base + p] * (dalpha[p] - sum_term);
                const double dpre = de * leaky_relu_grad(hc.pre[base + p], cfg_.attn_slope);
                dssrc[i] += dpre;
                dsdst[nbrs[p]] += dpre;
            }
            pair += nbrs.size();
        }
        const double* a_src = hp.attn.value.data.data();
        const double* a_dst = a_src + dcols;
        double* ga_src = hp.attn.grad.data.data();
        double* ga_dst = ga_src + dcols;
        for (std::size_t i = 0; i < num_nodes_; ++i) {
            const double* zi = hc.z.row(i);
            double* dzi = dz.row(i);
            for (std::size_t c = 0; c < dcols; ++c) {
                dzi[c] += dssrc[i] * a_src[c] + dsdst[i] * a_dst[c];
                ga_src[c] += dssrc[i] * zi[c];
                ga_dst[c] += dsdst[i] * zi[c];
            }
        }
        DenseMatrix dw = matmul_tn(dz, hc.input);
        axpy(1.0, dw, hp.weight.grad);
        return matmul(dz, hp.weight.value);
    }

    void gcn_forward(int k, const DenseMatrix& x, bool use_act) {
        auto& lc = cache_.layers[k];
        lc.hops.resize(1);
        auto& hc = lc.hops[0];
        hc.input = x;
        hc.z = matmul_nt(x, layers_[k].hops[0].weight.value);
        hc.y = norm_adj_.apply(hc.z);
        hc.out = hc.y;
        if (use_act) {
            for (double& v : hc.out.data) v = elu(v);
        }
        lc.output = hc.out;
    }

    DenseMatrix gcn_backward(int k, const DenseMatrix& dout_act, bool use_act) {
        auto& lc = cache_.layers[k];
        auto& hc = lc.hops[0];
        auto& hp = layers_[k].hops[0];
        DenseMatrix dy = dout_act;
        if (use_act) {
            for (std::size_t i = 0; i < dy.data.size(); ++i) {
                dy.data[i] *= elu_grad(hc.y.data[i]);
            }
        }
        DenseMatrix dz = norm_adj_.apply(dy);  // A_hat is symmetric
        DenseMatrix dw = matmul_tn(dz, hc.input);
        axpy(1.0, dw, hp.weight.grad);
        return matmul(dz, hp.weight.value);
    }

    void layer_forward(int k, const DenseMatrix& x, const HopNeighborhoods* hops,
                       bool use_act) {
        if (cfg_.kind == ModelKind::gcn) {
            gcn_forward(k, x, use_act);
            return;
        }
        auto& lc = cache_.layers[k];
        const int nhops = static_cast<int>(layers_[k].hops.size());
        lc.hops.resize(nhops);
        if (cfg_.fusion == FusionKind::SEQ && cfg_.kind == ModelKind::sfair) {
            const DenseMatrix* stage = &x;
            for (int h = 1; h <= nhops; ++h) {
                hop_forward(lc.hops[h - 1], layers_[k].hops[h - 1], *stage, *hops, h, use_act);
                stage = &lc.hops[h - 1].out;
            }
            lc.output = *stage;
            return;
        }
        for (int h = 1; h <= nhops; ++h) {
            hop_forward(lc.hops[h - 1], layers_[k].hops[h - 1], x, *hops, h, use_act);
        }
        const std::size_t dout = layers_[k].hops[0].weight.value.rows;
        lc.output = DenseMatrix(num_nodes_, dout);
        if (nhops == 1) {
            lc.output = lc.hops[0].out;
        } else if (cfg_.fusion == FusionKind::AVG) {
            for (int h = 0; h < nhops; ++h) axpy(1.0 / nhops, lc.hops[h].out, lc.output);
        } else {  // MAX, first hop wins ties
            lc.argmax.assign(lc.output.data.size(), 0);
            lc.output = lc.hops[0].out;
            for (int h = 1; h < nhops; ++h) {
                for (std::size_t i = 0; i < lc.output.data.size(); ++i) {
                    if (lc.hops[h].out.data[i] > lc.output.data[i]) {
                        lc.output.data[i] = lc.hops[h].out.data[i];
                        lc.argmax[i] = static_cast<std::uint8_t>(h);
                    }
                }
            }
        }
    }

    DenseMatrix layer_backward(int k, const DenseMatrix& dout,
                               const HopNeighborhoods* hops, bool use_act) {
        if (cfg_.kind == ModelKind::gcn) return gcn_backward(k, dout, use_act);
        auto& lc = cache_.layers[k];
        const int nhops = static_cast<int>(layers_[k].hops.size());
        if (cfg_.fusion == FusionKind::SEQ && cfg_.kind == ModelKind::sfair) {
            DenseMatrix d = dout;
            for (int h = nhops; h >= 1; --h) {
                d = hop_backward(lc.hops[h - 1], layers_[k].hops[h - 1], d, *hops, h, use_act);
            }
            return d;
        }
        DenseMatrix dx(lc.input.rows, lc.input.cols);
        for (int h = 0; h < nhops; ++h) {
            DenseMatrix dh(dout.rows, dout.cols);
            if (nhops == 1) {
                dh = dout;
            } else if (cfg_.fusion == FusionKind::AVG) {
                for (std::size_t i = 0; i < dout.data.size(); ++i) {
                    dh.data[i] = dout.data[i] / nhops;
                }
            } else {
                for (std::size_t i = 0; i < dout.data.size(); ++i) {
                    dh.data[i] = lc.argmax[i] == h ? dout.data[i] : 0.0;
                }
            }
            DenseMatrix dxi = hop_backward(lc.hops[h], layers_[k].hops[h], dh, *hops,
                                           h + 1, use_act);
            axpy(1.0, dxi, dx);
        }
        return dx;
    }

    ModelConfig cfg_;
    std::size_t num_nodes_;
    int num_classes_;
    Parameter x0_;
    std::vector<Layer> layers_;
    Parameter head_;
    NormalizedAdjacency norm_adj_;
    Cache cache_;
};

struct TrainConfig {
    int epochs = 200;
    double lr = 0.005;
};

struct TrainResult {
    std::vector<double> losses;  // one train-mask loss per epoch
};

// Full-batch Adam on train-mask cross-entropy.
inline TrainResult train(Model& model, const LabeledDataset& ds,
                         const HopNeighborhoods* hops, const TrainConfig& cfg) {
    if (ds.train_mask.size() != model.num_nodes()) throw StateError("train mask size mismatch");
    TrainResult result;
    auto params = model.parameters();
    AdamState adam;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        model.zero_grads();
        DenseMatrix logits = model.forward(hops);
        auto ce = cross_entropy(logits, ds.labels, ds.train_mask);
        if (!std::isfinite(ce.loss)) {
            throw NumericError("training diverged at epoch " + std::to_string(epoch) +
                               " (loss " + std::to_string(ce.loss) + ")");
        }
        model.backward(ce.grad, hops);
        adam_step(params, adam, cfg.lr);
        result.losses.push_back(ce.loss);
    }
    return result;
}

struct Predictions {
    DenseMatrix probabilities;  // N x C, rows sum to 1
    std::vector<int> argmax;
};

inline Predictions predict(Model& model, const HopNeighborhoods* hops) {
    Predictions out;
    out.probabilities = softmax_rows(model.forward(hops));
    out.argmax.resize(out.probabilities.rows);
    for (std::size_t i = 0; i < out.probabilities.rows; ++i) {
        const double* r = out.probabilities.row(i);
        int best = 0;
        for (std::size_t c = 1; c < out.probabilities.cols; ++c) {
            if (r[c] > r[best]) best = static_cast<int>(c);
        }
        out.argmax[i] = best;
    }
    return out;
}

// ---- checkpoint serialization -------------------------------------------
// Text header of `key value` lines, a shape table, an END marker, then the
// parameter blocks as row-major little-endian doubles in declared order.

inline void Model::save_checkpoint(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& extra) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write checkpoint: " + path);
    out << "SFAIR-CKPT 1\n";
    out << "kind " << to_string(cfg_.kind) << '\n';
    out << "fusion " << to_string(cfg_.fusion) << '\n';
    out << "num_layers " << cfg_.num_layers << '\n';
    out << "embed_dim " << cfg_.embed_dim << '\n';
    out << "hidden_dim " << cfg_.hidden_dim << '\n';
    out << "h_max " << cfg_.h_max << '\n';
    out << "attn_slope " << cfg_.attn_slope << '\n';
    out << "num_nodes " << num_nodes_ << '\n';
    out << "num_classes " << num_classes_ << '\n';
    for (const auto& [k, v] : extra) out << k << ' ' << v << '\n';
    auto params = const_cast<Model*>(this)->parameters();
    for (const Parameter* p : params) {
        out << "param " << p->name << ' ' << p->value.rows << ' ' << p->value.cols << '\n';
    }
    out << "END\n";
    for (const Parameter* p : params) {
        out.write(reinterpret_cast<const char*>(p->value.data.data()),
                  static_cast<std::streamsize>(p->value.data.size() * sizeof(double)));
    }
}

inline Model Model::load_checkpoint(const std::string& path, const Graph& graph) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open checkpoint: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "SFAIR-CKPT 1") {
        throw StateError("bad checkpoint magic in " + path);
    }
    ModelConfig cfg;
    std::size_t num_nodes = 0;
    int num_classes = 0;
    std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> shapes;
    while (std::getline(in, line) && line != "END") {
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "kind") { std::string v; ss >> v; cfg.kind = model_kind_from_string(v); }
        else if (key == "fusion") { std::string v; ss >> v; cfg.fusion = fusion_from_string(v); }
        else if (key == "num_layers") ss >> cfg.num_layers;
        else if (key == "embed_dim") ss >> cfg.embed_dim;
        else if (key == "hidden_dim") ss >> cfg.hidden_dim;
        else if (key == "h_max") ss >> cfg.h_max;
        else if (key == "attn_slope") ss >> cfg.attn_slope;
        else if (key == "num_nodes") ss >> num_nodes;
        else if (key == "num_classes") ss >> num_classes;
        else if (key == "param") {
            std::string name;
            std::size_t r, c;
            ss >> name >> r >> c;
            shapes.emplace_back(name, std::make_pair(r, c));
        }
        // unknown keys (seed, hyperparameter echoes) are preserved metadata
    }
    if (num_nodes != graph.num_nodes()) {
        throw StateError("checkpoint is for " + std::to_string(num_nodes) +
                         " nodes but graph has " + std::to_string(graph.num_nodes()));
    }
    Model model(cfg, num_nodes, num_classes, graph, /*seed=*/0);
    auto params = model.parameters();
    if (params.size() != shapes.size()) throw StateError("checkpoint parameter count mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& [name, shape] = shapes[i];
        if (name != params[i]->name || shape.first != params[i]->value.rows ||
            shape.second != params[i]->value.cols) {
            throw StateError("checkpoint shape mismatch for " + name);
        }
        in.read(reinterpret_cast<char*>(params[i]->value.data.data()),
                static_cast<std::streamsize>(params[i]->value.data.size() * sizeof(double)));
        if (!in) throw StateError("truncated checkpoint: " + path);
    }
    return model;
}

}  // namespace sfair
