#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfair/centrality.hpp"
#include "sfair/expansion.hpp"
#include "sfair/fairness.hpp"
#include "sfair/graph.hpp"
#include "sfair/model.hpp"
#include "sfair/synthetic.hpp"

namespace sfair {

// Fully resolved experiment configuration. Every output artifact echoes it.
struct RunConfig {
    std::string edges_path;
    std::string labels_path;
    CentralityKind centrality = CentralityKind::closeness;
    bool raw_space = false;  // apply the margin line to raw scores
    double line = 0.5;
    int h_max = 3;
    bool within_hops = false;
    FusionKind fusion = FusionKind::MAX;
    ModelKind model = ModelKind::sfair;
    int layers = 2;
    std::size_t embed_dim = 64;
    std::size_t hidden_dim = 64;
    int epochs = 200;
    double lr = 0.005;
    std::uint64_t seed = 1;
    double split_ratio = 0.9;
    int bins = 10;
    std::size_t min_count = 5;
    std::string out_dir = "out";
};

inline std::string format_double(double v) {
    std::ostringstream ss;
    ss << std::setprecision(17) << v;
    return ss.str();
}

inline std::map<std::string, std::string> echo_config(const RunConfig& cfg) {
    return {
        {"edges", cfg.edges_path},
        {"labels", cfg.labels_path},
        {"centrality", to_string(cfg.centrality)},
        {"threshold_space", cfg.raw_space ? "raw" : "normalized"},
        {"line", format_double(cfg.line)},
        {"hops", std::to_string(cfg.h_max)},
        {"within_hops", cfg.within_hops ? "true" : "false"},
        {"fusion", to_string(cfg.fusion)},
        {"model", to_string(cfg.model)},
        {"layers", std::to_string(cfg.layers)},
        {"embed_dim", std::to_string(cfg.embed_dim)},
        {"hidden_dim", std::to_string(cfg.hidden_dim)},
        {"epochs", std::to_string(cfg.epochs)},
        {"lr", format_double(cfg.lr)},
        {"seed", std::to_string(cfg.seed)},
        {"split_ratio", format_double(cfg.split_ratio)},
        {"bins", std::to_string(cfg.bins)},
        {"min_count", std::to_string(cfg.min_count)},
    };
}

inline std::uint64_t split_seed(std::uint64_t seed) {
    return seed + 0x9E3779B97F4A7C15ull;
}

struct PipelineState {
    LabeledDataset dataset;
    CentralityVector centrality_raw;
    CentralityVector centrality_norm;
    std::vector<std::uint8_t> marginal_mask;
    HopNeighborhoods hops{0, 1};
};

// Load + split + centrality (computed once per run) + neighborhood expansion.
inline PipelineState prepare(const RunConfig& cfg) {
    PipelineState st;
    Graph graph = load_edge_list(cfg.edges_path);
    st.dataset = split_train_test(load_labels(cfg.labels_path, std::move(graph)),
                                  cfg.split_ratio, split_seed(cfg.seed));
    st.centrality_raw = cfg.centrality == CentralityKind::closeness
                            ? closeness(st.dataset.graph)
                            : eigenvector(st.dataset.graph);
    st.centrality_norm = normalize_minmax(st.centrality_raw);

    MarginConfig margin{cfg.line, cfg.centrality, !cfg.raw_space};
    st.marginal_mask = mark_marginal(cfg.raw_space ? st.centrality_raw : st.centrality_norm,
                                     margin);
    // Baselines aggregate over 1-hop sets only.
    const int eff_h = cfg.model == ModelKind::sfair ? cfg.h_max : 1;
    auto dadj = build_debiased_adjacency(st.dataset.graph, st.marginal_mask);
    st.hops = expand(dadj, eff_h, st.dataset.graph, cfg.within_hops);
    return st;
}

struct RunResult {
    PipelineState state;
    Model model;
    TrainResult training;
    Predictions predictions;
    FairnessReport report;
};

// Training-only bundle: everything `train` produces before any audit.
struct TrainingRun {
    PipelineState state;
    Model model;
    TrainResult training;
    Predictions predictions;
};

inline ModelConfig model_config(const RunConfig& cfg) {
    ModelConfig mc;
    mc.kind = cfg.model;
    mc.num_layers = cfg.layers;
    mc.embed_dim = cfg.embed_dim;
    mc.hidden_dim = cfg.hidden_dim;
    mc.h_max = cfg.h_max;
    mc.fusion = cfg.fusion;
    return mc;
}

inline TrainingRun run_training(const RunConfig& cfg) {
    PipelineState st = prepare(cfg);
    Model model(model_config(cfg), st.dataset.graph.num_nodes(), st.dataset.num_classes,
                st.dataset.graph, cfg.seed);
    const HopNeighborhoods* hops = cfg.model == ModelKind::gcn ? nullptr : &st.hops;
    TrainResult training = train(model, st.dataset, hops, {cfg.epochs, cfg.lr});
    Predictions preds = predict(model, hops);
    return TrainingRun{std::move(st), std::move(model), std::move(training),
                       std::move(preds)};
}

// End-to-end train + audit. Centrality for the audit binning uses the
// normalized scores, recorded in the report's config echo.
inline RunResult run_pipeline(const RunConfig& cfg) {
    TrainingRun tr = run_training(cfg);
    auto config = echo_config(cfg);
    config["audit_space"] = "normalized";
    FairnessReport report =
        build_report(tr.state.dataset, tr.state.centrality_norm,
                     tr.predictions.probabilities, tr.predictions.argmax, cfg.bins,
                     cfg.min_count, config);
    return RunResult{std::move(tr.state), std::move(tr.model), std::move(tr.training),
                     std::move(tr.predictions), std::move(report)};
}

// ---- artifact writers ----------------------------------------------------

inline void write_config(const std::map<std::string, std::string>& config,
                         const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write: " + path);
    for (const auto& [k, v] : config) out << k << " = " << v << '\n';
}

inline void write_loss_curve(const TrainResult& training,
                             const std::map<std::string, std::string>& config,
                             const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write: " + path);
    for (const auto& [k, v] : config) out << "# " << k << " = " << v << '\n';
    out << "epoch,train_loss\n" << std::setprecision(17);
    for (std::size_t e = 0; e < training.losses.size(); ++e) {
        out << e << ',' << training.losses[e] << '\n';
    }
}

inline std::string opt_str(const std::optional<double>& v) {
    return v ? format_double(*v) : "undefined";
}

inline nlohmann::json report_to_json(const FairnessReport& rep) {
    nlohmann::json j;
    j["accuracy_pct"] = rep.accuracy_pct;
    j["std_metric"] = rep.std_metric ? nlohmann::json(*rep.std_metric) : nlohmann::json();
    j["pcc_metric"] = rep.pcc_metric ? nlohmann::json(*rep.pcc_metric) : nlohmann::json();
    j["pcc_binary"] = rep.pcc_binary ? nlohmann::json(*rep.pcc_binary) : nlohmann::json();
    if (rep.std_improvement_pct) j["std_improvement_pct"] = *rep.std_improvement_pct;
    if (rep.pcc_improvement_pct) j["pcc_improvement_pct"] = *rep.pcc_improvement_pct;
    j["bins"] = nlohmann::json::array();
    for (std::size_t b = 0; b < rep.bin_table.counts.size(); ++b) {
        j["bins"].push_back({{"lo", rep.bin_table.edges[b]},
                             {"hi", rep.bin_table.edges[b + 1]},
                             {"count", rep.bin_table.counts[b]},
                             {"accuracy", rep.bin_table.accuracy[b]},
                             {"retained", static_cast<bool>(rep.bin_table.retained[b])}});
    }
    j["config"] = rep.config;
    return j;
}

inline void write_report_json(const FairnessReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write: " + path);
    out << report_to_json(rep).dump(2) << '\n';
}

// Flat one-row CSV: dataset, model, fusion, hop, line, seed, acc, std, pcc,
// pcc_binary.
inline void write_report_csv(const FairnessReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write: " + path);
    auto get = [&](const std::string& key) {
        auto it = rep.config.find(key);
        return it == rep.config.end() ? std::string() : it->second;
    };
    out << "dataset,model,fusion,hop,line,seed,acc,std,pcc,pcc_binary\n";
    out << get("edges") << ',' << get("model") << ',' << get("fusion") << ','
        << get("hops") << ',' << get("line") << ',' << get("seed") << ','
        << format_double(rep.accuracy_pct) << ',' << opt_str(rep.std_metric) << ','
        << opt_str(rep.pcc_metric) << ',' << opt_str(rep.pcc_binary) << '\n';
}

// Per-bin plot data: bin center vs mean accuracy, one row per bin.
inline void write_bins_csv(const FairnessReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write: " + path);
    for (const auto& [k, v] : rep.config) out << "# " << k << " = " << v << '\n';
    out << "bin_center,mean_accuracy,count\n" << std::setprecision(17);
    for (std::size_t b = 0; b < rep.bin_table.counts.size(); ++b) {
        const double center = 0.5 * (rep.bin_table.edges[b] + rep.bin_table.edges[b + 1]);
        out << center << ',' << rep.bin_table.accuracy[b] << ','
            << rep.bin_table.counts[b] << '\n';
    }
}

inline void write_expansion_report_csv(const ExpansionReport& rep,
                                       const std::map<std::string, std::string>& config,
                                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write: " + path);
    for (const auto& [k, v] : config) out << "# " << k << " = " << v << '\n';
    out << "hop,group,mean_closeness,gap\n" << std::setprecision(17);
    for (const auto& row : rep.rows) {
        for (std::size_t g = 0; g < row.group_mean_closeness.size(); ++g) {
            out << row.hop << ',' << g << ',' << row.group_mean_closeness[g] << ','
                << row.gap << '\n';
        }
    }
}

}  // namespace sfair
