// Command-line surface: train / audit / sweep / expand / synth.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sfair/run.hpp"

namespace fs = std::filesystem;
using namespace sfair;

namespace {

struct CliOptions {
    RunConfig run;
    std::string centrality_name = "closeness";
    std::string fusion_name = "max";
    std::string model_name = "sfair";
};

void add_run_options(CLI::App* cmd, CliOptions& opt, bool needs_dataset) {
    auto* ds = cmd->add_option("--dataset", opt.run.edges_path, "edge list file");
    if (needs_dataset) ds->required();
    ds->envname("SFAIR_DATASET");
    cmd->add_option("--labels", opt.run.labels_path,
                    "label file (default: labels.tsv next to the edge list)")
        ->envname("SFAIR_LABELS");
    cmd->add_option("--centrality", opt.centrality_name, "closeness|eigenvector")
        ->check(CLI::IsMember({"closeness", "eigenvector"}))
        ->envname("SFAIR_CENTRALITY");
    cmd->add_flag("--raw-space", opt.run.raw_space,
                  "apply the margin line to raw (un-normalized) scores");
    cmd->add_option("--line", opt.run.line, "margin line threshold")->envname("SFAIR_LINE");
    cmd->add_option("--hops", opt.run.h_max, "hop number h")->envname("SFAIR_HOPS");
    cmd->add_flag("--within-hops", opt.run.within_hops,
                  "hop sets accumulate powers 1..h instead of exactly h");
    cmd->add_option("--fusion", opt.fusion_name, "seq|avg|max")
        ->check(CLI::IsMember({"seq", "avg", "max"}))
        ->envname("SFAIR_FUSION");
    cmd->add_option("--model", opt.model_name, "sfair|gcn|gat")
        ->check(CLI::IsMember({"sfair", "gcn", "gat"}))
        ->envname("SFAIR_MODEL");
    cmd->add_option("--layers", opt.run.layers, "number of GNN layers");
    cmd->add_option("--embed-dim", opt.run.embed_dim, "trainable input embedding width");
    cmd->add_option("--hidden-dim", opt.run.hidden_dim, "hidden width");
    cmd->add_option("--epochs", opt.run.epochs, "training epochs")->envname("SFAIR_EPOCHS");
    cmd->add_option("--lr", opt.run.lr, "Adam learning rate")->envname("SFAIR_LR");
    cmd->add_option("--seed", opt.run.seed, "run seed")->envname("SFAIR_SEED");
    cmd->add_option("--split-ratio", opt.run.split_ratio, "train fraction");
    cmd->add_option("--bins", opt.run.bins, "centrality bins for the audit")
        ->envname("SFAIR_BINS");
    cmd->add_option("--min-count", opt.run.min_count, "min test nodes per retained bin");
    cmd->add_option("--out", opt.run.out_dir, "output directory")->envname("SFAIR_OUT");
    cmd->set_config("--config")->envname("SFAIR_CONFIG");
}

RunConfig resolve(CliOptions& opt) {
    opt.run.centrality = centrality_kind_from_string(opt.centrality_name);
    opt.run.fusion = fusion_from_string(opt.fusion_name);
    opt.run.model = model_kind_from_string(opt.model_name);
    if (opt.run.labels_path.empty() && !opt.run.edges_path.empty()) {
        opt.run.labels_path = (fs::path(opt.run.edges_path).parent_path() / "labels.tsv").string();
    }
    return opt.run;
}

std::map<std::string, std::string> read_checkpoint_meta(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open checkpoint: " + path);
    std::map<std::string, std::string> meta;
    std::string line;
    while (std::getline(in, line) && line != "END") {
        const auto sp = line.find(' ');
        if (sp != std::string::npos) meta[line.substr(0, sp)] = line.substr(sp + 1);
    }
    return meta;
}

int cmd_train(CliOptions& opt) {
    const RunConfig cfg = resolve(opt);
    fs::create_directories(cfg.out_dir);
    TrainingRun result = run_training(cfg);
    const auto config = echo_config(cfg);
    result.model.save_checkpoint((fs::path(cfg.out_dir) / "checkpoint.bin").string(),
                                 {{"seed", std::to_string(cfg.seed)},
                                  {"epochs", std::to_string(cfg.epochs)},
                                  {"lr", format_double(cfg.lr)}});
    write_loss_curve(result.training, config,
                     (fs::path(cfg.out_dir) / "loss_curve.csv").string());
    write_config(config, (fs::path(cfg.out_dir) / "config.txt").string());
    std::cout << "trained " << to_string(cfg.model) << " for " << cfg.epochs
              << " epochs; final loss " << result.training.losses.back() << "\n"
              << "checkpoint: " << (fs::path(cfg.out_dir) / "checkpoint.bin").string()
              << "\n";
    return 0;
}

int cmd_audit(CliOptions& opt, const std::string& checkpoint,
              const std::string& baseline_json) {
    RunConfig cfg = resolve(opt);
    const auto meta = read_checkpoint_meta(checkpoint);
    if (auto it = meta.find("seed"); it != meta.end()) cfg.seed = std::stoull(it->second);
    if (auto it = meta.find("fusion"); it != meta.end()) cfg.fusion = fusion_from_string(it->second);
    if (auto it = meta.find("kind"); it != meta.end()) cfg.model = model_kind_from_string(it->second);
    if (auto it = meta.find("h_max"); it != meta.end()) cfg.h_max = std::stoi(it->second);

    fs::create_directories(cfg.out_dir);
    PipelineState st = prepare(cfg);
    Model model = Model::load_checkpoint(checkpoint, st.dataset.graph);
    if (model.num_classes() != st.dataset.num_classes) {
        throw StateError("checkpoint classes do not match dataset");
    }
    const HopNeighborhoods* hops = cfg.model == ModelKind::gcn ? nullptr : &st.hops;
    Predictions preds = predict(model, hops);

    auto config = echo_config(cfg);
    config["audit_space"] = "normalized";
    config["checkpoint"] = checkpoint;

    std::optional<FairnessReport> baseline;
    if (!baseline_json.empty()) {
        std::ifstream in(baseline_json);
        if (!in) throw UsageError("cannot open baseline report: " + baseline_json);
        nlohmann::json j = nlohmann::json::parse(in);
        FairnessReport b;
        if (!j["std_metric"].is_null()) b.std_metric = j["std_metric"].get<double>();
        if (!j["pcc_metric"].is_null()) b.pcc_metric = j["pcc_metric"].get<double>();
        baseline = std::move(b);
    }
    FairnessReport report =
        build_report(st.dataset, st.centrality_norm, preds.probabilities, preds.argmax,
                     cfg.bins, cfg.min_count, config, baseline ? &*baseline : nullptr);

    write_report_json(report, (fs::path(cfg.out_dir) / "report.json").string());
    write_report_csv(report, (fs::path(cfg.out_dir) / "report.csv").string());
    write_bins_csv(report, (fs::path(cfg.out_dir) / "bins.csv").string());
    std::cout << "acc " << report.accuracy_pct << " std " << opt_str(report.std_metric)
              << " pcc " << opt_str(report.pcc_metric) << "\n";
    return 0;
}

struct SweepPoint {
    std::string value;
    RunConfig cfg;
};

int cmd_sweep(CliOptions& opt, const std::string& grid, int num_seeds) {
    RunConfig base = resolve(opt);
    std::vector<SweepPoint> points;
    if (grid == "hops") {
        for (int h = 1; h <= 5; ++h) {
            RunConfig c = base;
            c.h_max = h;
            points.push_back({std::to_string(h), c});
        }
    } else if (grid == "line") {
        for (int i = 1; i <= 9; ++i) {
            RunConfig c = base;
            c.line = i / 10.0;
            points.push_back({format_double(c.line), c});
        }
    } else if (grid == "fusion") {
        for (FusionKind f : {FusionKind::SEQ, FusionKind::AVG, FusionKind::MAX}) {
            RunConfig c = base;
            c.fusion = f;
            points.push_back({to_string(f), c});
        }
    } else {
        throw UsageError("grid must be one of hops|line|fusion");
    }

    fs::create_directories(base.out_dir);
    const std::string path = (fs::path(base.out_dir) / ("sweep_" + grid + ".csv")).string();
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write: " + path);
    for (const auto& [k, v] : echo_config(base)) out << "# " << k << " = " << v << '\n';
    out << "param,value,seed,metric,metric_value\n" << std::setprecision(17);

    std::map<std::string, std::map<std::string, std::vector<double>>> by_point;
    for (const auto& point : points) {
        for (int s = 0; s < num_seeds; ++s) {
            RunConfig cfg = point.cfg;
            cfg.seed = base.seed + static_cast<std::uint64_t>(s);
            try {
                RunResult r = run_pipeline(cfg);
                auto emit = [&](const std::string& metric, double v) {
                    out << grid << ',' << point.value << ',' << cfg.seed << ',' << metric
                        << ',' << v << '\n';
                    by_point[point.value][metric].push_back(v);
                };
                emit("acc", r.report.accuracy_pct);
                if (r.report.std_metric) emit("std", *r.report.std_metric);
                if (r.report.pcc_metric) emit("pcc", *r.report.pcc_metric);
            } catch (const std::exception& e) {
                out << grid << ',' << point.value << ',' << cfg.seed << ",error,nan\n";
                std::cerr << "sweep point " << point.value << " seed " << cfg.seed
                          << " failed: " << e.what() << "\n";
            }
        }
    }
    for (const auto& point : points) {
        for (const auto& [metric, vals] : by_point[point.value]) {
            double mean = 0.0;
            for (double v : vals) mean += v;
            mean /= static_cast<double>(vals.size());
            out << grid << ',' << point.value << ",mean," << metric << ',' << mean << '\n';
        }
    }

    // Trend flags matching the hop-number and margin-line sensitivity plots.
    auto mean_of = [&](const std::string& value, const std::string& metric) {
        const auto& vals = by_point[value][metric];
        double m = 0.0;
        for (double v : vals) m += v;
        return vals.empty() ? std::nan("") : m / static_cast<double>(vals.size());
    };
    if (grid == "hops") {
        bool pcc_down = true, std_down = true;
        for (int h = 1; h < 4; ++h) {
            if (std::abs(mean_of(std::to_string(h + 1), "pcc")) >
                std::abs(mean_of(std::to_string(h), "pcc"))) pcc_down = false;
            if (mean_of(std::to_string(h + 1), "std") > mean_of(std::to_string(h), "std"))
                std_down = false;
        }
        out << "# trend_pcc_decreasing_below_hop4," << (pcc_down ? "true" : "false") << '\n';
        out << "# trend_std_decreasing_below_hop4," << (std_down ? "true" : "false") << '\n';
    } else if (grid == "line") {
        double best = std::numeric_limits<double>::infinity();
        std::string best_value;
        for (const auto& point : points) {
            const double m = mean_of(point.value, "std");
            if (std::isfinite(m) && m < best) {
                best = m;
                best_value = point.value;
            }
        }
        const bool middle = !best_value.empty() && best_value != points.front().value &&
                            best_value != points.back().value;
        out << "# trend_std_u_shape_minimum_in_middle," << (middle ? "true" : "false") << '\n';
    }
    std::cout << "sweep written to " << path << "\n";
    return 0;
}

int cmd_expand_report(CliOptions& opt, const std::string& groups_path) {
    RunConfig cfg = resolve(opt);
    fs::create_directories(cfg.out_dir);

    Graph graph = load_edge_list(cfg.edges_path);
    CentralityVector raw = cfg.centrality == CentralityKind::closeness
                               ? closeness(graph)
                               : eigenvector(graph);
    CentralityVector norm = normalize_minmax(raw);
    MarginConfig margin{cfg.line, cfg.centrality, !cfg.raw_space};
    auto mask = mark_marginal(cfg.raw_space ? raw : norm, margin);
    auto dadj = build_debiased_adjacency(graph, mask);
    auto hops = expand(dadj, cfg.h_max, graph, cfg.within_hops);

    std::vector<int> groups;
    int num_groups = 3;
    if (!groups_path.empty()) {
        std::ifstream in(groups_path);
        if (!in) throw UsageError("cannot open groups: " + groups_path);
        groups.assign(graph.num_nodes(), 0);
        std::string line;
        std::getline(in, line);  // header
        static const std::map<std::string, int> names{
            {"central", 0}, {"middle", 1}, {"marginal", 2}};
        while (std::getline(in, line)) {
            const auto comma = line.find(',');
            if (comma == std::string::npos) continue;
            const std::size_t id = std::stoul(line.substr(0, comma));
            if (id >= groups.size()) throw UsageError("group row out of range");
            groups[id] = names.at(line.substr(comma + 1));
        }
    } else {
        groups = bin_groups(norm, num_groups);
    }
    auto report = expansion_report(graph, dadj, hops, groups, num_groups);
    auto config = echo_config(cfg);
    write_expansion_report_csv(report, config,
                               (fs::path(cfg.out_dir) / "expansion_gap.csv").string());

    // Per-hop set-size histogram (log2-ish buckets by exact size).
    const std::string hist_path = (fs::path(cfg.out_dir) / "hop_set_sizes.csv").string();
    std::ofstream hist(hist_path);
    hist << "hop,set_size,node_count\n";
    for (int h = 1; h <= hops.h_max(); ++h) {
        std::map<std::size_t, std::size_t> sizes;
        for (NodeId i = 0; i < graph.num_nodes(); ++i) ++sizes[hops.set(h, i).size()];
        for (const auto& [size, count] : sizes) {
            hist << h << ',' << size << ',' << count << '\n';
        }
    }
    std::cout << "expansion report written to " << cfg.out_dir << "\n";
    return 0;
}

int cmd_synth(const std::string& kind, const std::string& out_dir, std::uint64_t seed,
              std::size_t core_size, std::size_t middle_per_core, std::size_t chain_len) {
    fs::create_directories(out_dir);
    if (kind == "three-group") {
        GroupedGraph gg = generate_three_group(core_size, middle_per_core, chain_len, seed);
        save_edge_list(gg.graph, (fs::path(out_dir) / "edges.tsv").string());
        save_groups_csv(gg, (fs::path(out_dir) / "groups.csv").string());
        // group tag doubles as a 3-class label set
        std::ofstream labels((fs::path(out_dir) / "labels.tsv").string());
        for (std::size_t i = 0; i < gg.group.size(); ++i) {
            labels << i << '\t' << gg.group[i] << '\n';
        }
        std::cout << "three-group graph with " << gg.graph.num_nodes() << " nodes in "
                  << out_dir << "\n";
    } else if (kind == "separable") {
        LabeledDataset ds = generate_separable_fixture(seed);
        save_edge_list(ds.graph, (fs::path(out_dir) / "edges.tsv").string());
        std::ofstream labels((fs::path(out_dir) / "labels.tsv").string());
        for (std::size_t i = 0; i < ds.labels.size(); ++i) {
            labels << i << '\t' << ds.labels[i] << '\n';
        }
        std::cout << "separable fixture with " << ds.graph.num_nodes() << " nodes in "
                  << out_dir << "\n";
    } else {
        throw UsageError("synth kind must be three-group or separable");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"structure-fairness GNN toolkit"};
    app.require_subcommand(1);

    CliOptions opt;
    std::string checkpoint, baseline_json, grid = "hops", groups_path;
    std::string synth_kind = "three-group";
    int num_seeds = 5;
    std::size_t core_size = 5, middle_per_core = 2, chain_len = 3;

    auto* train_cmd = app.add_subcommand("train", "train a model end to end");
    add_run_options(train_cmd, opt, true);

    auto* audit_cmd = app.add_subcommand("audit", "fairness audit of a trained checkpoint");
    add_run_options(audit_cmd, opt, true);
    audit_cmd->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
    audit_cmd->add_option("--baseline", baseline_json,
                          "baseline report.json for improvement columns");

    auto* sweep_cmd = app.add_subcommand("sweep", "hyperparameter sweep (one grid axis)");
    add_run_options(sweep_cmd, opt, true);
    sweep_cmd->add_option("--grid", grid, "hops|line|fusion")->required();
    sweep_cmd->add_option("--seeds", num_seeds, "seeds per grid point");

    auto* expand_cmd = app.add_subcommand("expand", "per-hop closeness expansion report");
    add_run_options(expand_cmd, opt, true);
    expand_cmd->add_option("--groups", groups_path, "node group CSV (default: centrality terciles)");

    auto* synth_cmd = app.add_subcommand("synth", "generate synthetic datasets");
    synth_cmd->add_option("--kind", synth_kind, "three-group|separable");
    synth_cmd->add_option("--out", opt.run.out_dir, "output directory");
    synth_cmd->add_option("--seed", opt.run.seed, "generator seed");
    synth_cmd->add_option("--core-size", core_size, "central clique size");
    synth_cmd->add_option("--middle-per-core", middle_per_core, "middle nodes per central");
    synth_cmd->add_option("--chain-len", chain_len, "marginal chain length");

    try {
        app.parse(argc, argv);
        if (train_cmd->parsed()) return cmd_train(opt);
        if (audit_cmd->parsed()) return cmd_audit(opt, checkpoint, baseline_json);
        if (sweep_cmd->parsed()) return cmd_sweep(opt, grid, num_seeds);
        if (expand_cmd->parsed()) return cmd_expand_report(opt, groups_path);
        if (synth_cmd->parsed()) {
            return cmd_synth(synth_kind, opt.run.out_dir, opt.run.seed, core_size,
                             middle_per_core, chain_len);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const StateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
