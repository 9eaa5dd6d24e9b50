// puedet: hyper-Erlang ON/OFF channel simulator plus RNN/LSTM PUE attack
// detectors. Subcommands cover the pipeline end to end: simulate, train,
// score, roc, and the full two-model reproduction run.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "puedet/checkpoint.hpp"
#include "puedet/config.hpp"
#include "puedet/csv.hpp"
#include "puedet/errors.hpp"
#include "puedet/experiment.hpp"
#include "puedet/lstm.hpp"
#include "puedet/rnn.hpp"

namespace fs = std::filesystem;
using namespace puedet;

namespace {

constexpr const char* kArchNames[3] = {"rnn", "lstm1", "lstm3"};

std::ofstream open_out(const fs::path& path) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path.string());
    }
    return out;
}

std::uint64_t derive_run_seed(std::uint64_t master, const std::string& tag) {
    return mix64(master ^ fnv1a64(tag));
}

// Training streams shared by `train` and `reproduce`, so a standalone
// checkpoint matches the in-pipeline model for the same seed.
LoadedModel train_model(const ExperimentSetup& setup, std::uint64_t seed,
                        std::vector<double>* history) {
    Rng trace_rng = Rng::stream(seed, "train_trace");
    Rng attack_rng = Rng::stream(seed, "train_attack");
    Rng train_rng = Rng::stream(seed, "train");
    const SensedSeries series = simulate_series(
        setup.model, setup.sensing, 0.0, setup.sizes.train_slots, trace_rng, attack_rng);
    TrainOptions options = setup.training;
    options.hidden = setup.detector.hidden;
    if (setup.detector.arch == DetectorSpec::Arch::Rnn) {
        RnnTrainResult result = rnn_train(series, setup.window, options, train_rng);
        if (history != nullptr) *history = result.loss_history;
        return std::move(result.params);
    }
    LstmTrainResult result =
        lstm_train(series, setup.window, setup.detector.depth, options, train_rng);
    if (history != nullptr) *history = result.loss_history;
    return std::move(result.params);
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed, bool seed_given,
                 const std::string& out_dir, bool out_given, std::size_t slots) {
    ExperimentConfig config = parse_config(config_path);
    const std::uint64_t use_seed = seed_given ? seed : config.seed;
    const fs::path dir = out_given ? out_dir : config.output_dir;

    Rng trace_rng = Rng::stream(use_seed, "trace");
    Rng attack_rng = Rng::stream(use_seed, "attack");
    const double horizon = double(slots) * config.sensing.slot_period();
    const ContinuousTrace trace =
        generate_trace(config.model, horizon, ChannelState::Off, trace_rng);
    SensedSeries series = sense(trace, config.sensing, config.attack, attack_rng);
    series.truncate(slots);

    auto trace_csv = open_out(dir / "trace.csv");
    write_trace_csv(trace_csv, trace);
    auto sensed_csv = open_out(dir / "sensed.csv");
    write_sensed_csv(sensed_csv, series);
    std::cout << "wrote " << (dir / "trace.csv").string() << " ("
              << trace.segments.size() << " segments) and "
              << (dir / "sensed.csv").string() << " (" << series.size() << " slots)\n";
    return 0;
}

int cmd_train(const std::string& config_path, std::uint64_t seed, bool seed_given,
              const std::string& out_dir, bool out_given, const std::string& arch) {
    ExperimentConfig config = parse_config(config_path);
    if (!arch.empty()) {
        config.detector = DetectorSpec::from_name(arch, config.detector.hidden);
        config.has_detector = true;
    }
    ExperimentSetup setup = config.setup();
    const std::uint64_t use_seed = seed_given ? seed : config.seed;
    const fs::path dir = out_given ? out_dir : config.output_dir;

    std::vector<double> history;
    LoadedModel model = train_model(setup, use_seed, &history);

    const fs::path ckpt = dir / (setup.detector.name() + ".ckpt");
    fs::create_directories(dir);
    if (const auto* rnn = std::get_if<RnnParams>(&model)) {
        save_checkpoint(*rnn, ckpt);
    } else {
        save_checkpoint(std::get<LstmStackParams>(model), ckpt);
    }
    std::cout << "trained " << setup.detector.name() << " for " << history.size()
              << " epochs (loss " << format_g17(history.front()) << " -> "
              << format_g17(history.back()) << ")\n"
              << "checkpoint: " << ckpt.string() << "\n";
    return 0;
}

int cmd_score(const std::string& config_path, const std::string& checkpoint_path,
              std::uint64_t seed, bool seed_given, const std::string& out_dir,
              bool out_given, bool normal) {
    ExperimentConfig config = parse_config(config_path);
    const std::uint64_t use_seed = seed_given ? seed : config.seed;
    const fs::path dir = out_given ? out_dir : config.output_dir;

    LoadedModel model = load_checkpoint(checkpoint_path);
    Rng trace_rng = Rng::stream(use_seed, normal ? "eval_normal_trace" : "eval_cont_trace");
    Rng attack_rng =
        Rng::stream(use_seed, normal ? "eval_normal_attack" : "eval_cont_attack");
    const double prob = normal ? 0.0 : config.attack.impulse_probability;
    const SensedSeries series =
        simulate_series(config.model, config.sensing, prob, config.sizes.eval_slots,
                        trace_rng, attack_rng);

    auto predictor = make_predictor(model);
    const std::vector<DetectionScore> scores =
        score_series(*predictor, series, config.window);

    auto csv = open_out(dir / "scores.csv");
    write_scores_csv(csv, scores);
    double mean = 0.0;
    std::size_t contaminated = 0;
    for (const DetectionScore& s : scores) {
        mean += s.loss;
        contaminated += s.contaminated ? 1 : 0;
    }
    mean /= double(scores.size());
    std::cout << "scored " << scores.size() << " steps with " << model_name(model)
              << " (mean loss " << format_g17(mean) << ", " << contaminated
              << " contaminated)\n"
              << "scores: " << (dir / "scores.csv").string() << "\n";
    return 0;
}

int cmd_roc(const std::string& scores_path, const std::string& out_dir) {
    std::ifstream in(scores_path);
    if (!in) {
        throw std::runtime_error("cannot open scores file: " + scores_path);
    }
    const std::vector<DetectionScore> scores = read_scores_csv(in);
    const RocCurve curve = roc_curve(scores);
    auto csv = open_out(fs::path(out_dir) / "roc.csv");
    write_roc_csv(csv, curve.points);
    std::cout << "auc " << format_g17(curve.auc) << " over " << scores.size()
              << " scores\n"
              << "roc: " << (fs::path(out_dir) / "roc.csv").string() << "\n";
    return 0;
}

struct ModelBlock {
    std::string tag;
    ExperimentConfig config;
};

int cmd_reproduce(const std::string& simple_path, const std::string& complex_path,
                  std::uint64_t seed, bool seed_given, std::size_t seeds,
                  bool seeds_given, const std::string& out_dir, bool out_given,
                  std::size_t jobs) {
    std::vector<ModelBlock> models;
    models.push_back({"simple", parse_config(simple_path)});
    models.push_back({"complex", parse_config(complex_path)});

    const std::uint64_t master = seed_given ? seed : models[0].config.seed;
    const std::size_t n_seeds = seeds_given ? seeds : models[0].config.seeds;
    const fs::path root = out_given ? out_dir : models[0].config.output_dir;
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

    struct RunKey {
        std::string model;
        std::string arch;
        std::size_t seed_index;
    };
    std::vector<RunKey> keys;
    std::vector<std::pair<ExperimentSetup, std::uint64_t>> runs;
    for (const ModelBlock& block : models) {
        for (const char* arch : kArchNames) {
            ExperimentConfig config = block.config;
            config.detector = DetectorSpec::from_name(arch, config.detector.hidden);
            config.has_detector = true;
            const ExperimentSetup setup = config.setup();
            for (std::size_t k = 0; k < n_seeds; ++k) {
                keys.push_back({block.tag, arch, k});
                // The data seed is shared by all three detectors for a given
                // (model, seed index): they train and score on identical
                // series, so AUC comparisons are paired.
                runs.emplace_back(setup, derive_run_seed(master, block.tag + "/" +
                                                                     std::to_string(k)));
            }
        }
    }

    std::cerr << "running " << runs.size() << " experiments on " << jobs
              << " thread(s)\n";
    const std::vector<ExperimentRun> results = run_many(runs, jobs);
    for (std::size_t i = 0; i < results.size(); ++i) {
        std::cerr << "  " << keys[i].model << "/" << keys[i].arch << " seed "
                  << keys[i].seed_index << ": auc " << results[i].report.auc << " ("
                  << results[i].report.runtime_seconds << "s)\n";
    }

    // Per-run CSV artifacts.
    for (std::size_t i = 0; i < results.size(); ++i) {
        const fs::path dir =
            root / keys[i].model / keys[i].arch / ("seed" + std::to_string(keys[i].seed_index));
        auto normal_csv = open_out(dir / "scores_normal.csv");
        write_scores_csv(normal_csv, results[i].normal_scores);
        auto cont_csv = open_out(dir / "scores_contaminated.csv");
        write_scores_csv(cont_csv, results[i].contaminated_scores);
        auto roc_csv = open_out(dir / "roc.csv");
        write_roc_csv(roc_csv, results[i].roc.points);
    }

    // Per-model reports plus the overall summary.
    std::string summary;
    for (const ModelBlock& block : models) {
        std::vector<ExperimentReport> mean_reports;
        std::string body;
        body += "PUE attack detection report\n";
        body += "model: " + block.tag + "\n";
        body += "config: " + block.config.digest + "\n";
        body += "master_seed: " + std::to_string(master) + "\n";
        body += "seeds_per_detector: " + std::to_string(n_seeds) + "\n";
        body += "train_slots: " + std::to_string(block.config.sizes.train_slots) + "\n";
        body += "eval_slots: " + std::to_string(block.config.sizes.eval_slots) + "\n\n";
        body += "detector mean_normal_loss mean_contaminated_loss mean_auc\n";
        std::string per_seed;
        for (const char* arch : kArchNames) {
            std::vector<ExperimentReport> group;
            for (std::size_t i = 0; i < results.size(); ++i) {
                if (keys[i].model == block.tag && keys[i].arch == arch) {
                    group.push_back(results[i].report);
                }
            }
            const AggregateReport agg = aggregate_reports(group);
            body += agg.detector + " " + format_g17(agg.mean_normal_loss) + " " +
                    format_g17(agg.mean_contaminated_loss) + " " +
                    format_g17(agg.mean_auc) + "\n";
            per_seed += agg.detector + ":";
            for (const ExperimentReport& r : group) {
                per_seed += " " + format_g17(r.auc);
            }
            per_seed += "\n";
            ExperimentReport mean_report;
            mean_report.detector = agg.detector;
            mean_report.auc = agg.mean_auc;
            mean_reports.push_back(mean_report);
        }
        body += "\nper_seed_auc:\n" + per_seed;
        const std::string ranking = format_ranking(compare_detectors(mean_reports));
        body += "\nranking_by_mean_auc: " + ranking + "\n";

        auto report = open_out(root / block.tag / "report.txt");
        report << body;
        summary += "[" + block.tag + "] ranking_by_mean_auc: " + ranking + "\n";
    }
    auto summary_file = open_out(root / "summary.txt");
    summary_file << summary;
    std::cout << summary;
    std::cout << "report directory: " << root.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyper-Erlang ON/OFF channel simulator with recurrent PUE attack detectors"};
    app.require_subcommand(1);

    std::string config_path, out_dir, arch, checkpoint_path, scores_path;
    std::string simple_path = "configs/simple.cfg";
    std::string complex_path = "configs/complex.cfg";
    std::uint64_t seed = 0;
    std::size_t slots = 10000, seeds = 3, jobs = 0;
    bool normal = false;

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Generate a PU activity trace and its sensed series as CSV");
    simulate->add_option("--config", config_path, "experiment config file")->required();
    simulate->add_option("--seed", seed, "master seed (default: config seed)");
    simulate->add_option("--out", out_dir, "output directory (default: config output_dir)");
    simulate->add_option("--slots", slots, "sensing slots to emit")->default_val(10000);

    CLI::App* train = app.add_subcommand(
        "train", "Train a detector on an attack-free series and save a checkpoint");
    train->add_option("--config", config_path, "experiment config file")->required();
    train->add_option("--seed", seed, "master seed (default: config seed)");
    train->add_option("--out", out_dir, "output directory (default: config output_dir)");
    train->add_option("--arch", arch, "detector: rnn, lstm1 or lstm3");

    CLI::App* score = app.add_subcommand(
        "score", "Score a held-out series with a trained checkpoint");
    score->add_option("--config", config_path, "experiment config file")->required();
    score->add_option("--checkpoint", checkpoint_path, "trained detector checkpoint")
        ->required();
    score->add_option("--seed", seed, "master seed (default: config seed)");
    score->add_option("--out", out_dir, "output directory (default: config output_dir)");
    score->add_flag("--normal", normal, "score an attack-free series instead");

    CLI::App* roc = app.add_subcommand("roc", "Compute a ROC curve and AUC from scores");
    roc->add_option("--scores", scores_path, "scores.csv produced by `score`")->required();
    roc->add_option("--out", out_dir, "output directory")->default_val(".");

    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "Run both PU models with all three detectors and write reports");
    reproduce->add_option("--simple", simple_path, "simple-model config file")
        ->capture_default_str();
    reproduce->add_option("--complex", complex_path, "complex-model config file")
        ->capture_default_str();
    reproduce->add_option("--seed", seed, "master seed (default: simple config seed)");
    reproduce->add_option("--seeds", seeds, "seeds per (model, detector)");
    reproduce->add_option("--out", out_dir, "report directory");
    reproduce->add_option("--jobs", jobs, "parallel runs (default: hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(config_path, seed, simulate->count("--seed") > 0, out_dir,
                                simulate->count("--out") > 0, slots);
        }
        if (train->parsed()) {
            return cmd_train(config_path, seed, train->count("--seed") > 0, out_dir,
                             train->count("--out") > 0, arch);
        }
        if (score->parsed()) {
            return cmd_score(config_path, checkpoint_path, seed,
                             score->count("--seed") > 0, out_dir,
                             score->count("--out") > 0, normal);
        }
        if (roc->parsed()) {
            return cmd_roc(scores_path, out_dir);
        }
        if (reproduce->parsed()) {
            return cmd_reproduce(simple_path, complex_path, seed,
                                 reproduce->count("--seed") > 0, seeds,
                                 reproduce->count("--seeds") > 0, out_dir,
                                 reproduce->count("--out") > 0, jobs);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
