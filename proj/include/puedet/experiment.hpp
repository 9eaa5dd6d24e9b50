#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "puedet/channel.hpp"
#include "puedet/detector.hpp"
#include "puedet/roc.hpp"
#include "puedet/training.hpp"

namespace puedet {

struct DetectorSpec {
    enum class Arch { Rnn, Lstm };

    Arch arch = Arch::Rnn;
    std::size_t depth = 1;  // LSTM layers; ignored for the basic RNN
    std::size_t hidden = 32;

    std::string name() const;
    // Accepts "rnn", "lstm1", "lstm3", or "lstm<N>".
    static DetectorSpec from_name(const std::string& name, std::size_t hidden = 32);
};

struct ExperimentSizes {
    std::size_t train_slots = 100000;  // attack-free training series
    std::size_t eval_slots = 20000;    // held-out normal and contaminated series
};

// One detector trained and evaluated on one PU model with one seed.
struct ExperimentReport {
    std::string detector;
    double mean_normal_loss = 0.0;
    double mean_contaminated_loss = 0.0;
    double auc = 0.0;
    std::uint64_t seed = 0;
    std::string config_digest;
    double runtime_seconds = 0.0;  // informational; kept out of written reports
};

// Full artifact set for CSV emission.
struct ExperimentRun {
    ExperimentReport report;
    std::vector<DetectionScore> normal_scores;
    std::vector<DetectionScore> contaminated_scores;
    RocCurve roc;
    std::vector<double> training_loss;
};

struct ExperimentSetup {
    OnOffModel model;
    SensingConfig sensing;
    AttackConfig attack;
    DetectorSpec detector;
    WindowConfig window;
    TrainOptions training;
    ExperimentSizes sizes;
    std::string config_digest;
};

// Generates a trace long enough for the requested slot count, senses it,
// and truncates to exactly `slots` observations.
SensedSeries simulate_series(const OnOffModel& model, const SensingConfig& sensing,
                             double attack_probability, std::size_t slots,
                             Rng& trace_rng, Rng& attack_rng);

// Trains on an attack-free series, scores held-out normal and contaminated
// series, and computes the ROC over their union. Deterministic per seed.
ExperimentRun run_experiment_full(const ExperimentSetup& setup, std::uint64_t seed);
ExperimentReport run_experiment(const ExperimentSetup& setup, std::uint64_t seed);

// Runs independent experiments on up to `jobs` threads. Results come back
// in input order regardless of scheduling.
std::vector<ExperimentRun> run_many(
    const std::vector<std::pair<ExperimentSetup, std::uint64_t>>& runs,
    std::size_t jobs);

// Orders reports by AUC descending, ties broken by detector name.
std::vector<ExperimentReport> compare_detectors(std::vector<ExperimentReport> reports);

// "a > b > c" ranking line for a sorted report list.
std::string format_ranking(const std::vector<ExperimentReport>& sorted);

// Seed-averaged summary of several runs of the same detector.
struct AggregateReport {
    std::string detector;
    double mean_normal_loss = 0.0;
    double mean_contaminated_loss = 0.0;
    double mean_auc = 0.0;
    std::size_t runs = 0;
};

AggregateReport aggregate_reports(std::span<const ExperimentReport> reports);

}  // namespace puedet
