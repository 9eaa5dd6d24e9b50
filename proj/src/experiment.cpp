#include "puedet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include "puedet/checkpoint.hpp"
#include "puedet/errors.hpp"
#include "puedet/lstm.hpp"
#include "puedet/rnn.hpp"

namespace puedet {

std::string DetectorSpec::name() const {
    if (arch == Arch::Rnn) return "rnn";
    return "lstm" + std::to_string(depth);
}

DetectorSpec DetectorSpec::from_name(const std::string& name, std::size_t hidden) {
    DetectorSpec spec;
    spec.hidden = hidden;
    if (name == "rnn") {
        spec.arch = Arch::Rnn;
        return spec;
    }
    if (name.rfind("lstm", 0) == 0 && name.size() > 4) {
        spec.arch = Arch::Lstm;
        try {
            spec.depth = std::stoull(name.substr(4));
        } catch (const std::exception&) {
            throw ValidationError("unknown detector '" + name + "'");
        }
        if (spec.depth == 0) {
            throw ValidationError("detector depth must be >= 1");
        }
        return spec;
    }
    throw ValidationError("unknown detector '" + name +
                          "' (expected rnn, lstm1 or lstm3)");
}

SensedSeries simulate_series(const OnOffModel& model, const SensingConfig& sensing,
                             double attack_probability, std::size_t slots,
                             Rng& trace_rng, Rng& attack_rng) {
    if (slots == 0) {
        throw ValidationError("simulate_series: slot count must be >= 1");
    }
    sensing.validate();
    const double horizon = double(slots) * sensing.slot_period();
    const ContinuousTrace trace =
        generate_trace(model, horizon, ChannelState::Off, trace_rng);
    AttackConfig attack{attack_probability};
    SensedSeries series = sense(trace, sensing, attack, attack_rng);
    series.truncate(slots);
    return series;
}

namespace {

double mean_loss(const std::vector<DetectionScore>& scores) {
    double sum = 0.0;
    for (const DetectionScore& s : scores) sum += s.loss;
    return scores.empty() ? 0.0 : sum / double(scores.size());
}

}  // namespace

ExperimentRun run_experiment_full(const ExperimentSetup& setup, std::uint64_t seed) {
    const auto started = std::chrono::steady_clock::now();
    setup.model.validate();
    setup.attack.validate();
    setup.window.validate();

    Rng train_trace = Rng::stream(seed, "train_trace");
    Rng train_attack = Rng::stream(seed, "train_attack");
    Rng train_rng = Rng::stream(seed, "train");
    Rng normal_trace = Rng::stream(seed, "eval_normal_trace");
    Rng normal_attack = Rng::stream(seed, "eval_normal_attack");
    Rng cont_trace = Rng::stream(seed, "eval_cont_trace");
    Rng cont_attack = Rng::stream(seed, "eval_cont_attack");

    const SensedSeries train_series =
        simulate_series(setup.model, setup.sensing, 0.0, setup.sizes.train_slots,
                        train_trace, train_attack);

    TrainOptions options = setup.training;
    options.hidden = setup.detector.hidden;

    ExperimentRun run;
    LoadedModel model;
    if (setup.detector.arch == DetectorSpec::Arch::Rnn) {
        RnnTrainResult trained = rnn_train(train_series, setup.window, options, train_rng);
        run.training_loss = std::move(trained.loss_history);
        model = std::move(trained.params);
    } else {
        LstmTrainResult trained =
            lstm_train(train_series, setup.window, setup.detector.depth, options, train_rng);
        run.training_loss = std::move(trained.loss_history);
        model = std::move(trained.params);
    }

    const SensedSeries normal_series =
        simulate_series(setup.model, setup.sensing, 0.0, setup.sizes.eval_slots,
                        normal_trace, normal_attack);
    const SensedSeries cont_series = simulate_series(
        setup.model, setup.sensing, setup.attack.impulse_probability,
        setup.sizes.eval_slots, cont_trace, cont_attack);

    auto predictor = make_predictor(model);
    run.normal_scores = score_series(*predictor, normal_series, setup.window);
    run.contaminated_scores = score_series(*predictor, cont_series, setup.window);

    std::vector<DetectionScore> all_scores = run.normal_scores;
    all_scores.insert(all_scores.end(), run.contaminated_scores.begin(),
                      run.contaminated_scores.end());
    run.roc = roc_curve(all_scores);

    run.report.detector = setup.detector.name();
    run.report.mean_normal_loss = mean_loss(run.normal_scores);
    run.report.mean_contaminated_loss = mean_loss(run.contaminated_scores);
    run.report.auc = run.roc.auc;
    run.report.seed = seed;
    run.report.config_digest = setup.config_digest;
    run.report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return run;
}

ExperimentReport run_experiment(const ExperimentSetup& setup, std::uint64_t seed) {
    return run_experiment_full(setup, seed).report;
}

std::vector<ExperimentRun> run_many(
    const std::vector<std::pair<ExperimentSetup, std::uint64_t>>& runs,
    std::size_t jobs) {
    std::vector<ExperimentRun> results(runs.size());
    if (runs.empty()) return results;
    jobs = std::max<std::size_t>(1, std::min(jobs, runs.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= runs.size()) return;
            try {
                results[i] = run_experiment_full(runs[i].first, runs[i].second);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

std::vector<ExperimentReport> compare_detectors(std::vector<ExperimentReport> reports) {
    std::sort(reports.begin(), reports.end(),
              [](const ExperimentReport& a, const ExperimentReport& b) {
                  if (a.auc != b.auc) return a.auc > b.auc;
                  return a.detector < b.detector;
              });
    return reports;
}

std::string format_ranking(const std::vector<ExperimentReport>& sorted) {
    std::string line;
    for (const ExperimentReport& r : sorted) {
        if (!line.empty()) line += " > ";
        line += r.detector;
    }
    return line;
}

AggregateReport aggregate_reports(std::span<const ExperimentReport> reports) {
    if (reports.empty()) {
        throw ValidationError("aggregate_reports: no reports");
    }
    AggregateReport agg;
    agg.detector = reports.front().detector;
    for (const ExperimentReport& r : reports) {
        if (r.detector != agg.detector) {
            throw ValidationError("aggregate_reports: mixed detectors");
        }
        agg.mean_normal_loss += r.mean_normal_loss;
        agg.mean_contaminated_loss += r.mean_contaminated_loss;
        agg.mean_auc += r.auc;
    }
    agg.runs = reports.size();
    agg.mean_normal_loss /= double(agg.runs);
    agg.mean_contaminated_loss /= double(agg.runs);
    agg.mean_auc /= double(agg.runs);
    return agg;
}

}  // namespace puedet
