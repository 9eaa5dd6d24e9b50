#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "puedet/detector.hpp"
#include "puedet/param_store.hpp"
#include "puedet/rng.hpp"
#include "puedet/training.hpp"

namespace puedet {

// Basic recurrent detector network:
//   h' = tanh(W_hx s + W_hh h + b_h)
//   y  = softmax(W_yh h' + b_y)
struct RnnParams {
    std::size_t hidden = 0;      // m
    std::size_t input_len = 0;   // l_I
    std::size_t label_bits = 0;  // l_C; the output has 2^label_bits entries
    ParamStore store;

    std::size_t label_count() const { return std::size_t(1) << label_bits; }

    // Glorot-uniform weights, zero biases.
    static RnnParams init(std::size_t hidden, std::size_t input_len,
                          std::size_t label_bits, Rng& rng);

    const Matrix& w_hx() const { return store.value("W_hx"); }
    const Matrix& w_hh() const { return store.value("W_hh"); }
    const Matrix& w_yh() const { return store.value("W_yh"); }
    const Matrix& b_h() const { return store.value("b_h"); }
    const Matrix& b_y() const { return store.value("b_y"); }
};

struct RnnState {
    Vector h;
};

// One recurrent step; the input is a window of input_len bits.
std::pair<RnnState, Vector> rnn_step(const RnnParams& params, const RnnState& state,
                                     std::span<const std::uint8_t> input);

struct RnnTrace {
    std::vector<Vector> states;
    std::vector<Vector> outputs;
};

// Iterates rnn_step over a sequence of input windows.
RnnTrace rnn_forward(const RnnParams& params, const RnnState& initial,
                     const std::vector<std::vector<std::uint8_t>>& inputs);

// Mean prediction loss of consecutive steps of a series, forward only.
double rnn_batch_loss(const RnnParams& params, const SensedSeries& series,
                      std::span<const PredictionStep> steps);

// Same loss, but also accumulates BPTT gradients into the store (which is
// zeroed first). The sequence starts from a zero hidden state.
double rnn_batch_backward(RnnParams& params, const SensedSeries& series,
                          std::span<const PredictionStep> steps);

struct RnnTrainResult {
    RnnParams params;
    std::vector<double> loss_history;  // mean training loss per epoch
};

// Truncated-BPTT training against the windowed prediction loss.
RnnTrainResult rnn_train(const SensedSeries& series, const WindowConfig& window,
                         const TrainOptions& options, Rng& rng);

class RnnPredictor final : public Predictor {
public:
    explicit RnnPredictor(const RnnParams& params);

    std::size_t input_len() const override { return params_.input_len; }
    std::size_t label_count() const override { return params_.label_count(); }
    void reset() override;
    const Vector& step(const std::uint8_t* window) override;

private:
    const RnnParams& params_;
    Vector h_;
    Vector x_;
    Vector y_;
};

}  // namespace puedet
