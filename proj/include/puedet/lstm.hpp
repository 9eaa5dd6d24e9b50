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

// Weight views for one LSTM layer. *_s matrices multiply the layer input
// (the bit window for layer 0, the previous layer's hidden state above),
// *_h matrices multiply the layer's own previous hidden state.
struct LstmLayerParams {
    const Matrix* w_fs;
    const Matrix* w_fh;
    const Matrix* w_is;
    const Matrix* w_ih;
    const Matrix* w_gs;
    const Matrix* w_gh;
    const Matrix* w_os;
    const Matrix* w_oh;
    const Matrix* b_f;
    const Matrix* b_i;
    const Matrix* b_g;
    const Matrix* b_o;
};

// Stacked LSTM detector: one or more cell layers feeding a softmax
// classifier over the 2^label_bits comparison-window labels.
struct LstmStackParams {
    std::size_t hidden = 0;
    std::size_t input_len = 0;
    std::size_t label_bits = 0;
    std::size_t depth = 0;
    ParamStore store;

    std::size_t label_count() const { return std::size_t(1) << label_bits; }
    std::size_t layer_input_dim(std::size_t layer) const {
        return layer == 0 ? input_len : hidden;
    }

    // Glorot-uniform weights, zero biases except the forget-gate bias,
    // which starts at 1 so early training does not wash out the cell state.
    static LstmStackParams init(std::size_t hidden, std::size_t input_len,
                                std::size_t label_bits, std::size_t depth, Rng& rng);

    LstmLayerParams layer(std::size_t index) const;
    const Matrix& w_yh() const { return store.value("W_yh"); }
    const Matrix& b_y() const { return store.value("b_y"); }
};

// Per-layer (hidden state, cell state) pairs.
struct LstmState {
    std::vector<Vector> h;
    std::vector<Vector> c;

    static LstmState zero(std::size_t depth, std::size_t hidden);
};

// All intermediate values of one cell step; needed by tests and BPTT.
struct LstmGates {
    Vector f, i, g, o, c, h;
};

//   f = sigmoid(W_fs s + W_fh h_prev + b_f)
//   i = sigmoid(W_is s + W_ih h_prev + b_i)
//   g = tanh   (W_gs s + W_gh h_prev + b_g)
//   c = f .* c_prev + i .* g
//   o = sigmoid(W_os s + W_oh h_prev + b_o)
//   h = tanh(c) .* o
LstmGates lstm_cell_step_full(const LstmLayerParams& layer, const Vector& h_prev,
                              const Vector& c_prev, const Vector& input);

// As above, returning only (h, c).
std::pair<Vector, Vector> lstm_cell_step(const LstmLayerParams& layer,
                                         const Vector& h_prev, const Vector& c_prev,
                                         const Vector& input);

// Feeds an input window up through the stack (each layer's hidden state is
// the next layer's input) and applies the classifier to the last layer's
// hidden state.
std::pair<LstmState, Vector> lstm_stack_step(const LstmStackParams& stack,
                                             const LstmState& state,
                                             std::span<const std::uint8_t> input);

// Mean prediction loss over consecutive steps, forward only.
double lstm_batch_loss(const LstmStackParams& params, const SensedSeries& series,
                       std::span<const PredictionStep> steps);

// Same loss with BPTT gradients accumulated into the store (zeroed first).
double lstm_batch_backward(LstmStackParams& params, const SensedSeries& series,
                           std::span<const PredictionStep> steps);

struct LstmTrainResult {
    LstmStackParams params;
    std::vector<double> loss_history;
};

LstmTrainResult lstm_train(const SensedSeries& series, const WindowConfig& window,
                           std::size_t depth, const TrainOptions& options, Rng& rng);

class LstmPredictor final : public Predictor {
public:
    explicit LstmPredictor(const LstmStackParams& params);

    std::size_t input_len() const override { return params_.input_len; }
    std::size_t label_count() const override { return params_.label_count(); }
    void reset() override;
    const Vector& step(const std::uint8_t* window) override;

private:
    const LstmStackParams& params_;
    std::vector<LstmLayerParams> layers_;
    LstmState state_;
    Vector x_;
    Vector y_;
};

}  // namespace puedet
