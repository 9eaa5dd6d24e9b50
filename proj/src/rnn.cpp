#include "puedet/rnn.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "puedet/activations.hpp"
#include "puedet/errors.hpp"
#include "train_util.hpp"

namespace puedet {

RnnParams RnnParams::init(std::size_t hidden, std::size_t input_len,
                          std::size_t label_bits, Rng& rng) {
    if (hidden == 0 || input_len == 0 || label_bits == 0 || label_bits > 16) {
        throw ValidationError("rnn: hidden, input_len must be >= 1 and label_bits in [1,16]");
    }
    RnnParams p;
    p.hidden = hidden;
    p.input_len = input_len;
    p.label_bits = label_bits;
    const std::size_t outputs = p.label_count();
    detail::glorot_fill(p.store.add("W_hx", hidden, input_len), input_len, hidden, rng);
    detail::glorot_fill(p.store.add("W_hh", hidden, hidden), hidden, hidden, rng);
    detail::glorot_fill(p.store.add("W_yh", outputs, hidden), hidden, outputs, rng);
    p.store.add("b_h", hidden, 1);
    p.store.add("b_y", outputs, 1);
    return p;
}

namespace {

struct RnnRefs {
    const Matrix &w_hx, &w_hh, &w_yh, &b_h, &b_y;
    explicit RnnRefs(const RnnParams& p)
        : w_hx(p.w_hx()), w_hh(p.w_hh()), w_yh(p.w_yh()), b_h(p.b_h()), b_y(p.b_y()) {}
};

// h_out = tanh(W_hx x + W_hh h_prev + b_h); y = softmax(W_yh h_out + b_y).
void rnn_step_into(const RnnRefs& p, const Vector& h_prev, const Vector& x,
                   Vector& h_out, Vector& y_out) {
    h_out.assign(p.w_hh.rows(), 0.0);
    matvec_add(p.w_hx, x.data(), h_out);
    matvec_add(p.w_hh, h_prev.data(), h_out);
    add_column(p.b_h, h_out);
    tanh_inplace(h_out);

    y_out.assign(p.w_yh.rows(), 0.0);
    matvec_add(p.w_yh, h_out.data(), y_out);
    add_column(p.b_y, y_out);
    softmax_inplace(y_out);
}

}  // namespace

std::pair<RnnState, Vector> rnn_step(const RnnParams& params, const RnnState& state,
                                     std::span<const std::uint8_t> input) {
    if (state.h.size() != params.hidden) {
        throw ValidationError("rnn_step: state dimension mismatch");
    }
    if (input.size() != params.input_len) {
        throw ValidationError("rnn_step: input window length mismatch");
    }
    Vector x(params.input_len);
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (input[i] > 1) {
            throw ValidationError("rnn_step: input entries must be 0 or 1");
        }
        x[i] = double(input[i]);
    }
    RnnState next;
    Vector y;
    rnn_step_into(RnnRefs(params), state.h, x, next.h, y);
    return {std::move(next), std::move(y)};
}

RnnTrace rnn_forward(const RnnParams& params, const RnnState& initial,
                     const std::vector<std::vector<std::uint8_t>>& inputs) {
    if (inputs.empty()) {
        throw ValidationError("rnn_forward: input sequence is empty");
    }
    RnnTrace trace;
    trace.states.reserve(inputs.size());
    trace.outputs.reserve(inputs.size());
    RnnState state = initial;
    for (const auto& window : inputs) {
        auto [next, y] = rnn_step(params, state, window);
        state = std::move(next);
        trace.states.push_back(state.h);
        trace.outputs.push_back(std::move(y));
    }
    return trace;
}

namespace {

struct RnnSeqCache {
    std::vector<Vector> x;  // input windows
    std::vector<Vector> h;  // hidden states
    std::vector<Vector> y;  // softmax outputs
};

double rnn_sequence_forward(const RnnParams& p, const SensedSeries& series,
                            std::span<const PredictionStep> steps, RnnSeqCache* cache) {
    const RnnRefs refs(p);
    Vector h(p.hidden, 0.0), h_next, x(p.input_len), y;
    double total = 0.0;
    for (std::size_t t = 0; t < steps.size(); ++t) {
        const std::uint8_t* window = series.bits.data() + steps[t].t + 1 - p.input_len;
        detail::fill_window(window, x);
        rnn_step_into(refs, h, x, h_next, y);
        std::swap(h, h_next);
        total += step_loss(y, steps[t].label);
        if (cache != nullptr) {
            cache->x.push_back(x);
            cache->h.push_back(h);
            cache->y.push_back(y);
        }
    }
    return total / double(steps.size());
}

}  // namespace

double rnn_batch_loss(const RnnParams& params, const SensedSeries& series,
                      std::span<const PredictionStep> steps) {
    if (steps.empty()) {
        throw ValidationError("rnn_batch_loss: no prediction steps");
    }
    return rnn_sequence_forward(params, series, steps, nullptr);
}

double rnn_batch_backward(RnnParams& params, const SensedSeries& series,
                          std::span<const PredictionStep> steps) {
    if (steps.empty()) {
        throw ValidationError("rnn_batch_backward: no prediction steps");
    }
    RnnSeqCache cache;
    cache.x.reserve(steps.size());
    cache.h.reserve(steps.size());
    cache.y.reserve(steps.size());
    const double loss = rnn_sequence_forward(params, series, steps, &cache);

    ParamStore& store = params.store;
    store.zero_grads();
    Matrix& g_w_hx = store.grad("W_hx");
    Matrix& g_w_hh = store.grad("W_hh");
    Matrix& g_w_yh = store.grad("W_yh");
    Matrix& g_b_h = store.grad("b_h");
    Matrix& g_b_y = store.grad("b_y");

    const double inv_t = 1.0 / double(steps.size());
    const Vector zero(params.hidden, 0.0);
    Vector carry(params.hidden, 0.0);  // W_hhᵀ da from the step after this one
    Vector dh(params.hidden), da(params.hidden);
    for (std::size_t t = steps.size(); t-- > 0;) {
        Vector dz = step_loss_softmax_backward(cache.y[t], steps[t].label);
        for (double& v : dz) v *= inv_t;

        const Vector& h = cache.h[t];
        add_outer(g_w_yh, dz, h.data());
        add_to_column(g_b_y, dz);

        dh = carry;
        tmatvec_add(params.w_yh(), dz, dh);
        for (std::size_t j = 0; j < params.hidden; ++j) {
            da[j] = dh[j] * (1.0 - h[j] * h[j]);
        }

        const Vector& h_prev = (t == 0) ? zero : cache.h[t - 1];
        add_outer(g_w_hx, da, cache.x[t].data());
        add_outer(g_w_hh, da, h_prev.data());
        add_to_column(g_b_h, da);

        carry.assign(params.hidden, 0.0);
        tmatvec_add(params.w_hh(), da, carry);
    }
    return loss;
}

RnnTrainResult rnn_train(const SensedSeries& series, const WindowConfig& window,
                         const TrainOptions& options, Rng& rng) {
    window.validate();
    if (options.epochs == 0 || options.bptt_len == 0) {
        throw ValidationError("rnn_train: epochs and bptt_len must be >= 1");
    }
    const std::vector<PredictionStep> steps = enumerate_steps(series, window);
    const auto chunks = detail::chunk_steps(steps, options.bptt_len);

    Rng init_rng = Rng::stream(rng.next_u64(), "init");
    Rng shuffle_rng = Rng::stream(rng.next_u64(), "shuffle");

    RnnTrainResult result;
    result.params =
        RnnParams::init(options.hidden, window.input_len, window.compare_len, init_rng);
    AdamState optimizer(result.params.store, options.adam);

    std::vector<std::size_t> order(chunks.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        std::size_t step_count = 0;
        for (std::size_t idx : order) {
            const double loss = rnn_batch_backward(result.params, series, chunks[idx]);
            clip_gradients(result.params.store, options.grad_clip);
            adam_step(result.params.store, optimizer);
            loss_sum += loss * double(chunks[idx].size());
            step_count += chunks[idx].size();
        }
        result.loss_history.push_back(loss_sum / double(step_count));
    }
    return result;
}

RnnPredictor::RnnPredictor(const RnnParams& params)
    : params_(params), h_(params.hidden, 0.0), x_(params.input_len) {}

void RnnPredictor::reset() { h_.assign(params_.hidden, 0.0); }

const Vector& RnnPredictor::step(const std::uint8_t* window) {
    detail::fill_window(window, x_);
    Vector h_next;
    rnn_step_into(RnnRefs(params_), h_, x_, h_next, y_);
    h_ = std::move(h_next);
    return y_;
}

}  // namespace puedet
