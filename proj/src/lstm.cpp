#include "puedet/lstm.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "puedet/activations.hpp"
#include "puedet/errors.hpp"
#include "train_util.hpp"

namespace puedet {

namespace {

std::string layer_prefix(std::size_t index) { return "L" + std::to_string(index) + "."; }

const char* const kGateNames[4] = {"f", "i", "g", "o"};

}  // namespace

LstmStackParams LstmStackParams::init(std::size_t hidden, std::size_t input_len,
                                      std::size_t label_bits, std::size_t depth,
                                      Rng& rng) {
    if (hidden == 0 || input_len == 0 || depth == 0 || label_bits == 0 || label_bits > 16) {
        throw ValidationError(
            "lstm: hidden, input_len, depth must be >= 1 and label_bits in [1,16]");
    }
    LstmStackParams p;
    p.hidden = hidden;
    p.input_len = input_len;
    p.label_bits = label_bits;
    p.depth = depth;
    const std::size_t outputs = p.label_count();
    for (std::size_t l = 0; l < depth; ++l) {
        const std::string prefix = layer_prefix(l);
        const std::size_t in_dim = p.layer_input_dim(l);
        for (const char* gate : kGateNames) {
            detail::glorot_fill(p.store.add(prefix + "W_" + gate + "s", hidden, in_dim),
                                in_dim, hidden, rng);
            detail::glorot_fill(p.store.add(prefix + "W_" + gate + "h", hidden, hidden),
                                hidden, hidden, rng);
            Matrix& bias = p.store.add(prefix + "b_" + gate, hidden, 1);
            if (gate[0] == 'f') bias.fill(1.0);
        }
    }
    detail::glorot_fill(p.store.add("W_yh", outputs, hidden), hidden, outputs, rng);
    p.store.add("b_y", outputs, 1);
    return p;
}

LstmLayerParams LstmStackParams::layer(std::size_t index) const {
    const std::string prefix = layer_prefix(index);
    return LstmLayerParams{
        &store.value(prefix + "W_fs"), &store.value(prefix + "W_fh"),
        &store.value(prefix + "W_is"), &store.value(prefix + "W_ih"),
        &store.value(prefix + "W_gs"), &store.value(prefix + "W_gh"),
        &store.value(prefix + "W_os"), &store.value(prefix + "W_oh"),
        &store.value(prefix + "b_f"),  &store.value(prefix + "b_i"),
        &store.value(prefix + "b_g"),  &store.value(prefix + "b_o")};
}

LstmState LstmState::zero(std::size_t depth, std::size_t hidden) {
    LstmState s;
    s.h.assign(depth, Vector(hidden, 0.0));
    s.c.assign(depth, Vector(hidden, 0.0));
    return s;
}

namespace {

void gate_preactivation(const Matrix& w_s, const Matrix& w_h, const Matrix& b,
                        const Vector& input, const Vector& h_prev, Vector& out) {
    out.assign(w_s.rows(), 0.0);
    matvec_add(w_s, input.data(), out);
    matvec_add(w_h, h_prev.data(), out);
    add_column(b, out);
}

void cell_step_into(const LstmLayerParams& layer, const Vector& h_prev,
                    const Vector& c_prev, const Vector& input, LstmGates& out) {
    gate_preactivation(*layer.w_fs, *layer.w_fh, *layer.b_f, input, h_prev, out.f);
    sigmoid_inplace(out.f);
    gate_preactivation(*layer.w_is, *layer.w_ih, *layer.b_i, input, h_prev, out.i);
    sigmoid_inplace(out.i);
    gate_preactivation(*layer.w_gs, *layer.w_gh, *layer.b_g, input, h_prev, out.g);
    tanh_inplace(out.g);
    gate_preactivation(*layer.w_os, *layer.w_oh, *layer.b_o, input, h_prev, out.o);
    sigmoid_inplace(out.o);

    const std::size_t m = out.f.size();
    out.c.resize(m);
    out.h.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        out.c[j] = out.f[j] * c_prev[j] + out.i[j] * out.g[j];
        out.h[j] = std::tanh(out.c[j]) * out.o[j];
    }
}

void check_cell_dims(const LstmLayerParams& layer, const Vector& h_prev,
                     const Vector& c_prev, const Vector& input) {
    const std::size_t m = layer.w_fs->rows();
    if (h_prev.size() != m || c_prev.size() != m) {
        throw ValidationError("lstm_cell_step: state dimension mismatch");
    }
    if (input.size() != layer.w_fs->cols()) {
        throw ValidationError("lstm_cell_step: input dimension mismatch");
    }
}

}  // namespace

LstmGates lstm_cell_step_full(const LstmLayerParams& layer, const Vector& h_prev,
                              const Vector& c_prev, const Vector& input) {
    check_cell_dims(layer, h_prev, c_prev, input);
    LstmGates gates;
    cell_step_into(layer, h_prev, c_prev, input, gates);
    return gates;
}

std::pair<Vector, Vector> lstm_cell_step(const LstmLayerParams& layer,
                                         const Vector& h_prev, const Vector& c_prev,
                                         const Vector& input) {
    LstmGates gates = lstm_cell_step_full(layer, h_prev, c_prev, input);
    return {std::move(gates.h), std::move(gates.c)};
}

namespace {

void classifier_into(const LstmStackParams& p, const Vector& h_top, Vector& y) {
    y.assign(p.label_count(), 0.0);
    matvec_add(p.w_yh(), h_top.data(), y);
    add_column(p.b_y(), y);
    softmax_inplace(y);
}

}  // namespace

std::pair<LstmState, Vector> lstm_stack_step(const LstmStackParams& stack,
                                             const LstmState& state,
                                             std::span<const std::uint8_t> input) {
    if (state.h.size() != stack.depth || state.c.size() != stack.depth) {
        throw ValidationError("lstm_stack_step: state layer count mismatch");
    }
    if (input.size() != stack.input_len) {
        throw ValidationError("lstm_stack_step: input window length mismatch");
    }
    Vector x(stack.input_len);
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (input[i] > 1) {
            throw ValidationError("lstm_stack_step: input entries must be 0 or 1");
        }
        x[i] = double(input[i]);
    }
    LstmState next = state;
    const Vector* layer_in = &x;
    for (std::size_t l = 0; l < stack.depth; ++l) {
        LstmGates gates = lstm_cell_step_full(stack.layer(l), state.h[l], state.c[l],
                                              *layer_in);
        next.h[l] = std::move(gates.h);
        next.c[l] = std::move(gates.c);
        layer_in = &next.h[l];
    }
    Vector y;
    classifier_into(stack, next.h.back(), y);
    return {std::move(next), std::move(y)};
}

namespace {

// Per-sequence forward cache: gate activations for every (step, layer).
struct LstmSeqCache {
    std::vector<Vector> x0;                    // input windows per step
    std::vector<std::vector<LstmGates>> step;  // [t][layer]
    std::vector<Vector> y;                     // classifier outputs per step
};

double lstm_sequence_forward(const LstmStackParams& p, const SensedSeries& series,
                             std::span<const PredictionStep> steps,
                             LstmSeqCache* cache) {
    std::vector<LstmLayerParams> layers(p.depth);
    for (std::size_t l = 0; l < p.depth; ++l) layers[l] = p.layer(l);

    LstmState state = LstmState::zero(p.depth, p.hidden);
    Vector x(p.input_len), y;
    LstmGates gates;
    double total = 0.0;
    for (std::size_t t = 0; t < steps.size(); ++t) {
        const std::uint8_t* window = series.bits.data() + steps[t].t + 1 - p.input_len;
        detail::fill_window(window, x);
        if (cache != nullptr) cache->step.emplace_back();
        const Vector* layer_in = &x;
        for (std::size_t l = 0; l < p.depth; ++l) {
            cell_step_into(layers[l], state.h[l], state.c[l], *layer_in, gates);
            state.h[l] = gates.h;
            state.c[l] = gates.c;
            if (cache != nullptr) cache->step.back().push_back(gates);
            layer_in = &state.h[l];
        }
        classifier_into(p, state.h.back(), y);
        total += step_loss(y, steps[t].label);
        if (cache != nullptr) {
            cache->x0.push_back(x);
            cache->y.push_back(y);
        }
    }
    return total / double(steps.size());
}

struct LstmLayerGrads {
    Matrix *w_fs, *w_fh, *w_is, *w_ih, *w_gs, *w_gh, *w_os, *w_oh;
    Matrix *b_f, *b_i, *b_g, *b_o;
};

LstmLayerGrads layer_grads(ParamStore& store, std::size_t index) {
    const std::string prefix = layer_prefix(index);
    return LstmLayerGrads{
        &store.grad(prefix + "W_fs"), &store.grad(prefix + "W_fh"),
        &store.grad(prefix + "W_is"), &store.grad(prefix + "W_ih"),
        &store.grad(prefix + "W_gs"), &store.grad(prefix + "W_gh"),
        &store.grad(prefix + "W_os"), &store.grad(prefix + "W_oh"),
        &store.grad(prefix + "b_f"),  &store.grad(prefix + "b_i"),
        &store.grad(prefix + "b_g"),  &store.grad(prefix + "b_o")};
}

}  // namespace

double lstm_batch_loss(const LstmStackParams& params, const SensedSeries& series,
                       std::span<const PredictionStep> steps) {
    if (steps.empty()) {
        throw ValidationError("lstm_batch_loss: no prediction steps");
    }
    return lstm_sequence_forward(params, series, steps, nullptr);
}

double lstm_batch_backward(LstmStackParams& params, const SensedSeries& series,
                           std::span<const PredictionStep> steps) {
    if (steps.empty()) {
        throw ValidationError("lstm_batch_backward: no prediction steps");
    }
    LstmSeqCache cache;
    cache.x0.reserve(steps.size());
    cache.step.reserve(steps.size());
    cache.y.reserve(steps.size());
    const double loss = lstm_sequence_forward(params, series, steps, &cache);

    const std::size_t m = params.hidden;
    const std::size_t depth = params.depth;
    ParamStore& store = params.store;
    store.zero_grads();

    std::vector<LstmLayerParams> layers(depth);
    std::vector<LstmLayerGrads> grads(depth);
    for (std::size_t l = 0; l < depth; ++l) {
        layers[l] = params.layer(l);
        grads[l] = layer_grads(store, l);
    }
    Matrix& g_w_yh = store.grad("W_yh");
    Matrix& g_b_y = store.grad("b_y");

    const double inv_t = 1.0 / double(steps.size());
    const Vector zero(m, 0.0);
    // Recurrent carries from step t+1, per layer.
    std::vector<Vector> dh_rec(depth, Vector(m, 0.0));
    std::vector<Vector> dc_rec(depth, Vector(m, 0.0));
    Vector dh(m), dc(m), da_f(m), da_i(m), da_g(m), da_o(m), dx;
    for (std::size_t t = steps.size(); t-- > 0;) {
        Vector dz = step_loss_softmax_backward(cache.y[t], steps[t].label);
        for (double& v : dz) v *= inv_t;
        const Vector& h_top = cache.step[t][depth - 1].h;
        add_outer(g_w_yh, dz, h_top.data());
        add_to_column(g_b_y, dz);

        // dx carries the input gradient from the layer above at this step.
        bool have_dx = false;
        for (std::size_t l = depth; l-- > 0;) {
            const LstmGates& cell = cache.step[t][l];
            const Vector& h_prev = (t == 0) ? zero : cache.step[t - 1][l].h;
            const Vector& c_prev = (t == 0) ? zero : cache.step[t - 1][l].c;
            const Vector& input = (l == 0) ? cache.x0[t] : cache.step[t][l - 1].h;

            dh = dh_rec[l];
            if (l == depth - 1) tmatvec_add(params.w_yh(), dz, dh);
            if (have_dx) {
                for (std::size_t j = 0; j < m; ++j) dh[j] += dx[j];
            }
            for (std::size_t j = 0; j < m; ++j) {
                const double tanh_c = std::tanh(cell.c[j]);
                dc[j] = dh[j] * cell.o[j] * (1.0 - tanh_c * tanh_c) + dc_rec[l][j];
                da_o[j] = dh[j] * tanh_c * cell.o[j] * (1.0 - cell.o[j]);
                da_f[j] = dc[j] * c_prev[j] * cell.f[j] * (1.0 - cell.f[j]);
                da_i[j] = dc[j] * cell.g[j] * cell.i[j] * (1.0 - cell.i[j]);
                da_g[j] = dc[j] * cell.i[j] * (1.0 - cell.g[j] * cell.g[j]);
                dc_rec[l][j] = dc[j] * cell.f[j];
            }

            add_outer(*grads[l].w_fs, da_f, input.data());
            add_outer(*grads[l].w_is, da_i, input.data());
            add_outer(*grads[l].w_gs, da_g, input.data());
            add_outer(*grads[l].w_os, da_o, input.data());
            add_outer(*grads[l].w_fh, da_f, h_prev.data());
            add_outer(*grads[l].w_ih, da_i, h_prev.data());
            add_outer(*grads[l].w_gh, da_g, h_prev.data());
            add_outer(*grads[l].w_oh, da_o, h_prev.data());
            add_to_column(*grads[l].b_f, da_f);
            add_to_column(*grads[l].b_i, da_i);
            add_to_column(*grads[l].b_g, da_g);
            add_to_column(*grads[l].b_o, da_o);

            dh_rec[l].assign(m, 0.0);
            tmatvec_add(*layers[l].w_fh, da_f, dh_rec[l]);
            tmatvec_add(*layers[l].w_ih, da_i, dh_rec[l]);
            tmatvec_add(*layers[l].w_gh, da_g, dh_rec[l]);
            tmatvec_add(*layers[l].w_oh, da_o, dh_rec[l]);

            if (l > 0) {
                dx.assign(m, 0.0);
                tmatvec_add(*layers[l].w_fs, da_f, dx);
                tmatvec_add(*layers[l].w_is, da_i, dx);
                tmatvec_add(*layers[l].w_gs, da_g, dx);
                tmatvec_add(*layers[l].w_os, da_o, dx);
                have_dx = true;
            }
        }
    }
    return loss;
}

LstmTrainResult lstm_train(const SensedSeries& series, const WindowConfig& window,
                           std::size_t depth, const TrainOptions& options, Rng& rng) {
    window.validate();
    if (options.epochs == 0 || options.bptt_len == 0) {
        throw ValidationError("lstm_train: epochs and bptt_len must be >= 1");
    }
    const std::vector<PredictionStep> steps = enumerate_steps(series, window);
    const auto chunks = detail::chunk_steps(steps, options.bptt_len);

    Rng init_rng = Rng::stream(rng.next_u64(), "init");
    Rng shuffle_rng = Rng::stream(rng.next_u64(), "shuffle");

    LstmTrainResult result;
    result.params = LstmStackParams::init(options.hidden, window.input_len,
                                          window.compare_len, depth, init_rng);
    AdamState optimizer(result.params.store, options.adam);

    std::vector<std::size_t> order(chunks.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        std::size_t step_count = 0;
        for (std::size_t idx : order) {
            const double loss = lstm_batch_backward(result.params, series, chunks[idx]);
            clip_gradients(result.params.store, options.grad_clip);
            adam_step(result.params.store, optimizer);
            loss_sum += loss * double(chunks[idx].size());
            step_count += chunks[idx].size();
        }
        result.loss_history.push_back(loss_sum / double(step_count));
    }
    return result;
}

LstmPredictor::LstmPredictor(const LstmStackParams& params)
    : params_(params),
      state_(LstmState::zero(params.depth, params.hidden)),
      x_(params.input_len) {
    layers_.reserve(params.depth);
    for (std::size_t l = 0; l < params.depth; ++l) layers_.push_back(params.layer(l));
}

void LstmPredictor::reset() { state_ = LstmState::zero(params_.depth, params_.hidden); }

const Vector& LstmPredictor::step(const std::uint8_t* window) {
    detail::fill_window(window, x_);
    LstmGates gates;
    const Vector* layer_in = &x_;
    for (std::size_t l = 0; l < params_.depth; ++l) {
        cell_step_into(layers_[l], state_.h[l], state_.c[l], *layer_in, gates);
        state_.h[l] = gates.h;
        state_.c[l] = gates.c;
        layer_in = &state_.h[l];
    }
    classifier_into(params_, state_.h.back(), y_);
    return y_;
}

}  // namespace puedet
