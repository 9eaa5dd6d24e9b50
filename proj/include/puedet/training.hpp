#pragma once

#include <cstddef>

#include "puedet/adam.hpp"

namespace puedet {

// Hyperparameters shared by both detector trainers.
struct TrainOptions {
    std::size_t hidden = 32;     // recurrent units per layer
    std::size_t epochs = 20;
    std::size_t bptt_len = 50;   // truncated-backpropagation sequence length
    double grad_clip = 5.0;      // global gradient-norm cap per update
    AdamConfig adam;
};

inline void clip_gradients(ParamStore& store, double cap) {
    if (cap <= 0.0) return;
    const double norm = store.grad_norm();
    if (norm > cap) store.scale_grads(cap / norm);
}

}  // namespace puedet
