#pragma once

#include <cstdint>
#include <vector>

#include "puedet/param_store.hpp"

namespace puedet {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Per-parameter first/second moment buffers for adaptive-moment updates.
class AdamState {
public:
    AdamState(const ParamStore& params, AdamConfig config);

    AdamConfig& config() { return config_; }
    const AdamConfig& config() const { return config_; }
    std::uint64_t steps_taken() const { return step_; }

    // One update from the gradients currently in the store; increments the
    // step counter and zeroes the gradients. Shapes must match the store the
    // state was built from.
    void apply(ParamStore& params);

private:
    AdamConfig config_;
    std::uint64_t step_ = 0;
    std::vector<Matrix> first_;
    std::vector<Matrix> second_;
};

inline void adam_step(ParamStore& params, AdamState& state) { state.apply(params); }

}  // namespace puedet
