#pragma once

#include <vector>

#include "puedet/rng.hpp"

namespace puedet {

// Mixture of Erlang distributions describing one sojourn time (ON or OFF).
// Branch i is drawn with probability weights[i] and contributes an Erlang
// with integer shape shapes[i] and scale scales[i] seconds.
struct HyperErlangParams {
    std::vector<double> weights;
    std::vector<int> shapes;
    std::vector<double> scales;

    std::size_t branches() const { return weights.size(); }

    // Throws ValidationError naming the violated invariant.
    void validate() const;
};

// Mean sojourn time: sum_i w_i * k_i * theta_i.
double expected_sojourn(const HyperErlangParams& params);

// Mixture density at t >= 0 (1/seconds).
double pdf(const HyperErlangParams& params, double t);

// Draws a branch from the mixture weights, then sums that branch's shape
// count of exponential variates. Strictly positive.
double sample_sojourn(const HyperErlangParams& params, Rng& rng);

enum class ChannelState : int { Off = 0, On = 1 };

inline ChannelState other(ChannelState s) {
    return s == ChannelState::On ? ChannelState::Off : ChannelState::On;
}

// Two-state alternating-renewal PU activity model.
struct OnOffModel {
    HyperErlangParams on;
    HyperErlangParams off;

    void validate() const;
    const HyperErlangParams& params_for(ChannelState s) const {
        return s == ChannelState::On ? on : off;
    }
};

}  // namespace puedet
