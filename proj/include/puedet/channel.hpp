#pragma once

#include <cstdint>
#include <vector>

#include "puedet/hyper_erlang.hpp"
#include "puedet/rng.hpp"

namespace puedet {

// Intermittent sensing cadence: observe for t_ob seconds, idle for t_re,
// repeat. One slot spans t_ob + t_re.
struct SensingConfig {
    double t_ob = 0.01;
    double t_re = 0.24;

    double slot_period() const { return t_ob + t_re; }
    void validate() const;
};

// Short-impulse PUE attacker: fires independently in each sensing slot.
struct AttackConfig {
    double impulse_probability = 0.0;

    void validate() const;
};

struct Segment {
    ChannelState state;
    double duration;  // seconds, > 0
};

// Ground-truth channel history: strictly alternating ON/OFF segments.
struct ContinuousTrace {
    std::vector<Segment> segments;

    double total_duration() const;
};

// Binary observation sequence from intermittent sensing.
//   bits        observed channel state per slot (1 = busy)
//   attack_mask 1 where the attacker transmitted, regardless of PU state
//   pu_busy     what the slot would have observed with no attacker; the
//               ground truth used to decide whether an attack was observable
struct SensedSeries {
    std::vector<std::uint8_t> bits;
    std::vector<std::uint8_t> attack_mask;
    std::vector<std::uint8_t> pu_busy;
    double slot_period = 0.0;

    std::size_t size() const { return bits.size(); }
    void truncate(std::size_t n);
    void validate() const;
};

// Alternates states starting from initial_state, drawing each sojourn from
// the matching distribution, until the cumulative duration reaches horizon.
ContinuousTrace generate_trace(const OnOffModel& model, double horizon,
                               ChannelState initial_state, Rng& rng);

// Discretizes a trace by intermittent sensing and overlays impulse attacks.
// Slot k observes the window [k*(t_ob+t_re), k*(t_ob+t_re)+t_ob]; the bit is
// 1 iff the PU is ON anywhere inside the window or the attacker fires.
SensedSeries sense(const ContinuousTrace& trace, const SensingConfig& sensing,
                   const AttackConfig& attack, Rng& rng);

}  // namespace puedet
