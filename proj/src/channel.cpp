#include "puedet/channel.hpp"

#include <cmath>
#include <string>

#include "puedet/errors.hpp"

namespace puedet {

void SensingConfig::validate() const {
    if (!(t_ob > 0.0)) {
        throw ValidationError("sensing: t_ob must be > 0");
    }
    if (!(t_re >= 0.0)) {
        throw ValidationError("sensing: t_re must be >= 0");
    }
}

void AttackConfig::validate() const {
    if (!(impulse_probability >= 0.0 && impulse_probability <= 1.0)) {
        throw ValidationError("attack: impulse_probability must lie in [0,1]");
    }
}

double ContinuousTrace::total_duration() const {
    double total = 0.0;
    for (const Segment& s : segments) total += s.duration;
    return total;
}

void SensedSeries::truncate(std::size_t n) {
    if (n >= bits.size()) return;
    bits.resize(n);
    attack_mask.resize(n);
    pu_busy.resize(n);
}

void SensedSeries::validate() const {
    if (attack_mask.size() != bits.size() || pu_busy.size() != bits.size()) {
        throw ValidationError("sensed series: bits, attack_mask and pu_busy lengths differ");
    }
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] > 1 || attack_mask[i] > 1 || pu_busy[i] > 1) {
            throw ValidationError("sensed series: entries must be 0 or 1");
        }
        if (attack_mask[i] == 1 && bits[i] != 1) {
            throw ValidationError("sensed series: attacked slot must observe busy");
        }
    }
}

ContinuousTrace generate_trace(const OnOffModel& model, double horizon,
                               ChannelState initial_state, Rng& rng) {
    model.validate();
    if (!(horizon > 0.0)) {
        throw ValidationError("generate_trace: horizon must be > 0");
    }
    ContinuousTrace trace;
    ChannelState state = initial_state;
    double elapsed = 0.0;
    while (elapsed < horizon) {
        const double d = sample_sojourn(model.params_for(state), rng);
        trace.segments.push_back({state, d});
        elapsed += d;
        state = other(state);
    }
    return trace;
}

SensedSeries sense(const ContinuousTrace& trace, const SensingConfig& sensing,
                   const AttackConfig& attack, Rng& rng) {
    sensing.validate();
    attack.validate();
    if (trace.segments.empty()) {
        throw ValidationError("sense: trace is empty");
    }
    const double period = sensing.slot_period();
    const double total = trace.total_duration();
    const auto slots = static_cast<std::size_t>(std::floor(total / period));
    if (slots == 0) {
        throw ValidationError("sense: trace shorter than one slot period");
    }

    // Segment i covers [start[i], start[i] + duration[i]).
    std::vector<double> starts(trace.segments.size());
    double t = 0.0;
    for (std::size_t i = 0; i < trace.segments.size(); ++i) {
        starts[i] = t;
        t += trace.segments[i].duration;
    }

    SensedSeries out;
    out.slot_period = period;
    out.bits.resize(slots);
    out.attack_mask.resize(slots);
    out.pu_busy.resize(slots);

    std::size_t seg = 0;  // first segment whose end lies past the window start
    for (std::size_t k = 0; k < slots; ++k) {
        const double lo = static_cast<double>(k) * period;
        const double hi = lo + sensing.t_ob;
        while (seg + 1 < trace.segments.size() &&
               starts[seg] + trace.segments[seg].duration <= lo) {
            ++seg;
        }
        bool on = false;
        for (std::size_t i = seg; i < trace.segments.size() && starts[i] <= hi; ++i) {
            if (trace.segments[i].state == ChannelState::On) {
                on = true;
                break;
            }
        }
        const bool attacked = rng.uniform() < attack.impulse_probability;
        out.pu_busy[k] = on ? 1 : 0;
        out.attack_mask[k] = attacked ? 1 : 0;
        out.bits[k] = (on || attacked) ? 1 : 0;
    }
    return out;
}

}  // namespace puedet
