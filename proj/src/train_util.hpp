#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "puedet/detector.hpp"
#include "puedet/matrix.hpp"
#include "puedet/rng.hpp"

namespace puedet::detail {

// Splits the prediction steps into consecutive truncated-BPTT sequences of
// at most bptt_len steps; the final partial sequence is kept.
inline std::vector<std::span<const PredictionStep>> chunk_steps(
    std::span<const PredictionStep> steps, std::size_t bptt_len) {
    std::vector<std::span<const PredictionStep>> chunks;
    for (std::size_t begin = 0; begin < steps.size(); begin += bptt_len) {
        chunks.push_back(steps.subspan(begin, std::min(bptt_len, steps.size() - begin)));
    }
    return chunks;
}

// Glorot-uniform fill: U(-r, r) with r = sqrt(6 / (fan_in + fan_out)).
inline void glorot_fill(Matrix& w, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double r = std::sqrt(6.0 / double(fan_in + fan_out));
    double* p = w.data();
    for (std::size_t i = 0; i < w.size(); ++i) p[i] = rng.uniform(-r, r);
}

inline void fill_window(const std::uint8_t* window, Vector& x) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = double(window[i]);
}

}  // namespace puedet::detail
