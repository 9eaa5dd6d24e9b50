#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "puedet/channel.hpp"
#include "puedet/matrix.hpp"

namespace puedet {

// Prediction windowing: feed the last input_len observed bits, predict the
// label of the next compare_len bits, advance by stride.
struct WindowConfig {
    std::size_t input_len = 4;    // l_I
    std::size_t compare_len = 2;  // l_C
    std::size_t stride = 2;

    std::size_t label_count() const { return std::size_t(1) << compare_len; }
    void validate() const;
};

// One prediction step's loss, with the ground-truth contamination flag for
// thresholding and ROC labeling.
struct DetectionScore {
    std::size_t slot_index = 0;  // slot of the last input bit
    double loss = 0.0;
    bool contaminated = false;
};

struct Threshold {
    double value = 0.0;
};

// Big-endian binary encoding of a bit window; the first bit is the most
// significant, so [0,0] -> 0, [0,1] -> 1, [1,0] -> 2, [1,1] -> 3.
std::size_t encode_label(std::span<const std::uint8_t> bits);

// Inverse of encode_label for a window of the given length.
std::vector<std::uint8_t> decode_label(std::size_t label, std::size_t length);

// Mean square error between a predicted label-likelihood vector and the
// one-hot truth: (1/l_O) * [ sum_{i != j} y_i^2 + (1 - y_j)^2 ].
double step_loss(const Vector& y, std::size_t true_label);

// d(step_loss)/dz for y = softmax(z); used by both detector trainers.
Vector step_loss_softmax_backward(const Vector& y, std::size_t true_label);

// One prediction step over a sensed series: input window is the input_len
// bits ending at slot t, the comparison window is the compare_len bits that
// follow it.
struct PredictionStep {
    std::size_t t = 0;       // slot index of the last input bit
    std::size_t label = 0;   // encoded comparison window
    bool contaminated = false;
};

// All prediction steps a series yields under the window config; count is
// floor((len - input_len - compare_len)/stride) + 1. A step is contaminated
// when any comparison-window slot has attack_mask = 1 while the PU was OFF,
// the only corruption visible in the observed bits.
std::vector<PredictionStep> enumerate_steps(const SensedSeries& series,
                                            const WindowConfig& config);

// Stateful single-step interface shared by the detectors. step() consumes
// one input window, advances the recurrent state, and returns the label
// likelihood vector.
class Predictor {
public:
    virtual ~Predictor() = default;
    virtual std::size_t input_len() const = 0;
    virtual std::size_t label_count() const = 0;
    virtual void reset() = 0;
    virtual const Vector& step(const std::uint8_t* window) = 0;
};

// Scores every prediction step of a series, carrying the recurrent state
// across the whole series rather than resetting per window.
std::vector<DetectionScore> score_series(Predictor& predictor,
                                         const SensedSeries& series,
                                         const WindowConfig& config);

// attack iff loss > threshold.
std::vector<std::uint8_t> classify(const std::vector<DetectionScore>& scores,
                                   Threshold threshold);

}  // namespace puedet
