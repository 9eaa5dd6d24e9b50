#include "puedet/detector.hpp"

#include <string>

#include "puedet/errors.hpp"

namespace puedet {

void WindowConfig::validate() const {
    if (input_len < 1) {
        throw ValidationError("window: input_len must be >= 1");
    }
    if (compare_len < 1 || compare_len > 16) {
        throw ValidationError("window: compare_len must lie in [1,16]");
    }
    if (stride < 1) {
        throw ValidationError("window: stride must be >= 1");
    }
}

std::size_t encode_label(std::span<const std::uint8_t> bits) {
    if (bits.empty() || bits.size() > 16) {
        throw ValidationError("encode_label: window length must lie in [1,16]");
    }
    std::size_t label = 0;
    for (std::uint8_t b : bits) {
        if (b > 1) {
            throw ValidationError("encode_label: entries must be 0 or 1");
        }
        label = (label << 1) | b;
    }
    return label;
}

std::vector<std::uint8_t> decode_label(std::size_t label, std::size_t length) {
    if (length == 0 || length > 16) {
        throw ValidationError("decode_label: window length must lie in [1,16]");
    }
    if (label >= (std::size_t(1) << length)) {
        throw ValidationError("decode_label: label out of range");
    }
    std::vector<std::uint8_t> bits(length);
    for (std::size_t i = 0; i < length; ++i) {
        bits[length - 1 - i] = static_cast<std::uint8_t>((label >> i) & 1);
    }
    return bits;
}

double step_loss(const Vector& y, std::size_t true_label) {
    if (true_label >= y.size()) {
        throw ValidationError("step_loss: label " + std::to_string(true_label) +
                              " out of range for " + std::to_string(y.size()) + " labels");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (i == true_label) {
            acc += (1.0 - y[i]) * (1.0 - y[i]);
        } else {
            acc += y[i] * y[i];
        }
    }
    return acc / static_cast<double>(y.size());
}

Vector step_loss_softmax_backward(const Vector& y, std::size_t true_label) {
    const std::size_t n = y.size();
    const double scale = 2.0 / static_cast<double>(n);
    // dL/dy, then through the softmax Jacobian.
    Vector e(n);
    for (std::size_t i = 0; i < n; ++i) {
        e[i] = scale * (y[i] - (i == true_label ? 1.0 : 0.0));
    }
    const double mixed = dot(e, y);
    Vector dz(n);
    for (std::size_t i = 0; i < n; ++i) {
        dz[i] = y[i] * (e[i] - mixed);
    }
    return dz;
}

std::vector<PredictionStep> enumerate_steps(const SensedSeries& series,
                                            const WindowConfig& config) {
    config.validate();
    series.validate();
    const std::size_t n = series.size();
    if (n < config.input_len + config.compare_len) {
        throw ValidationError("series too short: need at least input_len + compare_len = " +
                              std::to_string(config.input_len + config.compare_len) +
                              " slots, got " + std::to_string(n));
    }
    std::vector<PredictionStep> steps;
    steps.reserve((n - config.input_len - config.compare_len) / config.stride + 1);
    for (std::size_t t = config.input_len - 1; t + config.compare_len <= n - 1;
         t += config.stride) {
        PredictionStep step;
        step.t = t;
        step.label = encode_label({series.bits.data() + t + 1, config.compare_len});
        for (std::size_t j = t + 1; j <= t + config.compare_len; ++j) {
            if (series.attack_mask[j] == 1 && series.pu_busy[j] == 0) {
                step.contaminated = true;
                break;
            }
        }
        steps.push_back(step);
    }
    return steps;
}

std::vector<DetectionScore> score_series(Predictor& predictor,
                                         const SensedSeries& series,
                                         const WindowConfig& config) {
    if (predictor.input_len() != config.input_len ||
        predictor.label_count() != config.label_count()) {
        throw ValidationError("score_series: window config does not match the network");
    }
    const std::vector<PredictionStep> steps = enumerate_steps(series, config);
    predictor.reset();
    std::vector<DetectionScore> scores;
    scores.reserve(steps.size());
    for (const PredictionStep& step : steps) {
        const Vector& y =
            predictor.step(series.bits.data() + step.t + 1 - config.input_len);
        scores.push_back({step.t, step_loss(y, step.label), step.contaminated});
    }
    return scores;
}

std::vector<std::uint8_t> classify(const std::vector<DetectionScore>& scores,
                                   Threshold threshold) {
    if (!(threshold.value >= 0.0)) {
        throw ValidationError("classify: threshold must be >= 0");
    }
    std::vector<std::uint8_t> flags(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        flags[i] = scores[i].loss > threshold.value ? 1 : 0;
    }
    return flags;
}

}  // namespace puedet
