#include "puedet/hyper_erlang.hpp"

#include <cmath>
#include <string>

#include "puedet/errors.hpp"

namespace puedet {

void HyperErlangParams::validate() const {
    if (weights.empty()) {
        throw ValidationError("hyper-Erlang: at least one mixture branch required");
    }
    if (shapes.size() != weights.size() || scales.size() != weights.size()) {
        throw ValidationError(
            "hyper-Erlang: weights, shapes and scales must have equal length (got " +
            std::to_string(weights.size()) + ", " + std::to_string(shapes.size()) + ", " +
            std::to_string(scales.size()) + ")");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            throw ValidationError("hyper-Erlang: every weight must be >= 0");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError("hyper-Erlang: weights must sum to 1 (got " +
                              std::to_string(sum) + ")");
    }
    for (int k : shapes) {
        if (k < 1) {
            throw ValidationError("hyper-Erlang: every shape must be an integer >= 1");
        }
    }
    for (double t : scales) {
        if (!(t > 0.0)) {
            throw ValidationError("hyper-Erlang: every scale must be > 0");
        }
    }
}

void OnOffModel::validate() const {
    try {
        on.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("on: ") + e.what());
    }
    try {
        off.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("off: ") + e.what());
    }
}

double expected_sojourn(const HyperErlangParams& params) {
    params.validate();
    double mean = 0.0;
    for (std::size_t i = 0; i < params.branches(); ++i) {
        mean += params.weights[i] * params.shapes[i] * params.scales[i];
    }
    return mean;
}

double pdf(const HyperErlangParams& params, double t) {
    params.validate();
    if (t < 0.0) {
        throw ValidationError("hyper-Erlang pdf: t must be >= 0");
    }
    double density = 0.0;
    for (std::size_t i = 0; i < params.branches(); ++i) {
        const int k = params.shapes[i];
        const double theta = params.scales[i];
        if (t == 0.0) {
            // t^(k-1) at the origin: 1 for k = 1, 0 otherwise.
            if (k == 1) density += params.weights[i] / theta;
            continue;
        }
        // Evaluated in log space so large shapes and times cannot overflow.
        const double log_term = (k - 1) * std::log(t) - t / theta -
                                k * std::log(theta) - std::lgamma(double(k));
        density += params.weights[i] * std::exp(log_term);
    }
    return density;
}

double sample_sojourn(const HyperErlangParams& params, Rng& rng) {
    params.validate();
    const double u = rng.uniform();
    std::size_t branch = params.branches() - 1;
    double cum = 0.0;
    for (std::size_t i = 0; i < params.branches(); ++i) {
        cum += params.weights[i];
        if (u < cum) {
            branch = i;
            break;
        }
    }
    double total = 0.0;
    for (int j = 0; j < params.shapes[branch]; ++j) {
        total += rng.exponential(params.scales[branch]);
    }
    return total;
}

}  // namespace puedet
