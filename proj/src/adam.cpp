#include "puedet/adam.hpp"

#include <cmath>

#include "puedet/errors.hpp"

namespace puedet {

AdamState::AdamState(const ParamStore& params, AdamConfig config) : config_(config) {
    first_.reserve(params.count());
    second_.reserve(params.count());
    for (std::size_t i = 0; i < params.count(); ++i) {
        const Matrix& v = params.value_at(i);
        first_.emplace_back(v.rows(), v.cols());
        second_.emplace_back(v.rows(), v.cols());
    }
}

void AdamState::apply(ParamStore& params) {
    if (params.count() != first_.size()) {
        throw ValidationError("adam: parameter count does not match optimizer state");
    }
    ++step_;
    const double bias1 = 1.0 - std::pow(config_.beta1, double(step_));
    const double bias2 = 1.0 - std::pow(config_.beta2, double(step_));
    for (std::size_t i = 0; i < params.count(); ++i) {
        Matrix& value = params.value_at(i);
        Matrix& grad = params.grad_at(i);
        if (!value.same_shape(first_[i])) {
            throw ValidationError("adam: shape mismatch for parameter '" +
                                  params.name_at(i) + "'");
        }
        double* w = value.data();
        double* g = grad.data();
        double* m = first_[i].data();
        double* v = second_[i].data();
        for (std::size_t j = 0; j < value.size(); ++j) {
            m[j] = config_.beta1 * m[j] + (1.0 - config_.beta1) * g[j];
            v[j] = config_.beta2 * v[j] + (1.0 - config_.beta2) * g[j] * g[j];
            const double m_hat = m[j] / bias1;
            const double v_hat = v[j] / bias2;
            w[j] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
        }
        grad.fill(0.0);
    }
}

}  // namespace puedet
