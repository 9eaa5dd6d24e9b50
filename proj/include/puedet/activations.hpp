#pragma once

#include <algorithm>
#include <cmath>

#include "puedet/matrix.hpp"

namespace puedet {

// Numerically stable logistic function.
inline double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

inline double tanh_act(double x) { return std::tanh(x); }

inline void sigmoid_inplace(Vector& v) {
    for (double& x : v) x = sigmoid(x);
}

inline void tanh_inplace(Vector& v) {
    for (double& x : v) x = std::tanh(x);
}

// Stable softmax; output is a probability vector with every entry in (0,1).
inline void softmax_inplace(Vector& v) {
    const double mx = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (double& x : v) {
        x = std::exp(x - mx);
        sum += x;
    }
    for (double& x : v) x /= sum;
}

inline Vector sigmoid(Vector v) {
    sigmoid_inplace(v);
    return v;
}

inline Vector tanh_act(Vector v) {
    tanh_inplace(v);
    return v;
}

inline Vector softmax(Vector v) {
    softmax_inplace(v);
    return v;
}

}  // namespace puedet
