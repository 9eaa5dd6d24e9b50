#pragma once

#include <vector>

#include "puedet/detector.hpp"

namespace puedet {

struct RocPoint {
    double threshold = 0.0;
    double false_positive_rate = 0.0;
    double true_positive_rate = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

// Sweeps the decision threshold over the sorted distinct loss values
// (decision rule: attack iff loss > threshold) and integrates the area by
// the trapezoid rule, which matches Mann-Whitney pair counting with ties
// counted one half. The curve runs from (0,0) to (1,1); the final point
// carries threshold -1, i.e. "flag everything".
RocCurve roc_curve(const std::vector<DetectionScore>& scores);

}  // namespace puedet
