#include "puedet/roc.hpp"

#include <algorithm>

#include "puedet/errors.hpp"

namespace puedet {

RocCurve roc_curve(const std::vector<DetectionScore>& scores) {
    std::size_t n_pos = 0, n_neg = 0;
    for (const DetectionScore& s : scores) {
        (s.contaminated ? n_pos : n_neg) += 1;
    }
    if (n_pos == 0) {
        throw ValidationError("roc_curve: no contaminated scores");
    }
    if (n_neg == 0) {
        throw ValidationError("roc_curve: no clean scores");
    }

    // Sort by loss descending; group ties so each distinct loss yields one
    // threshold point.
    std::vector<const DetectionScore*> sorted;
    sorted.reserve(scores.size());
    for (const DetectionScore& s : scores) sorted.push_back(&s);
    std::sort(sorted.begin(), sorted.end(),
              [](const DetectionScore* a, const DetectionScore* b) {
                  return a->loss > b->loss;
              });

    RocCurve curve;
    curve.points.reserve(scores.size() + 1);
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        const double value = sorted[i]->loss;
        // Threshold at this value flags only the strictly greater losses.
        curve.points.push_back({value, double(fp) / double(n_neg),
                                double(tp) / double(n_pos)});
        while (i < sorted.size() && sorted[i]->loss == value) {
            (sorted[i]->contaminated ? tp : fp) += 1;
            ++i;
        }
    }
    curve.points.push_back({-1.0, 1.0, 1.0});

    double auc = 0.0;
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        const RocPoint& a = curve.points[k - 1];
        const RocPoint& b = curve.points[k];
        auc += (b.false_positive_rate - a.false_positive_rate) *
               (a.true_positive_rate + b.true_positive_rate) * 0.5;
    }
    curve.auc = auc;
    return curve;
}

}  // namespace puedet
