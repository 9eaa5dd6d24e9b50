#include "puedet/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "puedet/errors.hpp"

namespace puedet {

GradCheckReport finite_difference_check(const std::function<double()>& loss_fn,
                                        ParamStore& params, double perturbation,
                                        std::size_t max_coords, Rng& rng) {
    if (!(perturbation > 0.0)) {
        throw ValidationError("finite_difference_check: perturbation must be > 0");
    }
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    coords.reserve(params.total_coords());
    for (std::size_t p = 0; p < params.count(); ++p) {
        for (std::size_t j = 0; j < params.value_at(p).size(); ++j) {
            coords.emplace_back(p, j);
        }
    }
    if (max_coords < coords.size()) {
        // Partial Fisher-Yates: the first max_coords entries become a
        // uniform sample without replacement.
        for (std::size_t i = 0; i < max_coords; ++i) {
            std::swap(coords[i], coords[i + rng.index(coords.size() - i)]);
        }
        coords.resize(max_coords);
    }

    GradCheckReport report;
    report.coords_checked = coords.size();
    for (const auto& [p, j] : coords) {
        double* w = params.value_at(p).data() + j;
        const double saved = *w;
        *w = saved + perturbation;
        const double loss_hi = loss_fn();
        *w = saved - perturbation;
        const double loss_lo = loss_fn();
        *w = saved;
        const double numeric = (loss_hi - loss_lo) / (2.0 * perturbation);
        const double analytic = params.grad_at(p).data()[j];
        const double rel = std::abs(analytic - numeric) /
                           std::max({std::abs(analytic), std::abs(numeric), 1e-8});
        if (rel > report.max_rel_error) {
            report.max_rel_error = rel;
            report.worst_param = params.name_at(p);
            report.worst_coord = j;
        }
    }
    return report;
}

}  // namespace puedet
