#pragma once

#include <functional>
#include <string>

#include "puedet/param_store.hpp"
#include "puedet/rng.hpp"

namespace puedet {

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::string worst_param;
    std::size_t worst_coord = 0;
    std::size_t coords_checked = 0;
};

// Compares the analytic gradients currently stored in `params` against
// central finite differences of `loss_fn`, which must re-evaluate the loss
// from the current parameter values. Checks up to max_coords coordinates
// sampled without replacement; relative error is |a-n| / max(|a|,|n|,1e-8).
GradCheckReport finite_difference_check(const std::function<double()>& loss_fn,
                                        ParamStore& params, double perturbation,
                                        std::size_t max_coords, Rng& rng);

}  // namespace puedet
