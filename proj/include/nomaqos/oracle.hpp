#pragma once

#include <cstddef>
#include <vector>

#include "nomaqos/baselines.hpp"

namespace nomaqos {

// Brute-force optimizers for small instances. Both are independent of the
// polyblock engine and exist to check it.

struct LayerOptimum {
    Allocation allocation;               // scheme tag is `proposed`
    std::vector<std::size_t> layer_tuple;  // chosen l_i per device (decode order)
};

inline constexpr double kEnumerationGuard = 1e6;
inline constexpr double kGridGuard = 1e7;

/// Exhaustive search over layer tuples. Because the objective only depends on
/// which SINR thresholds are met, placing every device exactly on its target
/// threshold and checking G membership is exact. Ties go to the tuple needing
/// the least total power. Throws std::length_error past the guard.
LayerOptimum enumerate_layer_optimum(const UplinkScenario& scenario);

/// Exhaustive search over the power grid {0, p_max/(n-1), ..., p_max}^M under
/// the rate, power and EE constraints. A lower bound on the true optimum.
Allocation grid_search(const UplinkScenario& scenario, std::size_t points_per_dim);

}  // namespace nomaqos
