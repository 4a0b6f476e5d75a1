#pragma once

#include <vector>

#include "frenetkit/geometry.hpp"

namespace frenetkit {

/// Feasibility of p = sum_j w_j * gens[j] with w >= 0, sum w = 1, decided by a
/// dense phase-1 simplex with Bland's rule. `skip` marks generator columns to
/// leave out (used for leave-one-out extremality tests); pass an empty mask to
/// use all generators.
bool in_convex_hull(const std::vector<Vec>& gens, const Vec& p,
                    const std::vector<std::uint8_t>& skip = {}, double feas_tol = 1e-9);

}  // namespace frenetkit
