#pragma once

#include "mpp/pomdp.hpp"

namespace mpp {

/// The built-in cake-splitting example: two principals with opposite 90/10
/// beliefs about the cake's color and symmetric utilities 30/20/0 for getting
/// all, half, or none of the cake. One decision step; the observation is the
/// color.
ProblemSet cake_problem();

/// The color-contingent policy: all to principal 1 on red, all to principal 2
/// on green.
FullMemoryPolicy cake_pi_hat();

/// The unconditional even split.
FullMemoryPolicy cake_half_half();

}  // namespace mpp
