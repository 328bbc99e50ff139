#pragma once

#include "vvlab/grid.hpp"

namespace vvlab {

/// Exact grid-restricted inf-convolution with the quadratic kernel:
///   out(x) = min_y field(y) + |x - y|^2 / (2 tau),
/// computed separably per axis with the lower-envelope (distance transform)
/// pass. Ties are broken toward the smaller index.
ScalarField quadratic_inf_convolution(const ScalarField& field, double tau);

/// Upper-envelope dual: out(x) = max_y field(y) - |x - y|^2 / (2 delta).
/// Exactly equal to -quadratic_inf_convolution(-field, delta).
ScalarField sup_convolution(const ScalarField& field, double delta);

}  // namespace vvlab
