#pragma once

#include "tdz/operator_matrix.hpp"
#include "tdz/tolerances.hpp"

namespace tdz {

/// Largest singular value of M.
///
/// Power iteration on M*M. The first run starts from the normalized all-ones
/// vector; a second run starts from a fixed pseudo-random vector so that a
/// start orthogonal to the top singular subspace cannot hide it. Both runs are
/// deterministic. Iterations stop once the Hermitian residual
/// ||A v - lambda v|| falls below eps_norm * lambda / 10.
///
/// Throws ConvergenceError (kind numeric) after the iteration cap.
double operator_norm(const OperatorMatrix& m, const Tolerances& tol = {});

/// Smallest singular value (dense SVD). Used for rank probes only.
double smallest_singular_value(const OperatorMatrix& m);

}  // namespace tdz
