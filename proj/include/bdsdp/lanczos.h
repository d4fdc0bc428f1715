#pragma once

#include "bdsdp/common.h"

#include <functional>

namespace bdsdp {

using LinearOp = std::function<Vector(const Vector &)>;

struct LanczosOptions {
  Scalar tol = 1e-10;     // residual <= tol * max(1, |lambda|)
  Index max_basis = 120;  // Krylov basis size before a restart
  Index max_restarts = 30;
  std::uint64_t seed = 42;
};

struct EigenPair {
  Scalar value = 0;
  Vector vector;
  Scalar residual = 0;
  bool converged = false;
  Index iterations = 0; // operator applications
};

/// Smallest eigenpair of a symmetric operator on R^dim (or on a subspace of
/// it, when `project` maps vectors onto that subspace and the operator
/// leaves it invariant). Full reorthogonalization, restarted from the best
/// Ritz vector.
EigenPair lanczos_smallest(const LinearOp &op, Index dim,
                           const LanczosOptions &opts = {},
                           const LinearOp &project = nullptr,
                           const Vector *start = nullptr);

} // namespace bdsdp
