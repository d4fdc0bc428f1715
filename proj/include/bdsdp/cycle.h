#pragma once

#include "bdsdp/costs.h"

#include <vector>

namespace bdsdp {

/// The cycle product has -1 as an eigenvalue, so no principal root exists.
class UnsolvableError : public Error {
public:
  using Error::Error;
};

/// Phase distance from pi below which an eigenvalue counts as -1.
inline constexpr Scalar kCyclePhaseTol = 1e-8;

/// Synchronization on the cycle 1 - 2 - ... - m - 1.
struct CycleInstance {
  Index m = 0;
  Index d = 0;
  /// H[i] = H_{i,i+1} for i < m - 1, H[m-1] = H_{m,1}.
  std::vector<Matrix> H;
  /// P = H_{1,2} H_{2,3} ... H_{m,1}
  Matrix P;
  /// Eigenphases of P in [0, pi], one per eigenvalue (conjugate pairs give the
  /// same phase twice).
  Vector phases;
};

/// Validates orthogonality (1e-12) and computes P and its eigenphases.
CycleInstance make_cycle_instance(std::vector<Matrix> H);

/// Random cycle: SO(d) measurements for d >= 2, signs for d = 1. With
/// `solvable` set, instances with an eigenphase within 1e-6 of pi are
/// resampled (d = 1: resample until P = +1).
CycleInstance random_cycle(Index m, Index d, std::uint64_t seed,
                           bool solvable = true);

/// Principal m-th root of an orthogonal matrix. Throws UnsolvableError when
/// an eigenphase lies within kCyclePhaseTol of pi.
Matrix matrix_root(const Matrix &P, Index m);

/// Eigenphases of an orthogonal matrix, ascending in [0, pi].
Vector orthogonal_phases(const Matrix &P);

/// Linear cost -sum_i 2 <H_{i,i+1}, X_{i,i+1}> over the cycle edges.
LinearCost cycle_cost(const CycleInstance &inst);

struct CycleSolution {
  std::vector<Matrix> Q; // Q_m = H_{m,1}, Q_i = H_{i,i+1} Q_{i+1}
  Matrix R;              // P^{1/m}
  StiefelPoint Y;        // Y_i = Q_i R^i, p = d
  Matrix X;              // X_ij = Q_i P^{(i-j)/m} Q_j^T
};

CycleSolution closed_form_solution(const CycleInstance &inst);

struct CycleSpectrum {
  Vector numeric; // ascending spectrum of S(X)
  /// Per eigenphase theta_k, the values 2 (cos(theta_k / m) - cos(j pi / m)),
  /// j = 1..m-1.
  std::vector<Vector> analytic;
  Scalar floor = 0; // min over all analytic values
  Index zero_count = 0; // numeric eigenvalues in [-1e-9, 1e-9]
  Scalar lambda_min = 0;
};

CycleSpectrum certificate_spectrum(const CycleInstance &inst,
                                   const CycleSolution &sol);

} // namespace bdsdp
