#pragma once

#include "bdsdp/stiefel.h"
#include "bdsdp/symvec.h"

#include <atomic>
#include <optional>

namespace bdsdp {

inline constexpr Scalar kFaceKernelTol = 1e-10;
/// Largest p for which the face operator is materialized densely.
inline constexpr Index kFaceDenseLimit = 80;

struct FaceReport {
  Index p = 0;
  Index delta = 0; // p(p+1)/2 - m d(d+1)/2, may be negative
  Index dim_face = 0;
  Scalar p_star = 0;
  Scalar upper_bound = 0; // p(p+1)/2 - p(d+1)/2
  bool is_extreme = false;
  Scalar h_min = 0; // extreme eigenvalues of the face operator
  Scalar h_max = 0;
};

/// (sqrt(1 + 4 m d (d+1)) - 1) / 2.
Scalar p_star(Index m, Index d);

/// H(A) = sum_i Y_i^T (Y_i A Y_i^T) Y_i. Adds 2 m (d^2 p + p^2 d) to `flops`
/// when given.
Matrix face_operator_apply(const StiefelPoint &Y, const Matrix &A,
                           std::atomic<long long> *flops = nullptr);

/// Flop count of one face_operator_apply.
long long face_operator_flops(Index m, Index d, Index p);

/// Kernel dimension of A -> (Y_1 A Y_1^T, ..., Y_m A Y_m^T). Throws
/// InvalidArgument when Y is rank deficient.
FaceReport face_dimension(const StiefelPoint &Y, Scalar tol = kFaceKernelTol);

/// Moves X = Y Y^T to the boundary of its face along a kernel direction A:
/// X' = Y (I - A / lambda_min(A)) Y^T. The result keeps p columns, the last
/// one (numerically) zero. Returns nullopt when the face is {X}.
std::optional<StiefelPoint> in_face_rank_reduction(const StiefelPoint &Y,
                                                   Scalar tol = kFaceKernelTol);

/// max(0, floor((dim_face - delta) / p)).
Index negative_eigenvalue_budget(const FaceReport &report);

/// Fraction of `trials` random points Y on St(d, p)^m whose face has
/// dimension max(0, delta).
Scalar generic_face_dimension_trial(Index d, Index m, Index p, Index trials,
                                    std::uint64_t seed);

} // namespace bdsdp
