#pragma once

#include "bdsdp/blockmat.h"

#include <cstdint>

namespace bdsdp {

/// St(d, p)^m: m stacked d x p slices with orthonormal rows.
struct ManifoldSpec {
  BlockSpec spec;
  Index p = 1;

  ManifoldSpec() = default;
  ManifoldSpec(const BlockSpec &spec_, Index p_);

  Index m() const { return spec.m; }
  Index d() const { return spec.d; }
  Index n() const { return spec.n(); }
  /// n p - m d (d + 1) / 2
  Index dimension() const;
  bool operator==(const ManifoldSpec &) const = default;
};

/// Default feasibility tolerance of StiefelPoint, relative to sqrt(n).
inline constexpr Scalar kFeasibilityTol = 1e-10;

/// A point Y on St(d, p)^m. The constructor checks
/// ||symblockdiag(Y Y^T) - I_n||_F <= tol * sqrt(n).
class StiefelPoint {
public:
  StiefelPoint() = default;
  StiefelPoint(const ManifoldSpec &manifold, Matrix Y,
               Scalar tol = kFeasibilityTol);

  /// Wraps Y without checking; for values produced by retractions and
  /// other operations that land on the manifold by construction.
  static StiefelPoint unchecked(const ManifoldSpec &manifold, Matrix Y);

  const ManifoldSpec &manifold() const { return manifold_; }
  const Matrix &matrix() const { return Y_; }
  auto slice(Index i) const {
    return Y_.block(i * manifold_.d(), 0, manifold_.d(), manifold_.p);
  }
  Index p() const { return manifold_.p; }

private:
  ManifoldSpec manifold_;
  Matrix Y_;
};

/// Tangent vectors are plain n x p matrices living at some base point.
using TangentVector = Matrix;

/// ||symblockdiag(Y Y^T) - I_n||_F.
Scalar feasibility_error(const Matrix &Y, Index d);

/// ||symblockdiag(Ydot Y^T + Y Ydot^T)||_F.
Scalar tangency_error(const StiefelPoint &Y, const Matrix &Ydot);

/// Each slice is the polar factor of an independent d x p Gaussian matrix.
StiefelPoint random_point(const ManifoldSpec &manifold, std::uint64_t seed);

/// Z - symblockdiag(Z Y^T) Y.
TangentVector project_tangent(const StiefelPoint &Y, const Matrix &Z);

/// Slice-wise polar factor of Y + Ydot. Throws NumericalError when a slice
/// has a singular value below 1e-12.
StiefelPoint retract(const StiefelPoint &Y, const TangentVector &Ydot);

/// trace(U^T V).
Scalar inner(const TangentVector &U, const TangentVector &V);

struct RankInfo {
  bool deficient = false;
  Index numerical_rank = 0;
  Scalar cond = 0;       // lambda_max / lambda_min of Y^T Y (inf if singular)
  Vector kernel;         // unit z with Y z ~ 0 (smallest eigenvector of Y^T Y)
  Vector gram_eigenvalues; // ascending
};

inline constexpr Scalar kDefaultCondThreshold = 1e10;

RankInfo rank_deficiency(const StiefelPoint &Y,
                         Scalar cond_threshold = kDefaultCondThreshold);

/// (Y 0): Y_+ Y_+^T = Y Y^T exactly.
StiefelPoint append_zero_columns(const StiefelPoint &Y, Index p_plus);

/// Y V_r from the thin SVD of Y, for r = numerical rank. The result lies on
/// St(d, r)^m and factors the same X (up to truncated singular values).
StiefelPoint compress_to_rank(const StiefelPoint &Y, Index r);

} // namespace bdsdp
