#include "bdsdp/stiefel.h"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace bdsdp {

ManifoldSpec::ManifoldSpec(const BlockSpec &spec_, Index p_)
    : spec(spec_), p(p_) {
  if (p < spec.d || p > spec.n()) {
    std::ostringstream os;
    os << "ManifoldSpec: need d <= p <= n, got d=" << spec.d << " p=" << p
       << " n=" << spec.n();
    throw InvalidArgument(os.str());
  }
}

Index ManifoldSpec::dimension() const {
  return n() * p - m() * d() * (d() + 1) / 2;
}

Scalar feasibility_error(const Matrix &Y, Index d) {
  const Matrix G = kernels::sym_block_products(Y, Y, d);
  Scalar err2 = 0;
  for (Index i = 0; i < Y.rows() / d; ++i)
    err2 += (G.block(i * d, 0, d, d) - Matrix::Identity(d, d)).squaredNorm();
  return std::sqrt(err2);
}

StiefelPoint::StiefelPoint(const ManifoldSpec &manifold, Matrix Y, Scalar tol)
    : manifold_(manifold), Y_(std::move(Y)) {
  check_shape("StiefelPoint", Y_.rows(), Y_.cols(), manifold_.n(), manifold_.p);
  if (!Y_.allFinite())
    throw NumericalError("StiefelPoint: non-finite entries");
  const Scalar err = feasibility_error(Y_, manifold_.d());
  if (!(err <= tol * std::sqrt(static_cast<Scalar>(manifold_.n())))) {
    std::ostringstream os;
    os << "StiefelPoint: slices are not orthonormal (error " << err << ")";
    throw InvalidArgument(os.str());
  }
}

StiefelPoint StiefelPoint::unchecked(const ManifoldSpec &manifold, Matrix Y) {
  StiefelPoint out;
  check_shape("StiefelPoint", Y.rows(), Y.cols(), manifold.n(), manifold.p);
  out.manifold_ = manifold;
  out.Y_ = std::move(Y);
  return out;
}

Scalar tangency_error(const StiefelPoint &Y, const Matrix &Ydot) {
  return 2.0 * kernels::sym_block_products(Ydot, Y.matrix(), Y.manifold().d())
                   .norm();
}

StiefelPoint random_point(const ManifoldSpec &manifold, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<Scalar> normal;
  Matrix G(manifold.n(), manifold.p);
  // Fill row-major so the stream layout does not depend on storage order.
  for (Index r = 0; r < G.rows(); ++r)
    for (Index c = 0; c < G.cols(); ++c)
      G(r, c) = normal(rng);
  auto polar = kernels::polar_slices(G, manifold.d(), 0.0);
  return StiefelPoint::unchecked(manifold, std::move(polar.Q));
}

TangentVector project_tangent(const StiefelPoint &Y, const Matrix &Z) {
  check_shape("project_tangent", Z.rows(), Z.cols(), Y.matrix().rows(),
              Y.matrix().cols());
  const Index d = Y.manifold().d();
  const Matrix S = kernels::sym_block_products(Z, Y.matrix(), d);
  return Z - kernels::block_diag_apply(S, Y.matrix(), d);
}

StiefelPoint retract(const StiefelPoint &Y, const TangentVector &Ydot) {
  check_shape("retract", Ydot.rows(), Ydot.cols(), Y.matrix().rows(),
              Y.matrix().cols());
  auto polar =
      kernels::polar_slices(Y.matrix() + Ydot, Y.manifold().d(), 1e-12);
  if (polar.bad_slice >= 0) {
    std::ostringstream os;
    os << "retract: slice " << polar.bad_slice
       << " of Y + Ydot is rank deficient";
    throw NumericalError(os.str());
  }
  return StiefelPoint::unchecked(Y.manifold(), std::move(polar.Q));
}

Scalar inner(const TangentVector &U, const TangentVector &V) {
  check_shape("inner", V.rows(), V.cols(), U.rows(), U.cols());
  return (U.array() * V.array()).sum();
}

RankInfo rank_deficiency(const StiefelPoint &Y, Scalar cond_threshold) {
  const Matrix &M = Y.matrix();
  const Index p = M.cols();
  RankInfo info;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M.transpose() * M);
  info.gram_eigenvalues = eig.eigenvalues();
  const Scalar lmax = info.gram_eigenvalues(p - 1);
  const Scalar lmin = info.gram_eigenvalues(0);
  info.cond = lmin > 0 ? lmax / lmin : std::numeric_limits<Scalar>::infinity();
  info.deficient = info.cond > cond_threshold;
  info.numerical_rank = 0;
  for (Index k = 0; k < p; ++k)
    if (info.gram_eigenvalues(k) > lmax / cond_threshold)
      ++info.numerical_rank;

  // An exactly zero column gives an exact kernel vector.
  for (Index c = p - 1; c >= 0; --c) {
    if (M.col(c).squaredNorm() == 0.0) {
      info.kernel = Vector::Unit(p, c);
      return info;
    }
  }
  info.kernel = eig.eigenvectors().col(0);
  return info;
}

StiefelPoint append_zero_columns(const StiefelPoint &Y, Index p_plus) {
  if (p_plus <= Y.p())
    throw InvalidArgument("append_zero_columns: p_plus must exceed p");
  ManifoldSpec grown(Y.manifold().spec, p_plus);
  Matrix out = Matrix::Zero(Y.matrix().rows(), p_plus);
  out.leftCols(Y.p()) = Y.matrix();
  return StiefelPoint::unchecked(grown, std::move(out));
}

StiefelPoint compress_to_rank(const StiefelPoint &Y, Index r) {
  const Index d = Y.manifold().d();
  if (r < d || r > Y.p())
    throw InvalidArgument("compress_to_rank: need d <= r <= p");
  Eigen::JacobiSVD<Matrix> svd(Y.matrix(), Eigen::ComputeThinV);
  Matrix Yr = Y.matrix() * svd.matrixV().leftCols(r);
  auto polar = kernels::polar_slices(Yr, d, 1e-12);
  if (polar.bad_slice >= 0)
    throw NumericalError("compress_to_rank: a slice became rank deficient");
  return StiefelPoint::unchecked(ManifoldSpec(Y.manifold().spec, r),
                                 std::move(polar.Q));
}

} // namespace bdsdp
