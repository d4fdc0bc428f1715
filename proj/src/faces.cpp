#include "bdsdp/faces.h"

#include "bdsdp/lanczos.h"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

namespace bdsdp {

Scalar p_star(Index m, Index d) {
  const Scalar md = static_cast<Scalar>(m) * static_cast<Scalar>(d) *
                    static_cast<Scalar>(d + 1);
  return (std::sqrt(1 + 4 * md) - 1) / 2;
}

long long face_operator_flops(Index m, Index d, Index p) {
  return 2LL * m * (d * d * p + p * p * d);
}

Matrix face_operator_apply(const StiefelPoint &Y, const Matrix &A,
                           std::atomic<long long> *flops) {
  const Index d = Y.manifold().d(), m = Y.manifold().m(), p = Y.p();
  check_shape("face_operator_apply", A.rows(), A.cols(), p, p);
  Matrix out = Matrix::Zero(p, p);
  for (Index i = 0; i < m; ++i) {
    const auto Yi = Y.slice(i);
    const Matrix B = (Yi * A) * Yi.transpose();
    out.noalias() += (Yi.transpose() * B) * Yi;
  }
  if (flops)
    *flops += face_operator_flops(m, d, p);
  return out;
}

namespace {

FaceReport base_report(const StiefelPoint &Y) {
  const Index d = Y.manifold().d(), m = Y.manifold().m(), p = Y.p();
  FaceReport r;
  r.p = p;
  r.delta = sym_dim(p) - m * sym_dim(d);
  r.p_star = p_star(m, d);
  r.upper_bound = static_cast<Scalar>(p * (p - d)) / 2;
  return r;
}

void require_full_rank(const StiefelPoint &Y, const char *where) {
  if (rank_deficiency(Y).deficient)
    throw InvalidArgument(std::string(where) + ": Y is rank deficient");
}

} // namespace

FaceReport face_dimension(const StiefelPoint &Y, Scalar tol) {
  require_full_rank(Y, "face_dimension");
  FaceReport r = base_report(Y);
  // Counting the kernel needs the whole spectrum, so the operator is formed
  // densely at every size.
  const Matrix H = kernels::face_gram_matrix(Y.matrix(), Y.manifold().d());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(H, Eigen::EigenvaluesOnly);
  const Vector &ev = eig.eigenvalues();
  r.h_min = ev(0);
  r.h_max = ev(ev.size() - 1);
  const Scalar cut = tol * std::max<Scalar>(r.h_max, 0);
  r.dim_face = 0;
  for (Index k = 0; k < ev.size(); ++k)
    if (ev(k) <= cut)
      ++r.dim_face;
  r.is_extreme = r.dim_face == 0;
  return r;
}

std::optional<StiefelPoint> in_face_rank_reduction(const StiefelPoint &Y,
                                                   Scalar tol) {
  require_full_rank(Y, "in_face_rank_reduction");
  const Index p = Y.p(), d = Y.manifold().d();
  Vector a;
  Scalar hmin = 0, hmax = 0;
  if (p <= kFaceDenseLimit) {
    const Matrix H = kernels::face_gram_matrix(Y.matrix(), d);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
    hmin = eig.eigenvalues()(0);
    hmax = eig.eigenvalues()(eig.eigenvalues().size() - 1);
    a = eig.eigenvectors().col(0);
  } else {
    LinearOp op = [&](const Vector &v) {
      return svec(face_operator_apply(Y, smat(v, p)));
    };
    LinearOp neg = [&](const Vector &v) { return Vector(-op(v)); };
    LanczosOptions lo;
    lo.tol = 1e-12;
    hmax = -lanczos_smallest(neg, sym_dim(p), lo).value;
    EigenPair ep = lanczos_smallest(op, sym_dim(p), lo);
    hmin = ep.value;
    a = ep.vector;
  }
  if (hmin > tol * std::max<Scalar>(hmax, 0))
    return std::nullopt;

  Matrix A = smat(a, p);
  Eigen::SelfAdjointEigenSolver<Matrix> ea(A, Eigen::EigenvaluesOnly);
  if (ea.eigenvalues()(0) >= 0)
    A = -A;
  Eigen::SelfAdjointEigenSolver<Matrix> eA(A);
  const Scalar lam = eA.eigenvalues()(0);
  if (!(lam < 0))
    throw NumericalError("in_face_rank_reduction: degenerate kernel direction");

  const Matrix M = Matrix::Identity(p, p) - A / lam;
  Eigen::SelfAdjointEigenSolver<Matrix> eM(M);
  // Descending order puts the null direction last.
  Matrix L(p, p);
  for (Index k = 0; k < p; ++k) {
    const Index src = p - 1 - k;
    const Scalar mu = std::max<Scalar>(eM.eigenvalues()(src), 0);
    L.col(k) = std::sqrt(mu) * eM.eigenvectors().col(src);
  }
  L.col(p - 1).setZero();
  auto polar = kernels::polar_slices(Y.matrix() * L, d, 1e-12);
  if (polar.bad_slice >= 0)
    throw NumericalError("in_face_rank_reduction: slice lost rank");
  polar.Q.col(p - 1).setZero();
  return StiefelPoint::unchecked(Y.manifold(), std::move(polar.Q));
}

Index negative_eigenvalue_budget(const FaceReport &report) {
  const Index diff = report.dim_face - report.delta;
  if (diff <= 0)
    return 0;
  return diff / report.p;
}

Scalar generic_face_dimension_trial(Index d, Index m, Index p, Index trials,
                                    std::uint64_t seed) {
  if (trials < 1)
    throw InvalidArgument("generic_face_dimension_trial: trials must be >= 1");
  const ManifoldSpec M(BlockSpec(m, d), p);
  std::vector<char> hit(static_cast<std::size_t>(trials), 0);
#pragma omp parallel for schedule(dynamic) if (trials > 16)
  for (Index t = 0; t < trials; ++t) {
    const StiefelPoint Y = random_point(M, derive_seed(seed, static_cast<std::uint64_t>(t)));
    if (rank_deficiency(Y).deficient)
      continue;
    const FaceReport r = face_dimension(Y);
    hit[static_cast<std::size_t>(t)] = r.dim_face == std::max<Index>(0, r.delta);
  }
  Index count = 0;
  for (char h : hit)
    count += h;
  return static_cast<Scalar>(count) / static_cast<Scalar>(trials);
}

} // namespace bdsdp
