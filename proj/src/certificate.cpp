#include "bdsdp/certificate.h"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace bdsdp {

Matrix Certificate::apply(const Matrix &V) const {
  if (!point_)
    throw InvalidArgument("Certificate::apply: empty certificate");
  check_shape("Certificate::apply", V.rows(), V.cols(), n_, V.cols());
  return point_->egrad_apply(V) + kernels::block_diag_apply(lambda_hat, V, d_);
}

Matrix Certificate::dense() const {
  if (n_ > kDenseStorageLimit)
    throw InvalidArgument("Certificate::dense: n too large");
  Matrix S = apply(Matrix::Identity(n_, n_));
  return 0.5 * (S + S.transpose());
}

Certificate build_certificate(const CostModel &model, const StiefelPoint &Y,
                              Scalar tol) {
  if (Y.manifold().spec != model.spec())
    throw DimensionError("build_certificate: point and cost disagree on (m, d)");
  Certificate c;
  const Index d = Y.manifold().d();
  c.n_ = Y.manifold().n();
  c.d_ = d;
  c.point_ = std::shared_ptr<const CostPoint>(model.at(Y.matrix()));
  const Matrix GY = c.point_->egrad_apply(Y.matrix());
  c.lambda_hat = -kernels::sym_block_products(GY, Y.matrix(), d);
  c.egrad_norm = c.point_->egrad_norm();

  if (c.n_ <= kDenseStorageLimit) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(c.dense());
    c.spectrum = eig.eigenvalues();
    c.lambda_min = eig.eigenvalues()(0);
    c.u_min = eig.eigenvectors().col(0);
  } else {
    LinearOp op = [&](const Vector &v) { return Vector(c.apply(v)); };
    LanczosOptions lo;
    lo.tol = 1e-10;
    EigenPair ep = lanczos_smallest(op, c.n_, lo);
    c.lambda_min = ep.value;
    c.u_min = ep.vector;
    c.eig_converged = ep.converged;
  }
  c.threshold =
      tol * std::max<Scalar>(1, c.egrad_norm / std::sqrt(static_cast<Scalar>(c.n_)));
  c.kkt = c.lambda_min >= -c.threshold;
  return c;
}

Scalar critical_point_residual(const CostModel &model, const StiefelPoint &Y) {
  const Linearization lin(model, Y);
  const Index d = Y.manifold().d();
  return (lin.egrad_Y() - kernels::block_diag_apply(lin.lambda(), Y.matrix(), d))
      .norm();
}

SdpBounds sdp_bounds(const CostModel &model, const StiefelPoint &Y) {
  if (model.convexity() != ConvexityClass::Linear)
    throw InvalidArgument("sdp_bounds: linear cost required");
  return sdp_bounds(model, Y, build_certificate(model, Y));
}

SdpBounds sdp_bounds(const CostModel &model, const StiefelPoint &Y,
                     const Certificate &cert) {
  if (model.convexity() != ConvexityClass::Linear)
    throw InvalidArgument("sdp_bounds: linear cost required");
  SdpBounds b;
  b.upper = g(model, Y);
  b.lambda_min = cert.lambda_min;
  const Scalar n = static_cast<Scalar>(Y.manifold().n());
  b.lower = b.upper + n * std::min<Scalar>(cert.lambda_min, 0);
  b.gap = b.upper - b.lower;
  return b;
}

std::string to_string(EscapeMode m) {
  return m == EscapeMode::RankDeficient ? "rank_deficient" : "augmented";
}

EscapeDirection escape_direction(const CostModel &model, const StiefelPoint &Y,
                                 const Certificate &cert) {
  if (!(cert.lambda_min < 0))
    throw InvalidArgument("escape_direction: S(X) has no negative eigenvalue");
  if (cert.n() != Y.manifold().n())
    throw DimensionError("escape_direction: certificate and point disagree");
  const RankInfo info = rank_deficiency(Y);
  if (!info.deficient)
    throw InvalidArgument(
        "escape_direction: Y has full rank; append a zero column first");

  EscapeDirection e;
  e.u = cert.u_min.normalized();
  e.z = info.kernel.normalized();
  // A kernel vector along a zero column is the augmented case.
  Index k = 0;
  e.z.cwiseAbs().maxCoeff(&k);
  const bool unit = (e.z.array() != 0.0).count() == 1;
  e.mode = unit && Y.matrix().col(k).squaredNorm() == 0.0
               ? EscapeMode::Augmented
               : EscapeMode::RankDeficient;
  e.Ydot = project_tangent(Y, e.u * e.z.transpose());
  const Scalar nrm = e.Ydot.norm();
  if (nrm > 0)
    e.Ydot /= nrm;
  const Linearization lin(model, Y);
  e.curvature = inner(e.Ydot, lin.hessian(e.Ydot));
  return e;
}

Scalar escape_quartic_coefficient(const LinearCost &C, const StiefelPoint &Y,
                                  const Vector &u) {
  const Index d = Y.manifold().d(), m = Y.manifold().m(), p = Y.p();
  check_shape("escape_quartic_coefficient", u.rows(), 1, Y.manifold().n(), 1);
  // <C, A X A> = trace(W^T C W) with W_i = u_i (Y_i^T u_i)^T.
  Matrix W(Y.manifold().n(), p);
  Vector Du(u.size());
  for (Index i = 0; i < m; ++i) {
    const auto ui = u.segment(i * d, d);
    W.block(i * d, 0, d, p) = ui * (Y.slice(i).transpose() * ui).transpose();
    Du.segment(i * d, d) = ui.squaredNorm() * ui;
  }
  const Scalar axa = (W.array() * C.C().apply(W).array()).sum();
  const Matrix CY = C.C().apply(Y.matrix());
  const Matrix lam = kernels::sym_block_products(CY, Y.matrix(), d);
  const Matrix umat = u;
  const Scalar dlam = Du.dot(kernels::block_diag_apply(lam, umat, d).col(0));
  const Scalar dc = Du.dot(C.C().apply(umat).col(0));
  return 0.25 * (axa + 3 * dlam - 4 * dc);
}

EscapeStep escape_backtracking(const CostModel &model, const StiefelPoint &Y,
                               const TangentVector &Ydot, Scalar curvature) {
  EscapeStep s;
  s.backtracked = true;
  s.phi0 = g(model, Y);
  // phi(t) ~ phi(0) + curvature t^2 / 2 along a critical point.
  const Scalar slope = std::min<Scalar>(curvature, 0) / 2;
  for (Scalar t = 1; t >= 1e-10; t /= 2) {
    StiefelPoint Yt;
    try {
      Yt = retract(Y, t * Ydot);
    } catch (const NumericalError &) {
      continue;
    }
    const Scalar phi = g(model, Yt);
    if (phi <= s.phi0 + 1e-4 * slope * t * t && phi < s.phi0) {
      s.t = t;
      s.phi_t = phi;
      s.Y = std::move(Yt);
      return s;
    }
  }
  s.t = 0;
  s.phi_t = s.phi0;
  s.Y = Y;
  return s;
}

EscapeStep escape_step_size(const LinearCost &C, const StiefelPoint &Y,
                            const Vector &u, const Vector &z) {
  const Vector un = u.normalized(), zn = z.normalized();
  const TangentVector Ydot = un * zn.transpose();
  const Matrix Su = C.C().apply(un) -
                    kernels::block_diag_apply(
                        kernels::sym_block_products(C.C().apply(Y.matrix()),
                                                    Y.matrix(), Y.manifold().d()),
                        un, Y.manifold().d());
  const Scalar uSu = un.dot(Su.col(0));
  const Scalar L = escape_quartic_coefficient(C, Y, un);
  if (L > 0 && uSu < 0) {
    EscapeStep s;
    s.L = L;
    s.t = std::sqrt(-uSu / (2 * L));
    s.phi0 = g(C, Y);
    try {
      s.Y = retract(Y, s.t * Ydot);
      s.phi_t = g(C, s.Y);
      if (s.phi_t < s.phi0)
        return s;
    } catch (const NumericalError &) {
    }
  }
  EscapeStep s = escape_backtracking(C, Y, Ydot, 2 * uSu);
  s.L = L;
  return s;
}

EscapeStep escape_step(const CostModel &model, const StiefelPoint &Y,
                       const EscapeDirection &dir) {
  if (const auto *lin = dynamic_cast<const LinearCost *>(&model))
    return escape_step_size(*lin, Y, dir.u, dir.z);
  return escape_backtracking(model, Y, dir.Ydot, dir.curvature);
}

} // namespace bdsdp
