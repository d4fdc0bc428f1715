#include "bdsdp/costs.h"

#include <cmath>

namespace bdsdp {

std::string to_string(ConvexityClass c) {
  switch (c) {
  case ConvexityClass::Linear:
    return "linear";
  case ConvexityClass::Concave:
    return "concave";
  case ConvexityClass::StronglyConcave:
    return "strongly_concave";
  case ConvexityClass::Convex:
    return "convex";
  case ConvexityClass::General:
    break;
  }
  return "general";
}

namespace {

void check_Y(const BlockSpec &spec, const Matrix &Y, const char *where) {
  if (Y.rows() != spec.n())
    throw DimensionError(std::string(where) + ": Y has the wrong row count");
  if (!Y.allFinite())
    throw NumericalError(std::string(where) + ": non-finite Y");
}

void check_X(const BlockSpec &spec, const Matrix &X, const char *where) {
  check_shape(where, X.rows(), X.cols(), spec.n(), spec.n());
}

// Xdot = P + P^T with P = Ydot Y^T.
Matrix lifted_direction(const Matrix &Y, const Matrix &Ydot) {
  Matrix P = kernels::outer(Ydot, Y);
  Matrix Xdot = P + P.transpose();
  return Xdot;
}

Scalar block_inner(const Matrix &A, const Matrix &B, Index i, Index j,
                   Index d) {
  return (A.block(i * d, j * d, d, d).array() *
          B.block(i * d, j * d, d, d).array())
      .sum();
}

// ---------------------------------------------------------------- linear

class LinearPoint final : public CostPoint {
public:
  LinearPoint(std::shared_ptr<const SymBlockMatrix> C, const Matrix &Y)
      : C_(std::move(C)), Y_(Y), CY_(C_->apply(Y)) {
    value_ = (Y_.array() * CY_.array()).sum();
  }
  Scalar value() const override { return value_; }
  Matrix egrad_apply(const Matrix &V) const override {
    if (V.rows() == Y_.rows() && V.cols() == Y_.cols() &&
        (V.data() == Y_.data() || V == Y_))
      return CY_;
    return C_->apply(V);
  }
  Matrix ehess_term(const Matrix &Ydot) const override {
    return Matrix::Zero(Ydot.rows(), Ydot.cols());
  }
  Scalar egrad_norm() const override { return C_->frobenius_norm(); }
  bool has_curvature() const override { return false; }

private:
  std::shared_ptr<const SymBlockMatrix> C_;
  Matrix Y_;
  Matrix CY_;
  Scalar value_;
};

// ---------------------------------------------------------- pseudo-Huber

class PseudoHuberPoint final : public CostPoint {
public:
  PseudoHuberPoint(std::shared_ptr<const Matrix> Hdense, const Matrix &norms2,
                   Index d, Scalar eps, const Matrix &Y)
      : Hp_(std::move(Hdense)), H_(*Hp_), d_(d), Y_(Y) {
    const Index m = Y.rows() / d;
    const Matrix X = kernels::outer(Y, Y);
    r_.resize(m, m);
    G_ = Matrix::Zero(Y.rows(), Y.rows());
    value_ = 0;
    Scalar gnorm2 = 0;
    for (Index j = 0; j < m; ++j) {
      for (Index i = 0; i < m; ++i) {
        if (i == j) {
          r_(i, j) = eps;
          continue;
        }
        const Scalar hx = block_inner(H_, X, i, j, d);
        const Scalar rad = norms2(i, j) + static_cast<Scalar>(d) - 2 * hx + eps * eps;
        const Scalar r = std::sqrt(std::max(rad, eps * eps * 1e-4));
        r_(i, j) = r;
        value_ += r - eps;
        G_.block(i * d, j * d, d, d) = -H_.block(i * d, j * d, d, d) / r;
        gnorm2 += norms2(i, j) / (r * r);
      }
    }
    gnorm_ = std::sqrt(gnorm2);
    if (!std::isfinite(value_))
      throw NumericalError("PseudoHuberCost: non-finite value");
  }

  Scalar value() const override { return value_; }
  Matrix egrad_apply(const Matrix &V) const override {
    return kernels::dense_apply(G_, V);
  }
  Matrix ehess_term(const Matrix &Ydot) const override {
    const Index m = Y_.rows() / d_;
    const Matrix Xdot = lifted_direction(Y_, Ydot);
    Matrix B = Matrix::Zero(Y_.rows(), Y_.rows());
    for (Index j = 0; j < m; ++j) {
      for (Index i = 0; i < m; ++i) {
        if (i == j)
          continue;
        const Scalar r = r_(i, j);
        const Scalar c = block_inner(H_, Xdot, i, j, d_);
        B.block(i * d_, j * d_, d_, d_) =
            -(c / (r * r * r)) * H_.block(i * d_, j * d_, d_, d_);
      }
    }
    return kernels::dense_apply(B, Y_);
  }
  Scalar egrad_norm() const override { return gnorm_; }

private:
  std::shared_ptr<const Matrix> Hp_;
  const Matrix &H_;
  Index d_;
  Matrix Y_;
  Matrix r_;
  Matrix G_;
  Scalar value_;
  Scalar gnorm_;
};

// ---------------------------------------------------------- smoothed LUD

class SmoothedLUDPoint final : public CostPoint {
public:
  SmoothedLUDPoint(const Matrix &Hdense, Index d, Scalar eps, const Matrix &Y)
      : d_(d), Y_(Y) {
    const Index m = Y.rows() / d;
    R_ = kernels::outer(Y, Y) - Hdense;
    w_.resize(m, m);
    G_ = Matrix::Zero(Y.rows(), Y.rows());
    value_ = 0;
    Scalar gnorm2 = 0;
    for (Index j = 0; j < m; ++j) {
      for (Index i = 0; i < m; ++i) {
        if (i == j) {
          w_(i, j) = 0;
          continue;
        }
        const Scalar r2 = R_.block(i * d, j * d, d, d).squaredNorm();
        const Scalar s = std::sqrt(r2 + eps * eps);
        w_(i, j) = 1.0 / s;
        value_ += s - eps;
        G_.block(i * d, j * d, d, d) = R_.block(i * d, j * d, d, d) / s;
        gnorm2 += r2 / (s * s);
      }
    }
    gnorm_ = std::sqrt(gnorm2);
  }

  Scalar value() const override { return value_; }
  Matrix egrad_apply(const Matrix &V) const override {
    return kernels::dense_apply(G_, V);
  }
  Matrix ehess_term(const Matrix &Ydot) const override {
    const Index m = Y_.rows() / d_;
    const Matrix Xdot = lifted_direction(Y_, Ydot);
    Matrix B = Matrix::Zero(Y_.rows(), Y_.rows());
    for (Index j = 0; j < m; ++j) {
      for (Index i = 0; i < m; ++i) {
        if (i == j)
          continue;
        const Scalar w = w_(i, j);
        const Scalar c = block_inner(R_, Xdot, i, j, d_);
        B.block(i * d_, j * d_, d_, d_) =
            w * Xdot.block(i * d_, j * d_, d_, d_) -
            (w * w * w * c) * R_.block(i * d_, j * d_, d_, d_);
      }
    }
    return kernels::dense_apply(B, Y_);
  }
  Scalar egrad_norm() const override { return gnorm_; }

private:
  Index d_;
  Matrix Y_;
  Matrix R_;
  Matrix w_;
  Matrix G_;
  Scalar value_;
  Scalar gnorm_;
};

void check_measurements(const SymBlockMatrix &H, Scalar eps, const char *where) {
  if (!(eps > 0))
    throw InvalidArgument(std::string(where) + ": eps must be positive");
  if (H.n() == 0)
    throw InvalidArgument(std::string(where) + ": empty measurement matrix");
}

Matrix block_norms2(const Matrix &H, Index d) {
  const Index m = H.rows() / d;
  Matrix out(m, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i)
      out(i, j) = H.block(i * d, j * d, d, d).squaredNorm();
  return out;
}

} // namespace

// ---------------------------------------------------------------- models

LinearCost::LinearCost(SymBlockMatrix C)
    : C_(std::make_shared<const SymBlockMatrix>(std::move(C))) {}

std::unique_ptr<CostPoint> LinearCost::at(const Matrix &Y) const {
  check_Y(spec(), Y, "LinearCost");
  return std::make_unique<LinearPoint>(C_, Y);
}

Scalar LinearCost::value_at(const Matrix &X) const {
  check_X(spec(), X, "LinearCost::value_at");
  return (C_->to_dense().array() * X.array()).sum();
}

Matrix LinearCost::gradient_at(const Matrix &X) const {
  check_X(spec(), X, "LinearCost::gradient_at");
  return C_->to_dense();
}

Matrix LinearCost::hessian_at(const Matrix &X, const Matrix &Xdot) const {
  check_X(spec(), X, "LinearCost::hessian_at");
  return Matrix::Zero(Xdot.rows(), Xdot.cols());
}

PseudoHuberCost::PseudoHuberCost(SymBlockMatrix H, Scalar eps)
    : H_(std::move(H)), eps_(eps) {
  check_measurements(H_, eps_, "PseudoHuberCost");
  Hdense_ = std::make_shared<const Matrix>(H_.to_dense());
  block_norms2_ = block_norms2(*Hdense_, H_.spec().d);
}

std::unique_ptr<CostPoint> PseudoHuberCost::at(const Matrix &Y) const {
  check_Y(spec(), Y, "PseudoHuberCost");
  return std::make_unique<PseudoHuberPoint>(Hdense_, block_norms2_, spec().d,
                                            eps_, Y);
}

Scalar PseudoHuberCost::value_at(const Matrix &X) const {
  check_X(spec(), X, "PseudoHuberCost::value_at");
  const Index d = spec().d, m = spec().m;
  Scalar v = 0;
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i)
      v += std::sqrt(block_norms2_(i, j) + static_cast<Scalar>(d) -
                     2 * block_inner(*Hdense_, X, i, j, d) + eps_ * eps_) -
           eps_;
  return v;
}

Matrix PseudoHuberCost::gradient_at(const Matrix &X) const {
  return pseudo_huber_gradient_blocks(H_, eps_, X).to_dense();
}

Matrix PseudoHuberCost::hessian_at(const Matrix &X, const Matrix &Xdot) const {
  check_X(spec(), X, "PseudoHuberCost::hessian_at");
  const Index d = spec().d, m = spec().m;
  Matrix out(X.rows(), X.cols());
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) {
      const Scalar r = std::sqrt(block_norms2_(i, j) + static_cast<Scalar>(d) -
                                 2 * block_inner(*Hdense_, X, i, j, d) +
                                 eps_ * eps_);
      const Scalar c = block_inner(*Hdense_, Xdot, i, j, d);
      out.block(i * d, j * d, d, d) =
          -(c / (r * r * r)) * Hdense_->block(i * d, j * d, d, d);
    }
  }
  return out;
}

SmoothedLUDCost::SmoothedLUDCost(SymBlockMatrix H, Scalar eps)
    : H_(std::move(H)), eps_(eps) {
  check_measurements(H_, eps_, "SmoothedLUDCost");
  Hdense_ = std::make_shared<const Matrix>(H_.to_dense());
}

std::unique_ptr<CostPoint> SmoothedLUDCost::at(const Matrix &Y) const {
  check_Y(spec(), Y, "SmoothedLUDCost");
  return std::make_unique<SmoothedLUDPoint>(*Hdense_, spec().d, eps_, Y);
}

Scalar SmoothedLUDCost::value_at(const Matrix &X) const {
  check_X(spec(), X, "SmoothedLUDCost::value_at");
  const Index d = spec().d, m = spec().m;
  Scalar v = 0;
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i)
      if (i != j)
        v += std::sqrt((X - *Hdense_).block(i * d, j * d, d, d).squaredNorm() +
                       eps_ * eps_) -
             eps_;
  return v;
}

Matrix SmoothedLUDCost::gradient_at(const Matrix &X) const {
  check_X(spec(), X, "SmoothedLUDCost::gradient_at");
  const Index d = spec().d, m = spec().m;
  const Matrix R = X - *Hdense_;
  Matrix G = Matrix::Zero(X.rows(), X.cols());
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i)
      if (i != j) {
        const auto Rij = R.block(i * d, j * d, d, d);
        G.block(i * d, j * d, d, d) =
            Rij / std::sqrt(Rij.squaredNorm() + eps_ * eps_);
      }
  return G;
}

Matrix SmoothedLUDCost::hessian_at(const Matrix &X, const Matrix &Xdot) const {
  check_X(spec(), X, "SmoothedLUDCost::hessian_at");
  const Index d = spec().d, m = spec().m;
  const Matrix R = X - *Hdense_;
  Matrix out = Matrix::Zero(X.rows(), X.cols());
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i)
      if (i != j) {
        const auto Rij = R.block(i * d, j * d, d, d);
        const Scalar w = 1.0 / std::sqrt(Rij.squaredNorm() + eps_ * eps_);
        const Scalar c = block_inner(R, Xdot, i, j, d);
        out.block(i * d, j * d, d, d) =
            w * Xdot.block(i * d, j * d, d, d) - (w * w * w * c) * Rij;
      }
  return out;
}

SymBlockMatrix pseudo_huber_gradient_blocks(const SymBlockMatrix &H, Scalar eps,
                                            const Matrix &X) {
  if (!(eps > 0))
    throw InvalidArgument("pseudo_huber_gradient_blocks: eps must be positive");
  const BlockSpec &spec = H.spec();
  check_X(spec, X, "pseudo_huber_gradient_blocks");
  const Index d = spec.d, m = spec.m;
  const Matrix Hd = H.to_dense();
  Matrix G(spec.n(), spec.n());
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) {
      const auto Hij = Hd.block(i * d, j * d, d, d);
      const Scalar r = std::sqrt(Hij.squaredNorm() + static_cast<Scalar>(d) -
                                 2 * block_inner(Hd, X, i, j, d) + eps * eps);
      G.block(i * d, j * d, d, d) = -Hij / r;
    }
  }
  return SymBlockMatrix::from_dense(spec, G, Storage::Dense, 1e-8);
}

// --------------------------------------------------------- linearization

Linearization::Linearization(const CostModel &model, const StiefelPoint &Y)
    : model_(&model), Y_(Y), cp_(model.at(Y.matrix())) {
  if (Y.manifold().spec != model.spec())
    throw DimensionError("Linearization: point and cost disagree on (m, d)");
  const Index d = Y.manifold().d();
  value_ = cp_->value();
  GY_ = cp_->egrad_apply(Y_.matrix());
  lambda_ = kernels::sym_block_products(GY_, Y_.matrix(), d);
  grad_ = 2.0 * (GY_ - kernels::block_diag_apply(lambda_, Y_.matrix(), d));
  if (!std::isfinite(value_) || !grad_.allFinite())
    throw NumericalError("Linearization: non-finite cost or gradient");
}

TangentVector Linearization::hessian(const TangentVector &Ydot) const {
  check_shape("Linearization::hessian", Ydot.rows(), Ydot.cols(),
              Y_.matrix().rows(), Y_.matrix().cols());
  const Index d = Y_.manifold().d();
  Matrix Z = cp_->egrad_apply(Ydot) -
             kernels::block_diag_apply(lambda_, Ydot, d);
  if (cp_->has_curvature())
    Z += cp_->ehess_term(Ydot);
  return project_tangent(Y_, 2.0 * Z);
}

Scalar g(const CostModel &model, const StiefelPoint &Y) {
  if (Y.manifold().spec != model.spec())
    throw DimensionError("g: point and cost disagree on (m, d)");
  return model.at(Y.matrix())->value();
}

TangentVector riemannian_gradient(const CostModel &model, const StiefelPoint &Y) {
  return Linearization(model, Y).gradient();
}

TangentVector riemannian_hessian(const CostModel &model, const StiefelPoint &Y,
                                 const TangentVector &Ydot) {
  return Linearization(model, Y).hessian(Ydot);
}

TangentVector riemannian_hessian_fd(const Linearization &lin,
                                    const TangentVector &Ydot, Scalar step) {
  const Scalar nrm = Ydot.norm();
  if (nrm == 0.0)
    return Matrix::Zero(Ydot.rows(), Ydot.cols());
  const Scalar t = step / nrm;
  const StiefelPoint Yt = retract(lin.point(), t * Ydot);
  const TangentVector gt = riemannian_gradient(lin.model(), Yt);
  return (project_tangent(lin.point(), gt) - lin.gradient()) / t;
}

} // namespace bdsdp
