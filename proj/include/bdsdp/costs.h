#pragma once

#include "bdsdp/blockmat.h"
#include "bdsdp/stiefel.h"

#include <memory>
#include <string>

namespace bdsdp {

enum class ConvexityClass { Linear, Concave, StronglyConcave, Convex, General };

std::string to_string(ConvexityClass c);

/// f and its derivatives frozen at X = Y Y^T. Implementations never form X
/// when they can avoid it.
class CostPoint {
public:
  virtual ~CostPoint() = default;
  /// f(Y Y^T)
  virtual Scalar value() const = 0;
  /// grad f(X) * V
  virtual Matrix egrad_apply(const Matrix &V) const = 0;
  /// Hess f(X)[Ydot Y^T + Y Ydot^T] * Y
  virtual Matrix ehess_term(const Matrix &Ydot) const = 0;
  /// ||grad f(X)||_F
  virtual Scalar egrad_norm() const = 0;
  virtual bool has_curvature() const { return true; }
};

/// Cost f over the symmetric n x n matrices, lifted to g(Y) = f(Y Y^T).
class CostModel {
public:
  virtual ~CostModel() = default;

  virtual const BlockSpec &spec() const = 0;
  virtual ConvexityClass convexity() const = 0;
  virtual std::string kind() const = 0;

  virtual std::unique_ptr<CostPoint> at(const Matrix &Y) const = 0;

  // Dense X-level access, for diagnostics on small instances.
  virtual Scalar value_at(const Matrix &X) const = 0;
  virtual Matrix gradient_at(const Matrix &X) const = 0;
  virtual Matrix hessian_at(const Matrix &X, const Matrix &Xdot) const = 0;
};

/// f(X) = <C, X>.
class LinearCost final : public CostModel {
public:
  explicit LinearCost(SymBlockMatrix C);

  const BlockSpec &spec() const override { return C_->spec(); }
  ConvexityClass convexity() const override { return ConvexityClass::Linear; }
  std::string kind() const override { return "linear"; }
  std::unique_ptr<CostPoint> at(const Matrix &Y) const override;
  Scalar value_at(const Matrix &X) const override;
  Matrix gradient_at(const Matrix &X) const override;
  Matrix hessian_at(const Matrix &X, const Matrix &Xdot) const override;

  const SymBlockMatrix &C() const { return *C_; }

private:
  std::shared_ptr<const SymBlockMatrix> C_;
};

/// f(X) = sum_{i,j} sqrt(||H_ij||^2 + d - 2 <H_ij, X_ij> + eps^2) - eps.
/// Strongly concave. On the manifold the i = j terms are identically zero
/// (X_ii = I_d = H_ii), so the Y-level evaluation skips them; this leaves g,
/// its Riemannian derivatives and S(X) unchanged.
class PseudoHuberCost final : public CostModel {
public:
  PseudoHuberCost(SymBlockMatrix H, Scalar eps);

  const BlockSpec &spec() const override { return H_.spec(); }
  ConvexityClass convexity() const override {
    return ConvexityClass::StronglyConcave;
  }
  std::string kind() const override { return "pseudo-huber"; }
  std::unique_ptr<CostPoint> at(const Matrix &Y) const override;
  Scalar value_at(const Matrix &X) const override;
  Matrix gradient_at(const Matrix &X) const override;
  Matrix hessian_at(const Matrix &X, const Matrix &Xdot) const override;

  const SymBlockMatrix &H() const { return H_; }
  Scalar eps() const { return eps_; }

private:
  SymBlockMatrix H_;
  std::shared_ptr<const Matrix> Hdense_;
  Matrix block_norms2_; // m x m, ||H_ij||_F^2
  Scalar eps_;
};

/// f(X) = sum_{i != j} l_eps(||X_ij - H_ij||_F), l_eps(x) = sqrt(x^2 + eps^2)
/// - eps. Convex.
class SmoothedLUDCost final : public CostModel {
public:
  SmoothedLUDCost(SymBlockMatrix H, Scalar eps);

  const BlockSpec &spec() const override { return H_.spec(); }
  ConvexityClass convexity() const override { return ConvexityClass::Convex; }
  std::string kind() const override { return "smoothed-lud"; }
  std::unique_ptr<CostPoint> at(const Matrix &Y) const override;
  Scalar value_at(const Matrix &X) const override;
  Matrix gradient_at(const Matrix &X) const override;
  Matrix hessian_at(const Matrix &X, const Matrix &Xdot) const override;

  const SymBlockMatrix &H() const { return H_; }
  Scalar eps() const { return eps_; }

private:
  SymBlockMatrix H_;
  std::shared_ptr<const Matrix> Hdense_;
  Scalar eps_;
};

/// Block (i, j) = -H_ij / sqrt(||H_ij||^2 + d - 2 <H_ij, X_ij> + eps^2), for
/// all blocks including the diagonal.
SymBlockMatrix pseudo_huber_gradient_blocks(const SymBlockMatrix &H, Scalar eps,
                                            const Matrix &X);

/// Everything the Riemannian methods need at one point Y, computed once.
class Linearization {
public:
  Linearization(const CostModel &model, const StiefelPoint &Y);

  const CostModel &model() const { return *model_; }
  const StiefelPoint &point() const { return Y_; }
  const CostPoint &cost_point() const { return *cp_; }

  Scalar value() const { return value_; }
  /// grad f(X) Y
  const Matrix &egrad_Y() const { return GY_; }
  /// Stacked blocks of symblockdiag(grad f(X) X) (n x d).
  const Matrix &lambda() const { return lambda_; }
  const TangentVector &gradient() const { return grad_; }
  Scalar gradient_norm() const { return grad_.norm(); }

  TangentVector hessian(const TangentVector &Ydot) const;

private:
  const CostModel *model_;
  StiefelPoint Y_;
  std::unique_ptr<CostPoint> cp_;
  Scalar value_;
  Matrix GY_;
  Matrix lambda_;
  TangentVector grad_;
};

/// g(Y) = f(Y Y^T).
Scalar g(const CostModel &model, const StiefelPoint &Y);

/// Proj_Y(2 grad f(Y Y^T) Y).
TangentVector riemannian_gradient(const CostModel &model, const StiefelPoint &Y);

/// Proj_Y(Hess g(Y)[Ydot] - symblockdiag(grad g(Y) Y^T) Ydot).
TangentVector riemannian_hessian(const CostModel &model, const StiefelPoint &Y,
                                 const TangentVector &Ydot);

/// Finite-difference Hessian: (Proj_Y grad(R_Y(t Ydot)) - grad(Y)) / t, with
/// t = step / ||Ydot||.
TangentVector riemannian_hessian_fd(const Linearization &lin,
                                    const TangentVector &Ydot,
                                    Scalar step = 1e-6);

} // namespace bdsdp
