#pragma once

#include "bdsdp/costs.h"
#include "bdsdp/lanczos.h"

#include <functional>
#include <vector>

namespace bdsdp {

struct RtrProgress {
  int iteration = 0;
  Index p = 0;
  Scalar cost = 0;
  Scalar grad_norm = 0;
  Scalar radius = 0;
  bool accepted = false;
};

struct RtrOptions {
  /// Stop when ||grad|| <= grad_tol * max(1, ||grad(Y0)||), or when
  /// ||grad|| <= grad_tol if absolute_tol is set.
  Scalar grad_tol = 1e-6;
  bool absolute_tol = false;
  int max_outer = 1000;
  /// Maximal radius; 0 means sqrt(dim).
  Scalar max_radius = 0;
  /// Initial radius; 0 means max_radius / 8.
  Scalar initial_radius = 0;
  Scalar rho_prime = 0.1;
  Scalar kappa = 0.1;
  Scalar theta = 1.0;
  /// Inner iteration cap; 0 means dim.
  Index max_inner = 0;
  /// Replace Hessian-vector products by finite differences of the gradient.
  bool fd_hessian = false;
  std::function<void(const RtrProgress &)> callback;
};

enum class RtrStatus { Converged, MaxIter, Stalled };

std::string to_string(RtrStatus s);

struct RtrResult {
  StiefelPoint Y;
  Scalar cost = 0;
  Scalar grad_norm = 0;
  Scalar grad_threshold = 0;
  int iterations = 0;
  Index hessian_products = 0;
  std::vector<Scalar> cost_trace; // initial cost, then one entry per accepted step
  RtrStatus status = RtrStatus::MaxIter;
};

enum class TcgReason {
  NegativeCurvature,
  Boundary,
  KappaTol,
  ThetaTol,
  MaxInner,
  ModelIncrease
};

std::string to_string(TcgReason r);

struct TcgResult {
  TangentVector step;
  TangentVector Hstep; // Hess[step], tracked through the iterations
  TcgReason reason = TcgReason::KappaTol;
  Index inner_iterations = 0;
};

using HessianOp = std::function<TangentVector(const TangentVector &)>;

/// Steihaug-Toint truncated CG on the model m(s) = <grad, s> + <s, H s>/2
/// restricted to the ball ||s|| <= radius.
TcgResult truncated_cg(const StiefelPoint &Y, const TangentVector &grad,
                       const HessianOp &hess, Scalar radius,
                       const RtrOptions &opts = {});

TcgResult truncated_cg(const CostModel &model, const StiefelPoint &Y,
                       const TangentVector &grad, Scalar radius,
                       const RtrOptions &opts = {});

RtrResult minimize(const CostModel &model, const StiefelPoint &Y0,
                   const RtrOptions &opts = {});

struct HessianEigen {
  Scalar value = 0;
  TangentVector vector;
  Scalar residual = 0;
  bool converged = false;
};

/// Smallest eigenpair of the Riemannian Hessian on the tangent space at Y.
HessianEigen min_eig_hessian(const CostModel &model, const StiefelPoint &Y,
                             Scalar tol = 1e-8, std::uint64_t seed = 7);

} // namespace bdsdp
