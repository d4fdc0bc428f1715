#include "bdsdp/rtr.h"

#include <cmath>
#include <limits>

namespace bdsdp {

std::string to_string(RtrStatus s) {
  switch (s) {
  case RtrStatus::Converged:
    return "converged";
  case RtrStatus::MaxIter:
    return "max_iter";
  case RtrStatus::Stalled:
    break;
  }
  return "stalled";
}

std::string to_string(TcgReason r) {
  switch (r) {
  case TcgReason::NegativeCurvature:
    return "neg_curvature";
  case TcgReason::Boundary:
    return "boundary";
  case TcgReason::KappaTol:
    return "kappa_tol";
  case TcgReason::ThetaTol:
    return "theta_tol";
  case TcgReason::MaxInner:
    return "max_inner";
  case TcgReason::ModelIncrease:
    break;
  }
  return "model_increase";
}

TcgResult truncated_cg(const StiefelPoint &Y, const TangentVector &grad,
                       const HessianOp &hess, Scalar radius,
                       const RtrOptions &opts) {
  TcgResult out;
  out.step = Matrix::Zero(grad.rows(), grad.cols());
  out.Hstep = out.step;
  const Scalar r0 = grad.norm();
  if (r0 == 0.0 || !(radius > 0)) {
    out.reason = TcgReason::KappaTol;
    return out;
  }
  const Index max_inner =
      opts.max_inner > 0 ? opts.max_inner : Y.manifold().dimension();

  TangentVector r = grad;
  Scalar r_r = inner(r, r);
  TangentVector delta = -r;
  Scalar e_Pe = 0, e_Pd = 0, d_Pd = r_r;
  Scalar model_value = 0;
  const Scalar r2 = radius * radius;

  out.reason = TcgReason::MaxInner;
  for (Index j = 0; j < max_inner; ++j) {
    const TangentVector Hdelta = hess(delta);
    const Scalar d_Hd = inner(delta, Hdelta);
    const Scalar alpha = r_r / d_Hd;
    const Scalar e_Pe_new = e_Pe + 2 * alpha * e_Pd + alpha * alpha * d_Pd;
    out.inner_iterations = j + 1;

    if (d_Hd <= 0 || e_Pe_new >= r2) {
      const Scalar tau =
          (-e_Pd + std::sqrt(std::max<Scalar>(0, e_Pd * e_Pd + d_Pd * (r2 - e_Pe)))) /
          d_Pd;
      out.step += tau * delta;
      out.Hstep += tau * Hdelta;
      out.reason =
          d_Hd <= 0 ? TcgReason::NegativeCurvature : TcgReason::Boundary;
      break;
    }

    TangentVector new_step = out.step + alpha * delta;
    TangentVector new_Hstep = out.Hstep + alpha * Hdelta;
    const Scalar new_model =
        inner(new_step, grad) + 0.5 * inner(new_step, new_Hstep);
    if (new_model >= model_value) {
      out.reason = TcgReason::ModelIncrease;
      break;
    }
    out.step = std::move(new_step);
    out.Hstep = std::move(new_Hstep);
    model_value = new_model;
    e_Pe = e_Pe_new;

    r += alpha * Hdelta;
    r = project_tangent(Y, r);
    const Scalar r_r_new = inner(r, r);
    const Scalar rn = std::sqrt(r_r_new);
    if (rn <= r0 * std::min(std::pow(r0, opts.theta), opts.kappa)) {
      out.reason = opts.kappa < std::pow(r0, opts.theta) ? TcgReason::KappaTol
                                                         : TcgReason::ThetaTol;
      break;
    }

    const Scalar beta = r_r_new / r_r;
    r_r = r_r_new;
    delta = project_tangent(Y, -r + beta * delta);
    e_Pd = beta * (e_Pd + alpha * d_Pd);
    d_Pd = r_r + beta * beta * d_Pd;
  }
  return out;
}

TcgResult truncated_cg(const CostModel &model, const StiefelPoint &Y,
                       const TangentVector &grad, Scalar radius,
                       const RtrOptions &opts) {
  const Linearization lin(model, Y);
  HessianOp hess = [&](const TangentVector &v) { return lin.hessian(v); };
  return truncated_cg(Y, grad, hess, radius, opts);
}

RtrResult minimize(const CostModel &model, const StiefelPoint &Y0,
                   const RtrOptions &opts) {
  if (!(opts.rho_prime > 0 && opts.rho_prime <= 0.25))
    throw InvalidArgument("minimize: rho_prime must lie in (0, 1/4]");
  if (!(opts.grad_tol > 0) || !(opts.kappa > 0) || !(opts.theta > 0))
    throw InvalidArgument("minimize: tolerances must be positive");

  const Index dim = Y0.manifold().dimension();
  const Scalar max_radius =
      opts.max_radius > 0 ? opts.max_radius
                          : std::sqrt(static_cast<Scalar>(std::max<Index>(dim, 1)));
  Scalar radius = opts.initial_radius > 0 ? opts.initial_radius : max_radius / 8;

  RtrResult res;
  auto lin = std::make_unique<Linearization>(model, Y0);
  res.grad_threshold =
      opts.absolute_tol ? opts.grad_tol
                        : opts.grad_tol * std::max<Scalar>(1, lin->gradient_norm());
  res.cost_trace.push_back(lin->value());

  auto report = [&](int it, bool accepted) {
    if (opts.callback) {
      RtrProgress pr;
      pr.iteration = it;
      pr.p = Y0.p();
      pr.cost = lin->value();
      pr.grad_norm = lin->gradient_norm();
      pr.radius = radius;
      pr.accepted = accepted;
      opts.callback(pr);
    }
  };
  report(0, true);

  res.status = RtrStatus::MaxIter;
  int it = 0;
  for (; it < opts.max_outer; ++it) {
    if (lin->gradient_norm() <= res.grad_threshold) {
      res.status = RtrStatus::Converged;
      ++it;
      break;
    }
    if (radius < 1e-14 * max_radius) {
      res.status = RtrStatus::Stalled;
      ++it;
      break;
    }

    HessianOp hess = [&](const TangentVector &v) {
      ++res.hessian_products;
      return opts.fd_hessian ? riemannian_hessian_fd(*lin, v) : lin->hessian(v);
    };
    const TcgResult tcg =
        truncated_cg(lin->point(), lin->gradient(), hess, radius, opts);

    std::unique_ptr<Linearization> cand;
    try {
      cand = std::make_unique<Linearization>(model,
                                             retract(lin->point(), tcg.step));
    } catch (const NumericalError &) {
      cand.reset();
    }

    bool accept = false;
    Scalar rho = -std::numeric_limits<Scalar>::infinity();
    bool model_decreased = false;
    if (cand) {
      const Scalar f = lin->value();
      const Scalar reg =
          std::max<Scalar>(1, std::abs(f)) * std::numeric_limits<Scalar>::epsilon() * 1e3;
      const Scalar num = f - cand->value() + reg;
      const Scalar den = -inner(tcg.step, lin->gradient()) -
                         0.5 * inner(tcg.step, tcg.Hstep) + reg;
      model_decreased = den >= 0;
      rho = num / den;
      accept = model_decreased && rho > opts.rho_prime &&
               cand->value() <= f && std::isfinite(cand->value());
    }

    if (!(rho >= 0.25) || !model_decreased) {
      radius /= 4;
    } else if (rho > 0.75 && (tcg.reason == TcgReason::NegativeCurvature ||
                              tcg.reason == TcgReason::Boundary)) {
      radius = std::min(2 * radius, max_radius);
    }

    if (accept) {
      lin = std::move(cand);
      res.cost_trace.push_back(lin->value());
    }
    report(it + 1, accept);
  }

  res.iterations = it;
  res.Y = lin->point();
  res.cost = lin->value();
  res.grad_norm = lin->gradient_norm();
  return res;
}

HessianEigen min_eig_hessian(const CostModel &model, const StiefelPoint &Y,
                             Scalar tol, std::uint64_t seed) {
  const Linearization lin(model, Y);
  const Index rows = Y.matrix().rows(), cols = Y.matrix().cols();
  const Index dim = rows * cols;
  auto as_matrix = [&](const Vector &v) {
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
  };
  auto as_vector = [&](const Matrix &M) {
    return Vector(Eigen::Map<const Vector>(M.data(), dim));
  };
  LinearOp op = [&](const Vector &v) {
    return as_vector(lin.hessian(project_tangent(Y, as_matrix(v))));
  };
  LinearOp proj = [&](const Vector &v) {
    return as_vector(project_tangent(Y, as_matrix(v)));
  };
  LanczosOptions lo;
  lo.tol = tol;
  lo.seed = seed;
  lo.max_basis = std::min<Index>(dim, 160);
  const EigenPair ep = lanczos_smallest(op, dim, lo, proj);
  HessianEigen out;
  out.value = ep.value;
  out.vector = as_matrix(ep.vector);
  out.residual = ep.residual;
  out.converged = ep.converged;
  return out;
}

} // namespace bdsdp
