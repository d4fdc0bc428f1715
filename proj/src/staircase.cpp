#include "bdsdp/staircase.h"

#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace bdsdp {

Index staircase_rank_cap(ConvexityClass c, const BlockSpec &spec) {
  const Index n = spec.n(), d = spec.d;
  Index cap = n;
  switch (c) {
  case ConvexityClass::StronglyConcave:
    cap = static_cast<Index>(std::floor(p_star(spec.m, d))) + 1;
    break;
  case ConvexityClass::Concave:
  case ConvexityClass::Linear:
    cap = static_cast<Index>(std::floor(static_cast<Scalar>(d + 1) /
                                        static_cast<Scalar>(d + 3) *
                                        static_cast<Scalar>(n))) +
          1;
    break;
  default:
    break;
  }
  return std::clamp(cap, d, n);
}

std::vector<Index> staircase_schedule(const CostModel &model,
                                      const StaircaseOptions &opts) {
  const BlockSpec &spec = model.spec();
  const Index n = spec.n(), d = spec.d;
  const Index cap = std::min(
      opts.p_cap.value_or(staircase_rank_cap(model.convexity(), spec)), n);
  std::vector<Index> out;
  if (!opts.rank_schedule.empty()) {
    for (std::size_t k = 0; k < opts.rank_schedule.size(); ++k) {
      const Index p = opts.rank_schedule[k];
      if (p < d || p > n)
        throw InvalidArgument("staircase: rank schedule entry out of [d, n]");
      if (k > 0 && p <= opts.rank_schedule[k - 1])
        throw InvalidArgument("staircase: rank schedule must increase");
      if (p <= cap)
        out.push_back(p);
    }
    if (out.empty())
      throw InvalidArgument("staircase: rank schedule lies above the cap");
    return out;
  }
  if (opts.step < 1)
    throw InvalidArgument("staircase: step must be positive");
  Index p = opts.p1 > 0 ? opts.p1 : d + 1;
  if (p < d)
    throw InvalidArgument("staircase: p1 must be at least d");
  p = std::min({p, cap, n});
  for (; p <= cap; p += opts.step)
    out.push_back(p);
  if (out.back() != cap && out.back() < cap)
    out.push_back(cap);
  return out;
}

namespace {

Scalar escape_threshold(Scalar g) {
  return 1e-12 * std::max<Scalar>(1, std::abs(g));
}

void finish_report(const CostModel &model, const StaircaseOptions &opts,
                   SolveReport &rep, const Certificate &cert) {
  rep.p = rep.Y.p();
  rep.cost = g(model, rep.Y);
  rep.grad_norm = riemannian_gradient(model, rep.Y).norm();
  rep.lambda_min_S = cert.lambda_min;
  rep.kkt_threshold = cert.threshold;
  const RankInfo info = rank_deficiency(rep.Y, opts.cond_threshold);
  rep.numerical_rank = info.numerical_rank;
  if (cert.spectrum) {
    const Vector &ev = *cert.spectrum;
    const Scalar cut = std::max(cert.threshold,
                                1e-8 * std::max<Scalar>(1, ev.cwiseAbs().maxCoeff()));
    Index r = 0;
    for (Index k = 0; k < ev.size(); ++k)
      if (ev(k) > cut)
        ++r;
    rep.s_rank = r;
    rep.strict_complementarity = rep.numerical_rank + r == rep.Y.manifold().n();
  }
  if (model.convexity() == ConvexityClass::Linear)
    rep.bounds = sdp_bounds(model, rep.Y, cert);
  if (opts.compute_face && rep.numerical_rank <= kFaceDenseLimit &&
      rep.numerical_rank >= rep.Y.manifold().d()) {
    try {
      const StiefelPoint Yr = info.deficient
                                  ? compress_to_rank(rep.Y, rep.numerical_rank)
                                  : rep.Y;
      rep.face = face_dimension(Yr);
    } catch (const Error &) {
      rep.face.reset();
    }
  }
}

} // namespace

SolveReport solve(const CostModel &model, const StaircaseOptions &opts,
                  const std::optional<StiefelPoint> &Y0) {
  const auto t0 = std::chrono::steady_clock::now();
  const BlockSpec &spec = model.spec();
  std::vector<Index> schedule = staircase_schedule(model, opts);

  SolveReport rep;
  rep.seed = opts.seed;
  rep.cost_kind = model.kind();
  rep.convexity = to_string(model.convexity());
  rep.p_cap = schedule.back();

  StiefelPoint Y;
  std::size_t stage = 0;
  if (Y0) {
    if (Y0->manifold().spec != spec)
      throw DimensionError("solve: initial point and cost disagree on (m, d)");
    Y = *Y0;
    if (Y.p() > rep.p_cap)
      throw InvalidArgument("solve: initial rank exceeds the cap");
    // Continue the schedule from the first rank not below p(Y0).
    std::vector<Index> rest{Y.p()};
    for (Index p : schedule)
      if (p > Y.p())
        rest.push_back(p);
    schedule = std::move(rest);
  } else {
    Y = random_point(ManifoldSpec(spec, schedule.front()), opts.seed);
  }

  int same_rank_escapes = 0;
  Certificate cert;
  for (;;) {
    const bool last = stage + 1 == schedule.size();
    StageRecord rec;
    rec.p = Y.p();
    rec.cost_start = g(model, Y);
    const RtrResult rr = minimize(model, Y, opts.rtr);
    Y = rr.Y;
    rec.rtr_iterations = rr.iterations;
    rec.rtr_status = rr.status;
    rec.cost_end = rr.cost;
    rec.grad_norm = rr.grad_norm;

    cert = build_certificate(model, Y, opts.kkt_tol);
    if (opts.polish && !cert.kkt && rr.grad_norm > cert.threshold) {
      RtrOptions po = opts.rtr;
      po.grad_tol = cert.threshold;
      po.absolute_tol = true;
      po.max_outer = std::min(opts.polish_max_outer, opts.rtr.max_outer);
      const RtrResult pr = minimize(model, Y, po);
      rec.rtr_iterations += pr.iterations;
      if (pr.cost <= rr.cost) {
        Y = pr.Y;
        rec.rtr_status = pr.status;
        rec.cost_end = pr.cost;
        rec.grad_norm = pr.grad_norm;
        cert = build_certificate(model, Y, opts.kkt_tol);
      }
    }
    const RankInfo info = rank_deficiency(Y, opts.cond_threshold);
    rec.cond = info.cond;
    rec.numerical_rank = info.numerical_rank;
    rec.lambda_min_S = cert.lambda_min;
    if (opts.hessian_check) {
      const HessianEigen he = min_eig_hessian(model, Y, 1e-8, opts.seed);
      rec.lambda_min_hess = he.value;
    }

    if (cert.kkt) {
      rep.stages.push_back(rec);
      rep.kkt = true;
      rep.message = info.deficient ? "rank-deficient KKT point"
                                   : "full-rank KKT point";
      break;
    }

    if (info.deficient && same_rank_escapes < opts.max_same_rank_escapes) {
      // Second-order critical points that are rank deficient are KKT, so
      // this one is not second-order critical: escape at the same rank.
      const EscapeDirection dir = escape_direction(model, Y, cert);
      const EscapeStep st = escape_step(model, Y, dir);
      rec.escape_mode = to_string(dir.mode);
      rec.escape_t = st.t;
      rec.cost_after_escape = st.phi_t;
      if (st.t > 0 && st.phi0 - st.phi_t >= escape_threshold(st.phi0)) {
        rec.escape_taken = true;
        rep.stages.push_back(rec);
        Y = st.Y;
        ++same_rank_escapes;
        continue;
      }
      rep.stages.push_back(rec);
      rep.message = "escape produced no decrease at a rank-deficient point";
      break;
    }

    if (last) {
      rep.stages.push_back(rec);
      if (opts.concave_postprocess &&
          (model.convexity() == ConvexityClass::Concave ||
           model.convexity() == ConvexityClass::StronglyConcave ||
           model.convexity() == ConvexityClass::Linear)) {
        PostprocessResult pp = concave_postprocess(model, Y, opts);
        Y = pp.Y;
        rep.kkt = pp.kkt;
        rep.message = pp.kkt ? "KKT after in-face postprocessing"
                             : "postprocessing did not reach a KKT point";
        if (pp.kkt)
          cert = build_certificate(model, Y, opts.kkt_tol);
      } else {
        rep.message = info.deficient
                          ? "rank-deficient point is not KKT"
                          : "rank cap reached without a KKT point";
      }
      break;
    }

    // Full rank and not KKT: augment and escape along u e_{p+1}^T.
    const StiefelPoint Yp = append_zero_columns(Y, schedule[stage + 1]);
    const Certificate cp = build_certificate(model, Yp, opts.kkt_tol);
    const EscapeDirection dir = escape_direction(model, Yp, cp);
    const EscapeStep st = escape_step(model, Yp, dir);
    rec.escape_mode = to_string(dir.mode);
    rec.escape_t = st.t;
    rec.cost_after_escape = st.phi_t;
    rep.stages.push_back(rec);
    ++stage;
    same_rank_escapes = 0;
    if (st.t > 0 && st.phi0 - st.phi_t >= escape_threshold(st.phi0)) {
      rep.stages.back().escape_taken = true;
      Y = st.Y;
    } else {
      rep.message = "escape produced no decrease after augmentation";
      break;
    }
  }

  rep.Y = Y;
  finish_report(model, opts, rep, cert);
  rep.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

PostprocessResult concave_postprocess(const CostModel &model,
                                      const StiefelPoint &Y0,
                                      const StaircaseOptions &opts) {
  PostprocessResult out;
  out.Y = Y0;
  out.costs.push_back(g(model, Y0));
  const int cap = static_cast<int>(50 * Y0.p());
  for (; out.iterations < cap; ++out.iterations) {
    const Certificate cert = build_certificate(model, out.Y, opts.kkt_tol);
    if (cert.kkt) {
      out.kkt = true;
      return out;
    }
    const RankInfo info = rank_deficiency(out.Y, opts.cond_threshold);
    if (!info.deficient) {
      auto reduced = in_face_rank_reduction(out.Y);
      if (!reduced)
        return out;
      const Scalar c = g(model, *reduced);
      if (c > out.costs.back() + escape_threshold(out.costs.back()))
        return out;
      out.Y = *reduced;
      out.costs.push_back(c);
      continue;
    }
    const EscapeDirection dir = escape_direction(model, out.Y, cert);
    const EscapeStep st = escape_step(model, out.Y, dir);
    if (!(st.t > 0 && st.phi0 - st.phi_t >= escape_threshold(st.phi0)))
      return out;
    const RtrResult rr = minimize(model, st.Y, opts.rtr);
    out.Y = rr.Y;
    out.costs.push_back(rr.cost);
  }
  out.cap_reached = true;
  return out;
}

RtrResult round_to_rank(const CostModel &model, const StiefelPoint &Y, Index q,
                        const RtrOptions &opts) {
  const Index d = Y.manifold().d();
  if (q < d || q > Y.manifold().n())
    throw InvalidArgument("round_to_rank: need d <= q <= n");
  Eigen::JacobiSVD<Matrix> svd(Y.matrix(), Eigen::ComputeThinU);
  const Index k = std::min<Index>(q, svd.singularValues().size());
  Matrix Yq = Matrix::Zero(Y.matrix().rows(), q);
  Yq.leftCols(k) =
      svd.matrixU().leftCols(k) * svd.singularValues().head(k).asDiagonal();
  auto polar = kernels::polar_slices(Yq, d, 1e-12);
  if (polar.bad_slice >= 0) {
    std::ostringstream os;
    os << "round_to_rank: slice " << polar.bad_slice << " is rank deficient";
    throw NumericalError(os.str());
  }
  const StiefelPoint start =
      StiefelPoint::unchecked(ManifoldSpec(Y.manifold().spec, q), std::move(polar.Q));
  return minimize(model, start, opts);
}

} // namespace bdsdp
