#pragma once
// Oracles shared by the unit tests and the acceptance binary: finite
// differences, brute force and invariant checks. None of these call into the
// code paths they check beyond the public cost value g.

#include "bdsdp/io.h"
#include "bdsdp/problems.h"

#include <cmath>
#include <cstring>
#include <random>
#include <string>
#include <vector>

namespace bdsdp::testing {

inline Matrix gaussian(Index r, Index c, std::mt19937_64 &rng) {
  std::normal_distribution<double> nd;
  Matrix M(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i)
      M(i, j) = nd(rng);
  return M;
}

inline SymBlockMatrix random_sym(const BlockSpec &spec, std::mt19937_64 &rng) {
  const Matrix G = gaussian(spec.n(), spec.n(), rng);
  return SymBlockMatrix::from_dense(spec, (G + G.transpose()) / 2);
}

inline TangentVector random_tangent(const StiefelPoint &Y, std::mt19937_64 &rng) {
  const Matrix Z = gaussian(Y.matrix().rows(), Y.p(), rng);
  TangentVector V = project_tangent(Y, Z);
  return V / V.norm();
}

/// The three cost models on one rotation-synchronization instance.
struct CostZoo {
  SyncInstance inst;
  LinearCost linear;
  PseudoHuberCost huber;
  SmoothedLUDCost lud;
  std::vector<const CostModel *> all() const { return {&linear, &huber, &lud}; }
};

inline CostZoo make_zoo(Index m, Index d, Scalar sigma, std::uint64_t seed,
                        Scalar eps = 0.1) {
  SyncInstance inst = gen_rotation_sync(m, d, sigma, seed);
  LinearCost lin = inst.linear_cost();
  PseudoHuberCost hub(inst.H, eps);
  SmoothedLUDCost lud(inst.H, eps);
  return {std::move(inst), std::move(lin), std::move(hub), std::move(lud)};
}

/// Central difference of t -> g(R_Y(t V)) at 0.
inline Scalar fd_directional(const CostModel &f, const StiefelPoint &Y,
                             const TangentVector &V, Scalar h = 1e-6) {
  return (g(f, retract(Y, h * V)) - g(f, retract(Y, -h * V))) / (2 * h);
}

/// Central difference of t -> Proj_Y grad g(R_Y(t V)) at 0.
inline TangentVector fd_hessian(const CostModel &f, const StiefelPoint &Y,
                                const TangentVector &V, Scalar h = 1e-6) {
  const TangentVector gp = project_tangent(Y, riemannian_gradient(f, retract(Y, h * V)));
  const TangentVector gm = project_tangent(Y, riemannian_gradient(f, retract(Y, -h * V)));
  return (gp - gm) / (2 * h);
}

/// Relative error with a floor on the denominator.
inline Scalar rel_err(Scalar a, Scalar b) {
  return std::abs(a - b) / std::max<Scalar>({std::abs(a), std::abs(b), 1e-12});
}
inline Scalar rel_err(const Matrix &a, const Matrix &b) {
  return (a - b).norm() / std::max<Scalar>({a.norm(), b.norm(), 1e-12});
}

/// min over x in {-1, 1}^n of x^T C x, by enumeration (x_0 = 1 by symmetry).
inline Scalar brute_force_quadratic_min(const Matrix &C) {
  const Index n = C.rows();
  Scalar best = INFINITY;
  Vector x(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    x(0) = 1;
    for (Index k = 1; k < n; ++k)
      x(k) = (mask >> (k - 1)) & 1 ? -1.0 : 1.0;
    best = std::min(best, x.dot(C * x));
  }
  return best;
}

/// Dense smallest eigenvalue, as an independent check of the certificate.
inline Scalar dense_lambda_min(const Matrix &S) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(S, Eigen::EigenvaluesOnly)
      .eigenvalues()(0);
}

/// S(X) formed densely from the X-level gradient.
inline Matrix dense_certificate(const CostModel &f, const StiefelPoint &Y) {
  const Matrix X = Y.matrix() * Y.matrix().transpose();
  const Matrix G = f.gradient_at(X);
  return G - symblockdiag(G * X, f.spec()).to_dense();
}

struct InvariantCheck {
  bool ok = true;
  std::string what;
};

/// Output invariants every solver result must satisfy.
inline InvariantCheck check_solution_invariants(const SolveReport &rep) {
  InvariantCheck c;
  const BlockSpec &s = rep.Y.manifold().spec;
  const Matrix X = rep.Y.matrix() * rep.Y.matrix().transpose();
  auto fail = [&](const std::string &w) {
    c.ok = false;
    if (c.what.empty())
      c.what = w;
  };
  if (max_block_singular_value(rep.Y) > 1 + 1e-8)
    fail("sigma_max(X_ij) > 1");
  if (X.squaredNorm() > static_cast<Scalar>(s.m * s.m * s.d) + 1e-6)
    fail("||X||_F^2 > m^2 d");
  if (feasibility_error(rep.Y.matrix(), s.d) > 1e-10)
    fail("manifold feasibility");
  const Scalar slack = 1e-12;
  for (std::size_t k = 0; k < rep.stages.size(); ++k) {
    const StageRecord &st = rep.stages[k];
    const Scalar tol = slack * std::max<Scalar>(1, std::abs(st.cost_start));
    if (st.cost_end > st.cost_start + tol)
      fail("cost increased within a stage");
    if (st.escape_taken && st.cost_after_escape > st.cost_end + tol)
      fail("escape increased the cost");
    if (k + 1 < rep.stages.size()) {
      const Scalar prev = st.escape_taken ? st.cost_after_escape : st.cost_end;
      if (rep.stages[k + 1].cost_start > prev + tol)
        fail("cost increased between stages");
    }
  }
  return c;
}

} // namespace bdsdp::testing
