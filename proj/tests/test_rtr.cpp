#include "support.h"

#include <doctest.h>

using namespace bdsdp;
using namespace bdsdp::testing;

namespace {

/// Orthonormal basis of T_Y as columns of an (n p) x dim matrix.
Matrix tangent_basis(const StiefelPoint &Y) {
  const Index n = Y.matrix().rows(), p = Y.p(), N = n * p;
  Matrix P(N, N);
  for (Index k = 0; k < N; ++k) {
    Matrix E = Matrix::Zero(n, p);
    E.data()[k] = 1;
    const Matrix PE = project_tangent(Y, E);
    P.col(k) = Eigen::Map<const Vector>(PE.data(), N);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es((P + P.transpose()) / 2);
  std::vector<Index> keep;
  for (Index k = 0; k < N; ++k)
    if (es.eigenvalues()(k) > 0.5)
      keep.push_back(k);
  Matrix B(N, static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    B.col(static_cast<Index>(c)) = es.eigenvectors().col(keep[c]);
  return B;
}

Matrix unvec(const Vector &v, Index n, Index p) {
  return Eigen::Map<const Matrix>(v.data(), n, p);
}

/// Hessian of g in the tangent basis B.
Matrix hessian_matrix(const CostModel &f, const StiefelPoint &Y, const Matrix &B) {
  const Index n = Y.matrix().rows(), p = Y.p();
  Matrix H(B.cols(), B.cols());
  for (Index k = 0; k < B.cols(); ++k) {
    const Matrix HV = riemannian_hessian(f, Y, unvec(B.col(k), n, p));
    H.col(k) = B.transpose() * Eigen::Map<const Vector>(HV.data(), n * p);
  }
  return (H + H.transpose()) / 2;
}

/// Exact model decrease of min <g,s> + <s,Hs>/2 over ||s|| <= radius (easy case).
Scalar trust_region_oracle(const Matrix &H, const Vector &gr, Scalar radius) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  const Vector lam = es.eigenvalues();
  const Vector gq = es.eigenvectors().transpose() * gr;
  auto step_norm = [&](Scalar mu) {
    return (gq.array() / (lam.array() + mu)).matrix().norm();
  };
  auto model = [&](Scalar mu) {
    const Vector s = -(gq.array() / (lam.array() + mu)).matrix();
    return gq.dot(s) + 0.5 * s.dot(lam.cwiseProduct(s));
  };
  if (lam(0) > 0 && step_norm(0) <= radius)
    return -model(0);
  Scalar lo = std::max<Scalar>(0, -lam(0)) + 1e-14, hi = lo + 1;
  while (step_norm(hi) > radius)
    hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const Scalar mid = (lo + hi) / 2;
    (step_norm(mid) > radius ? lo : hi) = mid;
  }
  return -model(hi);
}

} // namespace

TEST_SUITE("rtr") {

TEST_CASE("critical start returns after one iteration") {
  const SyncInstance inst = gen_rotation_sync(6, 2, 0, 1);
  const RtrResult r = minimize(inst.linear_cost(), inst.truth);
  CHECK(r.status == RtrStatus::Converged);
  CHECK(r.iterations == 1);
  CHECK(r.Y.matrix() == inst.truth.matrix());
}

TEST_CASE("noiseless sync reaches the closed-form optimum") {
  const SyncInstance inst = gen_rotation_sync(10, 3, 0, 2);
  RtrOptions o;
  o.grad_tol = 1e-10;
  const RtrResult r = minimize(inst.linear_cost(),
                               random_point(ManifoldSpec(inst.spec, 4), 3), o);
  CHECK(r.status == RtrStatus::Converged);
  CHECK(std::abs(r.cost + 1) < 1e-8);
  // Accepted steps decrease the cost.
  for (std::size_t k = 1; k < r.cost_trace.size(); ++k)
    CHECK(r.cost_trace[k] <= r.cost_trace[k - 1] + 1e-15 * std::abs(r.cost_trace[k - 1]));
  CHECK(feasibility_error(r.Y.matrix(), 3) < 1e-12);
}

TEST_CASE("2x2 Max-Cut converges to -2") {
  Matrix C(2, 2);
  C << 0, -1, -1, 0;
  const LinearCost f(SymBlockMatrix::from_dense(BlockSpec(2, 1), C));
  const RtrResult r = minimize(f, random_point(ManifoldSpec(BlockSpec(2, 1), 2), 5));
  CHECK(r.cost == doctest::Approx(-2).epsilon(1e-10));
}

TEST_CASE("callback sees feasible, decreasing accepted iterates") {
  const CostZoo zoo = make_zoo(8, 2, 0.3, 7);
  for (const CostModel *f : zoo.all()) {
    std::vector<RtrProgress> seen;
    RtrOptions o;
    o.callback = [&](const RtrProgress &p) { seen.push_back(p); };
    const RtrResult r = minimize(*f, random_point(ManifoldSpec(zoo.inst.spec, 3), 8), o);
    CHECK(!seen.empty());
    Scalar last = INFINITY;
    for (const auto &p : seen)
      if (p.accepted) {
        CHECK(p.cost < last + 1e-15 * std::abs(last));
        last = p.cost;
      }
    CHECK(feasibility_error(r.Y.matrix(), 2) < 1e-12);
  }
}

TEST_CASE("finite-difference Hessian mode converges") {
  const SyncInstance inst = gen_rotation_sync(6, 2, 0.1, 9);
  RtrOptions o;
  o.fd_hessian = true;
  const RtrResult r = minimize(inst.linear_cost(), random_point(ManifoldSpec(inst.spec, 3), 9), o);
  CHECK(r.status == RtrStatus::Converged);
}

TEST_CASE("tCG: zero gradient") {
  const StiefelPoint Y = random_point(ManifoldSpec(BlockSpec(4, 2), 3), 1);
  const CostZoo zoo = make_zoo(4, 2, 0.1, 1);
  const TcgResult t = truncated_cg(zoo.linear, Y, Matrix::Zero(8, 3), 1.0);
  CHECK(t.step.norm() == 0);
  CHECK(t.reason == TcgReason::KappaTol);
}

TEST_CASE("tCG: positive-definite Hessian gives the Newton step") {
  std::mt19937_64 rng(14);
  const StiefelPoint Y = random_point(ManifoldSpec(BlockSpec(4, 2), 3), 2);
  const TangentVector grad = random_tangent(Y, rng);
  // H = 2 I on the tangent space.
  const HessianOp hess = [&](const TangentVector &v) { return TangentVector(2 * v); };
  RtrOptions o;
  o.kappa = 1e-12;
  o.theta = 1;
  const TcgResult t = truncated_cg(Y, grad, hess, 1e6, o);
  CHECK((2 * t.step + grad).norm() < 1e-10);
}

TEST_CASE("tCG: negative curvature reaches the boundary") {
  std::mt19937_64 rng(15);
  const StiefelPoint Y = random_point(ManifoldSpec(BlockSpec(4, 2), 3), 3);
  const TangentVector grad = random_tangent(Y, rng);
  const HessianOp hess = [&](const TangentVector &v) { return TangentVector(-v); };
  const TcgResult t = truncated_cg(Y, grad, hess, 0.7);
  CHECK(t.reason == TcgReason::NegativeCurvature);
  CHECK(t.step.norm() == doctest::Approx(0.7));
}

TEST_CASE("tCG decrease matches the dense trust-region oracle near a minimizer") {
  for (int k = 0; k < 12; ++k) {
    std::mt19937_64 rng(100 + k);
    const SyncInstance inst = gen_rotation_sync(3 + k % 3, 1 + k % 2, 0.3, 200 + k);
    const LinearCost f = inst.linear_cost();
    RtrOptions ro;
    ro.grad_tol = 1e-12;
    const RtrResult opt = minimize(f, random_point(ManifoldSpec(inst.spec, inst.spec.d + 1), k), ro);
    // Perturb the minimizer so the gradient is nonzero but the Hessian is PSD.
    const StiefelPoint Y = retract(opt.Y, 1e-2 * random_tangent(opt.Y, rng));
    const Matrix B = tangent_basis(Y);
    const Matrix H = hessian_matrix(f, Y, B);
    if (dense_lambda_min(H) < 0)
      continue;
    const TangentVector grad = riemannian_gradient(f, Y);
    const Index n = Y.matrix().rows(), p = Y.p();
    const Vector gb = B.transpose() * Eigen::Map<const Vector>(grad.data(), n * p);
    for (Scalar radius : {0.3 * grad.norm() / H.norm(), 10.0}) {
      RtrOptions o;
      o.kappa = 1e-12;
      const TcgResult t = truncated_cg(f, Y, grad, radius, o);
      const Scalar dec = -(inner(grad, t.step) + 0.5 * inner(t.step, t.Hstep));
      const Scalar best = trust_region_oracle(H, gb, radius);
      CAPTURE(k);
      CAPTURE(radius);
      CHECK(dec <= best * (1 + 1e-9) + 1e-14);
      CHECK(dec >= 0.99 * best);
    }
  }
}

TEST_CASE("tCG reaches the Cauchy decrease on indefinite models") {
  for (int k = 0; k < 12; ++k) {
    std::mt19937_64 rng(300 + k);
    const BlockSpec s(3, 1 + k % 2);
    const LinearCost f(random_sym(s, rng));
    const StiefelPoint Y = random_point(ManifoldSpec(s, s.d + 1), derive_seed(16, k));
    const Matrix B = tangent_basis(Y);
    const Matrix H = hessian_matrix(f, Y, B);
    const TangentVector grad = riemannian_gradient(f, Y);
    const Index n = Y.matrix().rows(), p = Y.p();
    const Vector gb = B.transpose() * Eigen::Map<const Vector>(grad.data(), n * p);
    const Scalar hnorm = Eigen::SelfAdjointEigenSolver<Matrix>(H).eigenvalues().cwiseAbs().maxCoeff();
    for (Scalar radius : {0.05, 0.5, 50.0}) {
      const TcgResult t = truncated_cg(f, Y, grad, radius);
      const Scalar dec = -(inner(grad, t.step) + 0.5 * inner(t.step, t.Hstep));
      const Scalar cauchy = 0.5 * gb.norm() * std::min(radius, gb.norm() / hnorm);
      CAPTURE(k);
      CAPTURE(radius);
      CHECK(t.step.norm() <= radius * (1 + 1e-12));
      CHECK(dec >= cauchy * (1 - 1e-12));
      CHECK(dec <= trust_region_oracle(H, gb, radius) * (1 + 1e-9) + 1e-14);
    }
  }
}

TEST_CASE("smallest Hessian eigenvalue") {
  const SyncInstance inst = gen_rotation_sync(8, 2, 0, 3);
  const LinearCost f = inst.linear_cost();
  // Strict minimizer (up to the symmetry directions).
  CHECK(min_eig_hessian(f, inst.truth).value >= -1e-10);

  // Saddle: a critical non-KKT point padded with a zero column.
  Matrix C(2, 2);
  C << 0, -1, -1, 0;
  const LinearCost mc(SymBlockMatrix::from_dense(BlockSpec(2, 1), C));
  Matrix y(2, 1);
  y << 1, -1;
  const StiefelPoint Yp = append_zero_columns(StiefelPoint(ManifoldSpec(BlockSpec(2, 1), 1), y), 2);
  const HessianEigen he = min_eig_hessian(mc, Yp);
  CHECK(he.value < 0);
  CHECK(inner(he.vector, riemannian_hessian(mc, Yp, he.vector)) < 0);

  // Dense oracle.
  for (int k = 0; k < 3; ++k) {
    const CostZoo zoo = make_zoo(4, 2, 0.3, 20 + k);
    for (const CostModel *model : zoo.all()) {
      const StiefelPoint Y = random_point(ManifoldSpec(zoo.inst.spec, 3), 30 + k);
      const Scalar want = dense_lambda_min(hessian_matrix(*model, Y, tangent_basis(Y)));
      const HessianEigen got = min_eig_hessian(*model, Y, 1e-10);
      CHECK(std::abs(got.value - want) <= 1e-8 * std::max<Scalar>(1, std::abs(want)));
    }
  }
}

} // TEST_SUITE
