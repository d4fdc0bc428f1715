#include "support.h"

#include <doctest.h>

using namespace bdsdp;
using namespace bdsdp::testing;

TEST_SUITE("costs") {

TEST_CASE("value examples") {
  const BlockSpec s(4, 2);
  const StiefelPoint Y = random_point(ManifoldSpec(s, 3), 1);
  CHECK(g(LinearCost(SymBlockMatrix::zero(s)), Y) == 0);

  for (Index m : {5, 20}) {
    const SyncInstance inst = gen_rotation_sync(m, 3, 0, 2);
    CHECK(g(inst.linear_cost(), inst.truth) == doctest::Approx(-1).epsilon(1e-12));
    // X_ij = H_ij orthogonal for all pairs: every pseudo-Huber term vanishes.
    CHECK(std::abs(g(PseudoHuberCost(inst.H, 0.1), inst.truth)) < 1e-10);
    CHECK(std::abs(g(SmoothedLUDCost(inst.H, 0.1), inst.truth)) < 1e-10);
  }
}

TEST_CASE("Y-level and X-level values agree") {
  const CostZoo zoo = make_zoo(5, 2, 0.3, 3);
  const StiefelPoint Y = random_point(ManifoldSpec(zoo.inst.spec, 3), 2);
  const Matrix X = Y.matrix() * Y.matrix().transpose();
  for (const CostModel *f : zoo.all())
    CHECK(g(*f, Y) == doctest::Approx(f->value_at(X)).epsilon(1e-12));
}

TEST_CASE("X-level gradient and Hessian by finite differences") {
  std::mt19937_64 rng(12);
  const CostZoo zoo = make_zoo(4, 2, 0.3, 4);
  const StiefelPoint Y = random_point(ManifoldSpec(zoo.inst.spec, 3), 3);
  const Matrix X = Y.matrix() * Y.matrix().transpose();
  Matrix E = gaussian(8, 8, rng);
  E = ((E + E.transpose()) / 2).eval();
  const Scalar h = 1e-6;
  for (const CostModel *f : zoo.all()) {
    CAPTURE(f->kind());
    const Scalar fd = (f->value_at(X + h * E) - f->value_at(X - h * E)) / (2 * h);
    CHECK(rel_err(fd, (f->gradient_at(X).cwiseProduct(E)).sum()) < 1e-6);
    const Matrix hfd = (f->gradient_at(X + h * E) - f->gradient_at(X - h * E)) / (2 * h);
    CHECK(rel_err(hfd, f->hessian_at(X, E)) < 1e-6);
  }
}

TEST_CASE("pseudo-Huber gradient blocks") {
  const SyncInstance inst = gen_rotation_sync(4, 2, 0, 5);
  const Matrix X = inst.truth.matrix() * inst.truth.matrix().transpose();
  const Scalar eps = 0.2;
  const SymBlockMatrix G = pseudo_huber_gradient_blocks(inst.H, eps, X);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j)
      CHECK((G.block(i, j) + inst.H.block(i, j) / eps).norm() < 1e-12);

  // Zero measurement block gives a zero gradient block.
  Matrix H = inst.H.to_dense();
  H.block(0, 2, 2, 2).setZero();
  H.block(2, 0, 2, 2).setZero();
  const SymBlockMatrix G0 =
      pseudo_huber_gradient_blocks(SymBlockMatrix::from_dense(inst.H.spec(), H), eps, X);
  CHECK(G0.block(0, 1).norm() == 0);
}

TEST_CASE("Riemannian gradient and Hessian") {
  std::mt19937_64 rng(13);
  const CostZoo zoo = make_zoo(5, 2, 0.3, 6);
  const StiefelPoint Y = random_point(ManifoldSpec(zoo.inst.spec, 3), 7);

  // Linear cost: grad = Proj(2 C Y).
  const Matrix CY = zoo.linear.C().apply(Y.matrix());
  CHECK(rel_err(riemannian_gradient(zoo.linear, Y), project_tangent(Y, 2 * CY)) < 1e-12);

  for (const CostModel *f : zoo.all()) {
    CAPTURE(f->kind());
    const TangentVector grad = riemannian_gradient(*f, Y);
    CHECK(tangency_error(Y, grad) < 1e-12);
    for (int k = 0; k < 20; ++k) {
      const TangentVector V = random_tangent(Y, rng);
      const Scalar fd = (g(*f, retract(Y, 1e-6 * V)) - g(*f, Y)) / 1e-6;
      CHECK(rel_err(fd, inner(grad, V)) < 1e-4);
    }
    const TangentVector U = random_tangent(Y, rng), V = random_tangent(Y, rng);
    const TangentVector HU = riemannian_hessian(*f, Y, U), HV = riemannian_hessian(*f, Y, V);
    CHECK(tangency_error(Y, HU) < 1e-12);
    CHECK(std::abs(inner(U, HV) - inner(HU, V)) < 1e-10);
    CHECK(rel_err(fd_hessian(*f, Y, V), HV) < 1e-4);
    const Linearization lin(*f, Y);
    CHECK(rel_err(riemannian_hessian_fd(lin, V), HV) < 1e-4);
    CHECK(rel_err(lin.hessian(V), HV) < 1e-14);
    CHECK(rel_err(lin.gradient(), grad) < 1e-14);
  }
}

TEST_CASE("convexity classes") {
  const CostZoo zoo = make_zoo(3, 2, 0.1, 1);
  CHECK(zoo.linear.convexity() == ConvexityClass::Linear);
  CHECK(zoo.huber.convexity() == ConvexityClass::StronglyConcave);
  CHECK(zoo.lud.convexity() == ConvexityClass::Convex);
  CHECK(to_string(ConvexityClass::StronglyConcave) == "strongly_concave");
  CHECK_THROWS_AS(PseudoHuberCost(zoo.inst.H, 0), InvalidArgument);
}

TEST_CASE("pseudo-Huber is concave along segments in the spectrahedron") {
  const CostZoo zoo = make_zoo(4, 2, 0.5, 9);
  const StiefelPoint A = random_point(ManifoldSpec(zoo.inst.spec, 4), 1);
  const StiefelPoint B = random_point(ManifoldSpec(zoo.inst.spec, 4), 2);
  const Matrix XA = A.matrix() * A.matrix().transpose();
  const Matrix XB = B.matrix() * B.matrix().transpose();
  for (Scalar t : {0.25, 0.5, 0.75}) {
    const Scalar mid = zoo.huber.value_at((1 - t) * XA + t * XB);
    CHECK(mid >= (1 - t) * zoo.huber.value_at(XA) + t * zoo.huber.value_at(XB) - 1e-12);
    const Scalar lmid = zoo.lud.value_at((1 - t) * XA + t * XB);
    CHECK(lmid <= (1 - t) * zoo.lud.value_at(XA) + t * zoo.lud.value_at(XB) + 1e-12);
  }
}

} // TEST_SUITE
