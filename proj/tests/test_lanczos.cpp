#include "support.h"

#include <doctest.h>

using namespace bdsdp;
using namespace bdsdp::testing;

TEST_SUITE("lanczos") {

TEST_CASE("smallest eigenpair matches a dense solver") {
  std::mt19937_64 rng(10);
  for (Index n : {5, 40, 300}) {
    Matrix A = gaussian(n, n, rng);
    A = (A + A.transpose()).eval();
    const LinearOp op = [&](const Vector &v) { return Vector(A * v); };
    const EigenPair ep = lanczos_smallest(op, n);
    const Scalar want = dense_lambda_min(A);
    CAPTURE(n);
    CHECK(ep.converged);
    CHECK(std::abs(ep.value - want) <= 1e-8 * std::max<Scalar>(1, std::abs(want)));
    CHECK((A * ep.vector - ep.value * ep.vector).norm() <= 1e-8 * std::max<Scalar>(1, std::abs(want)));
  }
}

TEST_CASE("restarts with a small basis") {
  std::mt19937_64 rng(11);
  const Index n = 200;
  Vector diag = Vector::LinSpaced(n, 0.0, 10.0);
  diag(0) = -0.001;
  const LinearOp op = [&](const Vector &v) { return Vector(diag.cwiseProduct(v)); };
  LanczosOptions o;
  o.max_basis = 20;
  o.max_restarts = 200;
  const EigenPair ep = lanczos_smallest(op, n, o);
  CHECK(ep.converged);
  CHECK(ep.value == doctest::Approx(-0.001).epsilon(1e-8));
}

TEST_CASE("projection restricts to a subspace") {
  // Operator diag(-5, 1, 2, ...) restricted to the complement of e_0.
  const Index n = 30;
  Vector diag = Vector::LinSpaced(n, 1.0, 30.0);
  diag(0) = -5;
  const LinearOp op = [&](const Vector &v) { return Vector(diag.cwiseProduct(v)); };
  const LinearOp proj = [](const Vector &v) {
    Vector w = v;
    w(0) = 0;
    return w;
  };
  const EigenPair ep = lanczos_smallest(op, n, {}, proj);
  CHECK(ep.value == doctest::Approx(2));
}

} // TEST_SUITE
