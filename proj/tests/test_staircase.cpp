#include "support.h"

#include <doctest.h>

using namespace bdsdp;
using namespace bdsdp::testing;

TEST_SUITE("staircase") {

TEST_CASE("zero cost returns at p1") {
  const BlockSpec s(4, 2);
  const SolveReport r = solve(LinearCost(SymBlockMatrix::zero(s)));
  CHECK(r.kkt);
  CHECK(r.p == 3);
  CHECK(r.stages.size() == 1);
}

TEST_CASE("noiseless sync certifies at p = d + 1") {
  const SyncInstance inst = gen_rotation_sync(10, 3, 0, 1);
  const SolveReport r = solve(inst.linear_cost());
  CHECK(r.kkt);
  CHECK(r.p == 4);
  CHECK(r.numerical_rank == 3);
  REQUIRE(r.bounds.has_value());
  CHECK(r.bounds->gap <= 1e-8);
  CHECK(check_solution_invariants(r).ok);
}

TEST_CASE("rank caps and schedules") {
  const BlockSpec s(10, 2);
  CHECK(staircase_rank_cap(ConvexityClass::General, s) == 20);
  CHECK(staircase_rank_cap(ConvexityClass::Convex, s) == 20);
  CHECK(staircase_rank_cap(ConvexityClass::StronglyConcave, s) ==
        static_cast<Index>(std::floor(p_star(10, 2))) + 1);
  CHECK(staircase_rank_cap(ConvexityClass::Linear, s) == 20 * 3 / 5 + 1);
  const LinearCost f(SymBlockMatrix::zero(s));
  StaircaseOptions o;
  o.p1 = 4;
  o.step = 3;
  o.p_cap = 12;
  CHECK(staircase_schedule(f, o) == std::vector<Index>{4, 7, 10, 12});
  o.rank_schedule = {3, 5};
  CHECK(staircase_schedule(f, o) == std::vector<Index>{3, 5});
}

TEST_CASE("escalates from a saddle-prone start") {
  // Random dense linear costs need p > d + 1 for some seeds; every run
  // must certify within the cap.
  std::mt19937_64 rng(21);
  for (int k = 0; k < 8; ++k) {
    const BlockSpec s(8, 1);
    const LinearCost f(random_sym(s, rng));
    StaircaseOptions o;
    o.seed = k;
    const SolveReport r = solve(f, o);
    CAPTURE(k);
    CHECK(r.kkt);
    CHECK(r.p <= r.p_cap);
    CHECK(check_solution_invariants(r).ok);
    // Independent check of the certificate.
    CHECK(dense_lambda_min(dense_certificate(f, r.Y)) >= -1e-7);
    if (r.kkt && r.bounds) {
      const Scalar scale = std::max<Scalar>(1, f.C().frobenius_norm() / std::sqrt(8.0));
      CHECK(r.bounds->gap <= 10 * kKktTol * 8 * scale);
    }
  }
}

TEST_CASE("solution is invariant under a right rotation of Y0") {
  std::mt19937_64 rng(22);
  const SyncInstance inst = gen_rotation_sync(12, 2, 0.4, 3);
  const StiefelPoint Y0 = random_point(ManifoldSpec(inst.spec, 3), 5);
  const Matrix Q = Eigen::HouseholderQR<Matrix>(gaussian(3, 3, rng)).householderQ();
  StaircaseOptions o;
  o.rtr.grad_tol = 1e-10;
  const SolveReport a = solve(inst.linear_cost(), o, Y0);
  const SolveReport b = solve(inst.linear_cost(), o,
                              StiefelPoint(Y0.manifold(), Y0.matrix() * Q));
  CHECK(std::abs(a.cost - b.cost) < 1e-8);
}

TEST_CASE("initial points are validated") {
  const SyncInstance inst = gen_rotation_sync(5, 2, 0, 1);
  CHECK_THROWS_AS(solve(inst.linear_cost(), {},
                        random_point(ManifoldSpec(BlockSpec(4, 2), 3), 1)),
                  DimensionError);
}

TEST_CASE("concave postprocess") {
  // Already KKT: unchanged.
  const SyncInstance inst = gen_rotation_sync(5, 2, 0, 2);
  const PseudoHuberCost f(inst.H, 0.1);
  const PostprocessResult same = concave_postprocess(f, inst.truth);
  CHECK(same.kkt);
  CHECK(same.Y.matrix() == inst.truth.matrix());

  // The e1,e2,e1 face with a linear cost that is constant on it.
  Matrix y(3, 2);
  y << 1, 0, 0, 1, 1, 0;
  const StiefelPoint Y(ManifoldSpec(BlockSpec(3, 1), 2), y);
  Matrix C = Matrix::Zero(3, 3);
  C(0, 2) = C(2, 0) = 1;
  const LinearCost lin(SymBlockMatrix::from_dense(BlockSpec(3, 1), C));
  CHECK(critical_point_residual(lin, Y) < 1e-15);
  CHECK_FALSE(build_certificate(lin, Y).kkt);
  const PostprocessResult r = concave_postprocess(lin, Y);
  REQUIRE(r.costs.size() >= 3);
  // In-face move keeps the cost, the escape then lowers it to the optimum.
  CHECK(r.costs[1] == doctest::Approx(r.costs[0]));
  CHECK(r.kkt);
  CHECK(r.costs.back() == doctest::Approx(-2));
  CHECK(feasibility_error(r.Y.matrix(), 1) < 1e-10);
  for (std::size_t k = 1; k < r.costs.size(); ++k)
    CHECK(r.costs[k] <= r.costs[k - 1] + 1e-12);
}

TEST_CASE("round_to_rank") {
  const SyncInstance inst = gen_rotation_sync(8, 2, 0, 3);
  const LinearCost f = inst.linear_cost();
  const SolveReport rep = solve(f);
  REQUIRE(rep.kkt);
  // Already rank q: X unchanged.
  const RtrResult same = round_to_rank(f, rep.Y, 2);
  const Matrix X = rep.Y.matrix() * rep.Y.matrix().transpose();
  CHECK((same.Y.matrix() * same.Y.matrix().transpose() - X).norm() <= 1e-8);
  // Blocks of a rank-d solution are orthogonal.
  for (Index i = 0; i < 8; ++i)
    for (Index j = 0; j < 8; ++j) {
      const Matrix Xij = same.Y.slice(i) * same.Y.slice(j).transpose();
      Eigen::JacobiSVD<Matrix> svd(Xij);
      CHECK(std::abs(svd.singularValues()(0) - 1) < 1e-8);
      CHECK(std::abs(svd.singularValues()(1) - 1) < 1e-8);
    }
  for (std::size_t k = 1; k < same.cost_trace.size(); ++k)
    CHECK(same.cost_trace[k] <= same.cost_trace[k - 1] + 1e-15);
}

TEST_CASE("rank-deficient KKT implies the certificate threshold") {
  for (int k = 0; k < 5; ++k) {
    const SyncInstance inst = gen_rotation_sync(15, 2, 0.5, 80 + k);
    const SolveReport r = solve(inst.linear_cost());
    if (r.kkt && rank_deficiency(r.Y).deficient)
      CHECK(r.lambda_min_S >= -r.kkt_threshold);
  }
}

TEST_CASE("robust costs") {
  const SyncInstance inst = gen_permutation_sync(10, 3, 0.3, 4);
  const SolveReport ph = solve(PseudoHuberCost(inst.H, 0.1));
  CHECK(ph.p <= ph.p_cap);
  CHECK(check_solution_invariants(ph).ok);
  const SolveReport lud = solve(SmoothedLUDCost(inst.H, 0.1));
  CHECK(lud.kkt);
  CHECK(check_solution_invariants(lud).ok);
}

} // TEST_SUITE
