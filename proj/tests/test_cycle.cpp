#include "support.h"

#include "bdsdp/cycle.h"

#include <doctest.h>

#include <algorithm>

using namespace bdsdp;
using namespace bdsdp::testing;

namespace {

Matrix rot2(Scalar a) {
  Matrix R(2, 2);
  R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return R;
}

Matrix mpow(const Matrix &A, Index k) {
  Matrix R = Matrix::Identity(A.rows(), A.cols());
  for (Index i = 0; i < k; ++i)
    R = R * A;
  return R;
}

} // namespace

TEST_SUITE("cycle") {

TEST_CASE("matrix root examples") {
  CHECK(matrix_root(Matrix::Identity(3, 3), 5).isApprox(Matrix::Identity(3, 3)));
  CHECK((matrix_root(rot2(1.2), 3) - rot2(0.4)).norm() < 1e-12);
  CHECK_THROWS_AS(matrix_root(-Matrix::Identity(1, 1), 3), UnsolvableError);
  CHECK_THROWS_AS(matrix_root(rot2(M_PI), 3), UnsolvableError);
}

TEST_CASE("roots of random orthogonal matrices") {
  std::mt19937_64 rng(27);
  for (int done = 0; done < 100; ++done) {
    const Index d = 1 + done % 4, m = 2 + done % 7;
    Matrix P;
    for (int tries = 0;; ++tries) {
      REQUIRE(tries < 100);
      P = Eigen::HouseholderQR<Matrix>(gaussian(d, d, rng)).householderQ();
      if (orthogonal_phases(P).maxCoeff() > M_PI - 1e-3)
        P.col(0) *= -1;
      if (orthogonal_phases(P).maxCoeff() <= M_PI - 1e-3)
        break;
    }
    const Matrix R = matrix_root(P, m);
    CHECK((R * R.transpose() - Matrix::Identity(d, d)).norm() < 1e-12);
    CHECK((mpow(R, m) - P).norm() < 1e-10);
  }
}

TEST_CASE("closed form: consistent cycle") {
  std::mt19937_64 rng(28);
  const Index m = 5, d = 3;
  std::vector<Matrix> Q;
  for (Index i = 0; i < m; ++i) {
    Matrix O = Eigen::HouseholderQR<Matrix>(gaussian(d, d, rng)).householderQ();
    if (O.determinant() < 0)
      O.col(0) *= -1;
    Q.push_back(O);
  }
  std::vector<Matrix> H;
  for (Index i = 0; i < m; ++i)
    H.push_back(Q[i] * Q[(i + 1) % m].transpose());
  const CycleInstance inst = make_cycle_instance(H);
  CHECK((inst.P - Matrix::Identity(d, d)).norm() < 1e-12);
  const CycleSolution sol = closed_form_solution(inst);
  CHECK(std::abs(g(cycle_cost(inst), sol.Y) - (-2.0 * m * d))  < 1e-10);
  const CycleSpectrum sp = certificate_spectrum(inst, sol);
  CHECK(sp.zero_count == d);
  CHECK(std::abs(sp.lambda_min) < 1e-10);
  // S is the block cycle Laplacian: 2 (1 - cos(2 pi k / m)), each d times.
  std::vector<Scalar> want;
  for (Index j = 0; j < m; ++j)
    for (Index k = 0; k < d; ++k)
      want.push_back(2 * (1 - std::cos(2 * M_PI * j / m)));
  std::sort(want.begin(), want.end());
  for (Index i = 0; i < m * d; ++i)
    CHECK(std::abs(sp.numeric(i) - want[i]) < 1e-9);
  // Interlacing with the tridiagonal block: lambda_j(S) <= T_j <= lambda_{j+1}(S).
  const Vector &T = sp.analytic.front();
  for (Index j = 0; j + 1 < m; ++j) {
    CHECK(sp.numeric(j * d) <= T(j) + 1e-9);
    CHECK(T(j) <= sp.numeric((j + 1) * d) + 1e-9);
  }
}

TEST_CASE("closed form: d = 1 all-plus cycle") {
  const std::vector<Matrix> H(3, Matrix::Ones(1, 1));
  const CycleSolution sol = closed_form_solution(make_cycle_instance(H));
  CHECK((sol.X - Matrix::Ones(3, 3)).norm() < 1e-14);
}

TEST_CASE("closed form: random rotations reconstruct X") {
  for (int k = 0; k < 10; ++k) {
    const CycleInstance inst = random_cycle(6, 3, 90 + k);
    const CycleSolution sol = closed_form_solution(inst);
    CHECK((sol.Y.matrix() * sol.Y.matrix().transpose() - sol.X).norm() < 1e-10);
    CHECK(feasibility_error(sol.Y.matrix(), 3) < 1e-12);
    const Matrix Pm = matrix_root(inst.P, 6);
    for (Index i = 0; i < 6; ++i)
      for (Index j = 0; j < 6; ++j) {
        Matrix want;
        if (i >= j)
          want = sol.Q[i] * mpow(Pm, i - j) * sol.Q[j].transpose();
        else
          want = sol.Q[i] * mpow(Pm.transpose(), j - i) * sol.Q[j].transpose();
        CHECK((sol.X.block(i * 3, j * 3, 3, 3) - want).norm() < 1e-10);
      }
    // Strict complementarity: rank(X) + rank(S) = n.
    const CycleSpectrum sp = certificate_spectrum(inst, sol);
    CHECK(sp.zero_count == 3);
    CHECK(sp.lambda_min >= -1e-10);
  }
}

TEST_CASE("d = 1, m = 4, theta = pi/2 analytic values") {
  // P = -1 is excluded for d = 1, so this is a d = 2 rotation by pi/2.
  const std::vector<Matrix> H{rot2(M_PI / 2), Matrix::Identity(2, 2),
                              Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  const CycleInstance inst = make_cycle_instance(H);
  const CycleSpectrum sp = certificate_spectrum(inst, closed_form_solution(inst));
  REQUIRE(!sp.analytic.empty());
  const Vector &T = sp.analytic.back();
  REQUIRE(T.size() == 3);
  for (Index j = 1; j <= 3; ++j) {
    CHECK(T(j - 1) == doctest::Approx(2 * (std::cos(M_PI / 8) - std::cos(j * M_PI / 4))));
    CHECK(T(j - 1) > 0);
  }
  CHECK(sp.numeric(2) >= sp.floor - 1e-9);
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(make_cycle_instance({Matrix::Ones(1, 1), Matrix::Ones(1, 1)}), InvalidArgument);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(make_cycle_instance({bad, Matrix::Identity(2, 2), Matrix::Identity(2, 2)}),
                  InvalidArgument);
  CHECK_THROWS_AS(closed_form_solution(make_cycle_instance(
                      {Matrix::Ones(1, 1), Matrix::Ones(1, 1), -Matrix::Ones(1, 1)})),
                  UnsolvableError);
}

} // TEST_SUITE
