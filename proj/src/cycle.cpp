#include "bdsdp/cycle.h"

#include "bdsdp/certificate.h"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace bdsdp {

namespace {

struct NormalForm {
  Matrix U;
  Matrix T;
};

NormalForm real_normal_form(const Matrix &P) {
  Eigen::RealSchur<Matrix> schur(P);
  if (schur.info() != Eigen::Success)
    throw NumericalError("cycle: real Schur decomposition failed");
  return {schur.matrixU(), schur.matrixT()};
}

template <typename F>
void for_each_block(const Matrix &T, F &&f) {
  const Index d = T.rows();
  for (Index k = 0; k < d;) {
    if (k + 1 < d && std::abs(T(k + 1, k)) > 0) {
      f(k, 2);
      k += 2;
    } else {
      f(k, 1);
      k += 1;
    }
  }
}

Scalar block_angle(const Matrix &T, Index k) {
  // Standardized 2x2 block [[a, b], [c, a]] of a rotation.
  const Scalar s = (T(k + 1, k) - T(k, k + 1)) / 2;
  const Scalar c = (T(k, k) + T(k + 1, k + 1)) / 2;
  return std::atan2(s, c);
}

Matrix random_rotation(Index d, std::mt19937_64 &rng) {
  std::normal_distribution<Scalar> normal;
  Matrix G(d, d);
  for (Index r = 0; r < d; ++r)
    for (Index c = 0; c < d; ++c)
      G(r, c) = normal(rng);
  Eigen::JacobiSVD<Matrix> svd(G, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix Q = svd.matrixU() * svd.matrixV().transpose();
  if (Q.determinant() < 0)
    Q.row(0) *= -1;
  return Q;
}

Matrix integer_power(const Matrix &R, Index k) {
  Matrix out = Matrix::Identity(R.rows(), R.cols());
  for (Index t = 0; t < k; ++t)
    out = out * R;
  return out;
}

} // namespace

Vector orthogonal_phases(const Matrix &P) {
  const NormalForm nf = real_normal_form(P);
  std::vector<Scalar> ph;
  for_each_block(nf.T, [&](Index k, Index size) {
    if (size == 1) {
      ph.push_back(nf.T(k, k) < 0 ? std::numbers::pi : 0.0);
    } else {
      const Scalar a = std::abs(block_angle(nf.T, k));
      ph.push_back(a);
      ph.push_back(a);
    }
  });
  std::sort(ph.begin(), ph.end());
  return Eigen::Map<const Vector>(ph.data(), static_cast<Index>(ph.size()));
}

Matrix matrix_root(const Matrix &P, Index m) {
  const Index d = P.rows();
  check_shape("matrix_root", P.rows(), P.cols(), d, d);
  if (m < 1)
    throw InvalidArgument("matrix_root: m must be positive");
  if ((P.transpose() * P - Matrix::Identity(d, d)).norm() > 1e-10)
    throw InvalidArgument("matrix_root: P is not orthogonal");
  const NormalForm nf = real_normal_form(P);
  Matrix Troot = Matrix::Zero(d, d);
  for_each_block(nf.T, [&](Index k, Index size) {
    if (size == 1) {
      if (nf.T(k, k) < 0)
        throw UnsolvableError("matrix_root: P has eigenvalue -1");
      Troot(k, k) = 1;
      return;
    }
    const Scalar a = block_angle(nf.T, k);
    if (std::numbers::pi - std::abs(a) <= kCyclePhaseTol)
      throw UnsolvableError("matrix_root: P has eigenvalue -1");
    const Scalar r = a / static_cast<Scalar>(m);
    Troot(k, k) = std::cos(r);
    Troot(k, k + 1) = -std::sin(r);
    Troot(k + 1, k) = std::sin(r);
    Troot(k + 1, k + 1) = std::cos(r);
  });
  Matrix R = nf.U * Troot * nf.U.transpose();
  if ((integer_power(R, m) - P).norm() > 1e-10 * std::max<Scalar>(1, static_cast<Scalar>(m)))
    throw NumericalError("matrix_root: root check failed");
  return R;
}

CycleInstance make_cycle_instance(std::vector<Matrix> H) {
  const Index m = static_cast<Index>(H.size());
  if (m < 3)
    throw InvalidArgument("cycle: need m >= 3");
  const Index d = H.front().rows();
  CycleInstance inst;
  inst.m = m;
  inst.d = d;
  inst.P = Matrix::Identity(d, d);
  for (const Matrix &B : H) {
    check_shape("cycle measurement", B.rows(), B.cols(), d, d);
    if ((B.transpose() * B - Matrix::Identity(d, d)).norm() > 1e-12)
      throw InvalidArgument("cycle: measurement is not orthogonal");
    inst.P = inst.P * B;
  }
  inst.H = std::move(H);
  inst.phases = orthogonal_phases(inst.P);
  return inst;
}

CycleInstance random_cycle(Index m, Index d, std::uint64_t seed, bool solvable) {
  if (m < 3 || d < 1)
    throw InvalidArgument("random_cycle: need m >= 3 and d >= 1");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Matrix> H;
    for (Index i = 0; i < m; ++i) {
      if (d == 1) {
        Matrix s(1, 1);
        s(0, 0) = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
        H.push_back(s);
      } else {
        H.push_back(random_rotation(d, rng));
      }
    }
    CycleInstance inst = make_cycle_instance(std::move(H));
    if (!solvable)
      return inst;
    if (std::numbers::pi - inst.phases.maxCoeff() > 1e-6)
      return inst;
  }
  throw NumericalError("random_cycle: could not sample a solvable cycle");
}

LinearCost cycle_cost(const CycleInstance &inst) {
  const Index m = inst.m, d = inst.d;
  std::vector<Triplet> t;
  auto put = [&](Index bi, Index bj, const Matrix &B) {
    // Block (bi, bj) = -B with bi < bj in the stored upper triangle.
    for (Index r = 0; r < d; ++r)
      for (Index c = 0; c < d; ++c)
        if (B(r, c) != 0)
          t.push_back({bi * d + r, bj * d + c, -B(r, c)});
  };
  for (Index i = 0; i + 1 < m; ++i)
    put(i, i + 1, inst.H[static_cast<std::size_t>(i)]);
  // Block (m, 1) = -H_{m,1}, so block (1, m) = -H_{m,1}^T.
  put(0, m - 1, inst.H.back().transpose());
  return LinearCost(SymBlockMatrix::from_triplets(BlockSpec(m, d), t));
}

CycleSolution closed_form_solution(const CycleInstance &inst) {
  const Index m = inst.m, d = inst.d;
  CycleSolution sol;
  sol.R = matrix_root(inst.P, m);
  sol.Q.assign(static_cast<std::size_t>(m), Matrix());
  sol.Q.back() = inst.H.back();
  for (Index i = m - 2; i >= 0; --i)
    sol.Q[static_cast<std::size_t>(i)] =
        inst.H[static_cast<std::size_t>(i)] * sol.Q[static_cast<std::size_t>(i + 1)];
  Matrix Y(m * d, d);
  Matrix Rk = Matrix::Identity(d, d);
  for (Index i = 0; i < m; ++i) {
    Rk = Rk * sol.R; // R^{i+1}, 1-based power
    Y.block(i * d, 0, d, d) = sol.Q[static_cast<std::size_t>(i)] * Rk;
  }
  sol.Y = StiefelPoint(ManifoldSpec(BlockSpec(m, d), d), Y, 1e-9);
  sol.X = Y * Y.transpose();
  return sol;
}

CycleSpectrum certificate_spectrum(const CycleInstance &inst,
                                   const CycleSolution &sol) {
  const LinearCost cost = cycle_cost(inst);
  const Certificate cert = build_certificate(cost, sol.Y);
  CycleSpectrum out;
  out.numeric = cert.dense().selfadjointView<Eigen::Lower>().eigenvalues();
  out.lambda_min = out.numeric(0);
  for (Index k = 0; k < out.numeric.size(); ++k)
    if (std::abs(out.numeric(k)) <= 1e-9)
      ++out.zero_count;
  const Scalar m = static_cast<Scalar>(inst.m);
  out.floor = std::numeric_limits<Scalar>::infinity();
  for (Index k = 0; k < inst.phases.size(); ++k) {
    Vector lam(inst.m - 1);
    for (Index j = 1; j < inst.m; ++j)
      lam(j - 1) = 2 * (std::cos(inst.phases(k) / m) -
                        std::cos(static_cast<Scalar>(j) * std::numbers::pi / m));
    out.floor = std::min(out.floor, lam.minCoeff());
    out.analytic.push_back(std::move(lam));
  }
  return out;
}

} // namespace bdsdp
