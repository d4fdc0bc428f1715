#include "bdsdp/lanczos.h"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace bdsdp {

namespace {

Vector random_unit(Index dim, std::uint64_t seed, const LinearOp &project) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<Scalar> normal;
  Vector v(dim);
  for (Index i = 0; i < dim; ++i)
    v(i) = normal(rng);
  if (project)
    v = project(v);
  return v;
}

} // namespace

EigenPair lanczos_smallest(const LinearOp &op, Index dim,
                           const LanczosOptions &opts, const LinearOp &project,
                           const Vector *start) {
  if (dim < 1)
    throw InvalidArgument("lanczos_smallest: empty space");
  EigenPair best;
  Vector v = start ? *start : random_unit(dim, opts.seed, project);
  if (project)
    v = project(v);
  if (v.norm() == 0.0) {
    // The subspace is {0} or the start was unlucky; try a fresh vector once.
    v = random_unit(dim, opts.seed + 1, project);
    if (v.norm() == 0.0) {
      best.vector = Vector::Zero(dim);
      best.converged = true;
      return best;
    }
  }

  const Index max_basis = std::max<Index>(2, std::min(opts.max_basis, dim));
  for (Index restart = 0; restart <= opts.max_restarts; ++restart) {
    Matrix V(dim, max_basis);
    std::vector<Scalar> alpha, beta;
    V.col(0) = v / v.norm();
    Index k = 0;
    Scalar scale = 0;
    for (; k < max_basis; ++k) {
      Vector w = op(V.col(k));
      ++best.iterations;
      if (!w.allFinite())
        throw NumericalError("lanczos_smallest: operator returned non-finite values");
      if (project)
        w = project(w);
      const Scalar a = V.col(k).dot(w);
      alpha.push_back(a);
      w -= a * V.col(k);
      if (k > 0)
        w -= beta.back() * V.col(k - 1);
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass)
        w -= V.leftCols(k + 1) * (V.leftCols(k + 1).transpose() * w);
      const Scalar b = w.norm();
      scale = std::max({scale, std::abs(a), b});
      if (k + 1 == max_basis || b <= 1e-13 * std::max<Scalar>(scale, 1e-300)) {
        ++k;
        break;
      }
      beta.push_back(b);
      V.col(k + 1) = w / b;
    }

    Matrix T = Matrix::Zero(k, k);
    for (Index i = 0; i < k; ++i) {
      T(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < k)
        T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Matrix> tri(T);
    const Scalar theta = tri.eigenvalues()(0);
    Vector x = V.leftCols(k) * tri.eigenvectors().col(0);
    x /= x.norm();
    Vector Ax = op(x);
    ++best.iterations;
    if (project)
      Ax = project(Ax);
    const Scalar res = (Ax - theta * x).norm();
    best.value = theta;
    best.vector = x;
    best.residual = res;
    if (res <= opts.tol * std::max<Scalar>(1.0, std::abs(theta))) {
      best.converged = true;
      return best;
    }
    v = x;
  }
  return best;
}

} // namespace bdsdp
