#include "bdsdp/problems.h"

#include "bdsdp/assignment.h"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace bdsdp {

LinearCost SyncInstance::linear_cost() const {
  const Scalar scale = static_cast<Scalar>(spec.n() * spec.m);
  return LinearCost(H.scaled(-1.0 / scale));
}

namespace {

void check_sync_args(Index m, Index d, const char *where) {
  if (m < 2 || d < 1)
    throw InvalidArgument(std::string(where) + ": need m >= 2 and d >= 1");
}

Matrix random_permutation(Index d, std::mt19937_64 &rng) {
  std::vector<Index> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix P = Matrix::Zero(d, d);
  for (Index r = 0; r < d; ++r)
    P(r, perm[static_cast<std::size_t>(r)]) = 1;
  return P;
}

Matrix polar(const Matrix &M) {
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

} // namespace

SyncInstance gen_rotation_sync(Index m, Index d, Scalar sigma, std::uint64_t seed,
                               bool orthogonal_measurements) {
  check_sync_args(m, d, "gen_rotation_sync");
  if (!(sigma >= 0))
    throw InvalidArgument("gen_rotation_sync: sigma must be nonnegative");
  SyncInstance inst;
  inst.spec = BlockSpec(m, d);
  inst.sigma = sigma;
  inst.seed = seed;
  inst.truth = random_point(ManifoldSpec(inst.spec, d), derive_seed(seed, 0));

  std::mt19937_64 rng(derive_seed(seed, 1));
  std::normal_distribution<Scalar> normal;
  const Index n = inst.spec.n();
  Matrix H = Matrix::Identity(n, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      Matrix B = inst.truth.slice(i) * inst.truth.slice(j).transpose();
      if (sigma > 0) {
        for (Index r = 0; r < d; ++r)
          for (Index c = 0; c < d; ++c)
            B(r, c) += sigma * normal(rng);
        if (orthogonal_measurements)
          B = polar(B);
      }
      H.block(i * d, j * d, d, d) = B;
      H.block(j * d, i * d, d, d) = B.transpose();
    }
  }
  inst.H = SymBlockMatrix::from_dense(inst.spec, H);
  return inst;
}

SyncInstance gen_permutation_sync(Index m, Index d, Scalar outlier_fraction,
                                  std::uint64_t seed) {
  check_sync_args(m, d, "gen_permutation_sync");
  if (!(outlier_fraction >= 0 && outlier_fraction <= 1))
    throw InvalidArgument("gen_permutation_sync: fraction must lie in [0, 1]");
  SyncInstance inst;
  inst.spec = BlockSpec(m, d);
  inst.outlier_fraction = outlier_fraction;
  inst.seed = seed;

  std::mt19937_64 rng(seed);
  const Index n = inst.spec.n();
  Matrix Q(n, d);
  for (Index i = 0; i < m; ++i)
    Q.block(i * d, 0, d, d) = random_permutation(d, rng);
  inst.truth = StiefelPoint(ManifoldSpec(inst.spec, d), Q);

  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j)
      pairs.emplace_back(i, j);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  const auto count = static_cast<std::size_t>(
      std::llround(outlier_fraction * static_cast<Scalar>(pairs.size())));
  inst.outliers.assign(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(inst.outliers.begin(), inst.outliers.end());

  Matrix H = Q * Q.transpose();
  for (const auto &[i, j] : inst.outliers) {
    const Matrix B = random_permutation(d, rng);
    H.block(i * d, j * d, d, d) = B;
    H.block(j * d, i * d, d, d) = B.transpose();
  }
  inst.H = SymBlockMatrix::from_dense(inst.spec, H);
  return inst;
}

SymBlockMatrix graph_adjacency(Index n, const std::vector<Edge> &edges) {
  std::vector<Triplet> t;
  for (const Edge &e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n || e.u == e.v)
      throw InvalidArgument("graph_adjacency: invalid edge");
    t.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.w});
  }
  return SymBlockMatrix::from_triplets(BlockSpec(n, 1), t);
}

LinearCost gen_maxcut(const SymBlockMatrix &adjacency) {
  if (adjacency.spec().d != 1)
    throw InvalidArgument("gen_maxcut: adjacency must have d = 1");
  for (Index i = 0; i < adjacency.n(); ++i)
    if (adjacency(i, i) != 0)
      throw InvalidArgument("gen_maxcut: nonzero diagonal");
  for (const Triplet &t : adjacency.upper_triplets())
    if (t.value < 0)
      throw InvalidArgument("gen_maxcut: negative weight");
  return LinearCost(adjacency.scaled(0.25));
}

Scalar cut_value(const SymBlockMatrix &adjacency, const Vector &x) {
  check_shape("cut_value", x.rows(), 1, adjacency.n(), 1);
  Scalar W = 0;
  for (const Triplet &t : adjacency.upper_triplets())
    W += t.value;
  const Matrix Ax = adjacency.apply(x);
  return W / 2 - 0.25 * x.dot(Ax.col(0));
}

BruteForceCut maxcut_brute_force(const SymBlockMatrix &adjacency) {
  const Index n = adjacency.n();
  if (n > 24)
    throw InvalidArgument("maxcut_brute_force: n too large");
  BruteForceCut best;
  best.cut = -std::numeric_limits<Scalar>::infinity();
  Vector x(n);
  // Fix x_0 = +1; the cut is invariant under x -> -x.
  const std::uint64_t count = n > 0 ? (1ULL << (n - 1)) : 1;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    x(0) = 1;
    for (Index k = 1; k < n; ++k)
      x(k) = (mask >> (k - 1)) & 1ULL ? -1.0 : 1.0;
    const Scalar c = cut_value(adjacency, x);
    if (c > best.cut) {
      best.cut = c;
      best.x = x;
    }
  }
  return best;
}

BruteForceCut maxcut_hyperplane_rounding(const SymBlockMatrix &adjacency,
                                         const StiefelPoint &Y, Index trials,
                                         std::uint64_t seed) {
  if (Y.manifold().n() != adjacency.n() || Y.manifold().d() != 1)
    throw DimensionError("maxcut_hyperplane_rounding: shape mismatch");
  std::mt19937_64 rng(seed);
  std::normal_distribution<Scalar> normal;
  BruteForceCut best;
  best.cut = -std::numeric_limits<Scalar>::infinity();
  for (Index t = 0; t < std::max<Index>(trials, 1); ++t) {
    Vector r(Y.p());
    for (Index k = 0; k < r.size(); ++k)
      r(k) = normal(rng);
    Vector x = (Y.matrix() * r).unaryExpr([](Scalar v) { return v >= 0 ? 1.0 : -1.0; });
    const Scalar c = cut_value(adjacency, x);
    if (c > best.cut) {
      best.cut = c;
      best.x = x;
    }
  }
  return best;
}

StiefelPoint eig_baseline(const SymBlockMatrix &H, Index d) {
  if (H.spec().d != d)
    throw DimensionError("eig_baseline: block size mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(H.to_dense());
  if (eig.info() != Eigen::Success)
    throw NumericalError("eig_baseline: eigensolver failed");
  const Matrix V = eig.eigenvectors().rightCols(d);
  auto pol = kernels::polar_slices(V, d, 0.0);
  return StiefelPoint::unchecked(ManifoldSpec(H.spec(), d), std::move(pol.Q));
}

PermutationRounding round_to_permutations(const StiefelPoint &Y) {
  const Index d = Y.manifold().d(), m = Y.manifold().m();
  if (Y.p() != d)
    throw InvalidArgument("round_to_permutations: need p = d");
  PermutationRounding out;
  Matrix P = Matrix::Zero(Y.manifold().n(), d);
  const Matrix Y1 = Y.slice(0);
  for (Index i = 0; i < m; ++i) {
    const Matrix B = Y.slice(i) * Y1.transpose();
    const Assignment a = max_weight_assignment(B);
    out.ambiguous = out.ambiguous || a.ambiguous;
    for (Index r = 0; r < d; ++r)
      P(i * d + r, a.col[static_cast<std::size_t>(r)]) = 1;
  }
  out.P = StiefelPoint(Y.manifold(), std::move(P));
  return out;
}

RecoveryMetrics recovery_metrics(const StiefelPoint &estimate,
                                 const StiefelPoint &truth) {
  if (estimate.manifold().spec != truth.manifold().spec)
    throw DimensionError("recovery_metrics: spec mismatch");
  if (truth.p() != truth.manifold().d())
    throw InvalidArgument("recovery_metrics: truth must have p = d");
  const Scalar m = static_cast<Scalar>(truth.manifold().m());
  const Matrix Xhat = kernels::outer(estimate.matrix(), estimate.matrix());
  const Matrix X = kernels::outer(truth.matrix(), truth.matrix());
  RecoveryMetrics r;
  r.block_mse = (Xhat - X).squaredNorm() / (m * m);
  r.perfect = r.block_mse < kPerfectRecovery;
  return r;
}

ContinuationReport epsilon_continuation(const SymBlockMatrix &H,
                                        const std::vector<Scalar> &schedule,
                                        const StaircaseOptions &opts,
                                        const std::optional<StiefelPoint> &truth,
                                        bool round_permutations) {
  if (schedule.empty())
    throw InvalidArgument("epsilon_continuation: empty schedule");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (!(schedule[k] > 0))
      throw InvalidArgument("epsilon_continuation: eps must be positive");
    if (k > 0 && !(schedule[k] < schedule[k - 1]))
      throw InvalidArgument("epsilon_continuation: schedule must decrease");
  }
  ContinuationReport out;
  std::optional<StiefelPoint> warm;
  for (Scalar eps : schedule) {
    const PseudoHuberCost cost(H, eps);
    ContinuationStage st;
    st.eps = eps;
    st.report = solve(cost, opts, warm);
    warm = st.report.Y;
    if (truth) {
      st.metrics = recovery_metrics(st.report.Y, *truth);
      if (round_permutations) {
        const StiefelPoint Yd =
            st.report.Y.p() == H.spec().d
                ? st.report.Y
                : round_to_rank(cost, st.report.Y, H.spec().d, opts.rtr).Y;
        st.rounded_metrics =
            recovery_metrics(round_to_permutations(Yd).P, *truth);
      }
    }
    out.stages.push_back(std::move(st));
  }
  return out;
}

RankSuppressionReport lud_rank_suppression_check(const SymBlockMatrix &H,
                                                 Scalar eps,
                                                 const StaircaseOptions &opts) {
  const SmoothedLUDCost cost(H, eps);
  RankSuppressionReport out;
  out.report = solve(cost, opts);
  const Vector sv = Eigen::JacobiSVD<Matrix>(out.report.Y.matrix()).singularValues();
  out.numerical_rank = 0;
  for (Index k = 0; k < sv.size(); ++k)
    if (sv(k) * sv(k) > kXRankTol * sv(0) * sv(0))
      ++out.numerical_rank;
  out.suppressed = out.report.kkt && out.numerical_rank > H.spec().d;
  return out;
}

Scalar max_block_singular_value(const StiefelPoint &Y) {
  const Index m = Y.manifold().m();
  Scalar best = 0;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      const Matrix B = Y.slice(i) * Y.slice(j).transpose();
      Eigen::JacobiSVD<Matrix> svd(B);
      best = std::max(best, svd.singularValues()(0));
    }
  return best;
}

} // namespace bdsdp
