#pragma once

#include "bdsdp/staircase.h"

#include <optional>
#include <utility>
#include <vector>

namespace bdsdp {

struct SyncInstance {
  BlockSpec spec;
  StiefelPoint truth; // p = d, slice i is Q_i
  SymBlockMatrix H;
  Scalar sigma = 0;
  Scalar outlier_fraction = 0;
  std::vector<std::pair<Index, Index>> outliers; // (i, j), i < j
  std::uint64_t seed = 0;

  /// C = -H / (n m).
  LinearCost linear_cost() const;
};

/// H_ij = Q_i Q_j^T + sigma N_ij for i < j. With `orthogonal_measurements`
/// each noisy block is replaced by its polar factor.
SyncInstance gen_rotation_sync(Index m, Index d, Scalar sigma, std::uint64_t seed,
                               bool orthogonal_measurements = false);

/// Permutation ground truth; a random subset of round(fraction * m(m-1)/2)
/// upper pairs carries uniformly random permutations.
SyncInstance gen_permutation_sync(Index m, Index d, Scalar outlier_fraction,
                                  std::uint64_t seed);

/// Weighted graph given by its upper-triangle edge list (0-based).
struct Edge {
  Index u;
  Index v;
  Scalar w = 1;
};

SymBlockMatrix graph_adjacency(Index n, const std::vector<Edge> &edges);

/// C = A / 4. Rejects nonzero diagonals and negative weights.
LinearCost gen_maxcut(const SymBlockMatrix &adjacency);

/// W/2 - <A/4, x x^T>, W the total edge weight.
Scalar cut_value(const SymBlockMatrix &adjacency, const Vector &x);

struct BruteForceCut {
  Scalar cut = 0;
  Vector x;
};

/// Exhaustive search over sign vectors (n <= 24).
BruteForceCut maxcut_brute_force(const SymBlockMatrix &adjacency);

/// Random +-1 hyperplane rounding of a factor, best of `trials`.
BruteForceCut maxcut_hyperplane_rounding(const SymBlockMatrix &adjacency,
                                         const StiefelPoint &Y, Index trials,
                                         std::uint64_t seed);

/// Top-d eigenvectors of H, each d x d slice projected to O(d).
StiefelPoint eig_baseline(const SymBlockMatrix &H, Index d);

struct PermutationRounding {
  StiefelPoint P;
  bool ambiguous = false;
};

/// Rounds Y_i Y_1^T to the best permutation by linear assignment.
PermutationRounding round_to_permutations(const StiefelPoint &Y);

struct RecoveryMetrics {
  Scalar block_mse = 0;
  bool perfect = false;
};

inline constexpr Scalar kPerfectRecovery = 1e-6;

/// (1/m^2) sum_ij ||X_ij - Q_i Q_j^T||_F^2 with X = estimate estimate^T.
RecoveryMetrics recovery_metrics(const StiefelPoint &estimate,
                                 const StiefelPoint &truth);

struct ContinuationStage {
  Scalar eps = 0;
  SolveReport report;
  std::optional<RecoveryMetrics> metrics;
  std::optional<RecoveryMetrics> rounded_metrics; // permutation rounding
};

struct ContinuationReport {
  std::vector<ContinuationStage> stages;
};

/// Pseudo-Huber solves for each eps in turn, each warm-started at the last.
ContinuationReport
epsilon_continuation(const SymBlockMatrix &H,
                     const std::vector<Scalar> &schedule = {1, 1e-1, 1e-2, 1e-3},
                     const StaircaseOptions &opts = {},
                     const std::optional<StiefelPoint> &truth = std::nullopt,
                     bool round_permutations = false);

struct RankSuppressionReport {
  SolveReport report;
  /// Rank of X = Y Y^T: eigenvalues above kXRankTol times the largest.
  /// Near degenerate minima Y converges only like the square root of X, so
  /// the factor-level condition cut would overcount.
  Index numerical_rank = 0;
  bool suppressed = false; // kkt and rank > d
};

inline constexpr Scalar kXRankTol = 1e-6;

RankSuppressionReport lud_rank_suppression_check(const SymBlockMatrix &H,
                                                 Scalar eps,
                                                 const StaircaseOptions &opts = {});

/// Largest singular value over all blocks of X = Y Y^T.
Scalar max_block_singular_value(const StiefelPoint &Y);

} // namespace bdsdp
