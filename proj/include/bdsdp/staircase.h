#pragma once

#include "bdsdp/certificate.h"
#include "bdsdp/faces.h"
#include "bdsdp/rtr.h"

#include <optional>
#include <string>
#include <vector>

namespace bdsdp {

struct StaircaseOptions {
  /// Explicit ranks to visit; when empty, p1, p1 + step, ... up to the cap.
  std::vector<Index> rank_schedule;
  Index p1 = 0; // 0 means d + 1
  Index step = 1;
  /// Overrides the cap derived from the convexity class.
  std::optional<Index> p_cap;
  Scalar cond_threshold = kDefaultCondThreshold;
  Scalar kkt_tol = kKktTol;
  RtrOptions rtr;
  std::uint64_t seed = 1;
  /// Escapes at a fixed rank (rank-deficient, not KKT) before giving up.
  int max_same_rank_escapes = 10;
  bool concave_postprocess = false;
  /// When a stage ends outside the KKT tolerance with a gradient above the
  /// KKT threshold, rerun RTR at the same rank to that absolute gradient
  /// tolerance before deciding to escape. A loosely converged point can show
  /// a tiny spurious negative eigenvalue of S that no escape can exploit.
  /// Capped by rtr.max_outer as well.
  bool polish = true;
  int polish_max_outer = 100;
  bool compute_face = true;
  bool hessian_check = true;
};

struct StageRecord {
  Index p = 0;
  int rtr_iterations = 0;
  RtrStatus rtr_status = RtrStatus::MaxIter;
  Scalar cost_start = 0;
  Scalar cost_end = 0;
  Scalar grad_norm = 0;
  Scalar lambda_min_S = 0;
  std::optional<Scalar> lambda_min_hess;
  Scalar cond = 0;
  Index numerical_rank = 0;
  bool escape_taken = false;
  std::string escape_mode;
  Scalar escape_t = 0;
  Scalar cost_after_escape = 0;
};

struct SolveReport {
  StiefelPoint Y;
  Index p = 0;
  Index p_cap = 0;
  std::vector<StageRecord> stages;
  bool kkt = false;
  Scalar cost = 0;
  Scalar grad_norm = 0;
  Scalar lambda_min_S = 0;
  Scalar kkt_threshold = 0;
  Index numerical_rank = 0;
  std::optional<Index> s_rank;
  std::optional<bool> strict_complementarity;
  std::optional<SdpBounds> bounds;
  std::optional<FaceReport> face;
  double wall_time = 0;
  std::uint64_t seed = 0;
  std::string message;
  std::string cost_kind;
  std::string convexity;
};

/// Largest rank the staircase visits for a cost class.
Index staircase_rank_cap(ConvexityClass c, const BlockSpec &spec);

/// Ranks visited by solve().
std::vector<Index> staircase_schedule(const CostModel &model,
                                      const StaircaseOptions &opts);

SolveReport solve(const CostModel &model, const StaircaseOptions &opts = {},
                  const std::optional<StiefelPoint> &Y0 = std::nullopt);

struct PostprocessResult {
  StiefelPoint Y;
  bool kkt = false;
  int iterations = 0;
  bool cap_reached = false;
  std::vector<Scalar> costs;
};

/// In-face rank reduction alternated with rank-deficient escapes, for
/// concave costs stuck at a full-rank non-KKT point.
PostprocessResult concave_postprocess(const CostModel &model,
                                      const StiefelPoint &Y,
                                      const StaircaseOptions &opts = {});

/// Keeps the q leading columns of U Sigma from the SVD of Y, projects each
/// slice to orthonormal rows and re-optimizes at rank q.
RtrResult round_to_rank(const CostModel &model, const StiefelPoint &Y, Index q,
                        const RtrOptions &opts = {});

} // namespace bdsdp
