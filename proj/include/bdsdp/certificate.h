#pragma once

#include "bdsdp/costs.h"
#include "bdsdp/lanczos.h"

#include <memory>
#include <optional>

namespace bdsdp {

/// Relative KKT tolerance: lambda_min(S) >= -tol * max(1, ||grad f||_F / sqrt(n)).
inline constexpr Scalar kKktTol = 1e-8;

/// S(X) = grad f(X) - symblockdiag(grad f(X) X) at X = Y Y^T, applied
/// matrix-free, with its smallest eigenpair and the KKT verdict.
class Certificate {
public:
  Certificate() = default;

  /// S * V.
  Matrix apply(const Matrix &V) const;
  /// Dense S (only for n <= kDenseStorageLimit).
  Matrix dense() const;

  Index n() const { return n_; }
  Index d() const { return d_; }

  Scalar lambda_min = 0;
  Vector u_min;
  /// Stacked diagonal blocks of -symblockdiag(grad f(X) X) (n x d).
  Matrix lambda_hat;
  bool kkt = false;
  /// Absolute threshold the verdict was taken against.
  Scalar threshold = 0;
  Scalar egrad_norm = 0;
  bool eig_converged = true;
  /// Full ascending spectrum, when the dense path was used.
  std::optional<Vector> spectrum;

private:
  friend Certificate build_certificate(const CostModel &, const StiefelPoint &,
                                       Scalar);
  std::shared_ptr<const CostPoint> point_;
  Index n_ = 0;
  Index d_ = 1;
};

Certificate build_certificate(const CostModel &model, const StiefelPoint &Y,
                              Scalar tol = kKktTol);

/// ||S Y||_F (equal to ||grad g(Y)|| / 2).
Scalar critical_point_residual(const CostModel &model, const StiefelPoint &Y);

struct SdpBounds {
  Scalar upper = 0;
  Scalar lower = 0;
  Scalar gap = 0;
  Scalar lambda_min = 0;
};

/// f(X) + n min(lambda_min(S), 0) <= f* <= f(X); linear costs only.
SdpBounds sdp_bounds(const CostModel &model, const StiefelPoint &Y);
SdpBounds sdp_bounds(const CostModel &model, const StiefelPoint &Y,
                     const Certificate &cert);

enum class EscapeMode { RankDeficient, Augmented };

std::string to_string(EscapeMode m);

struct EscapeDirection {
  TangentVector Ydot; // u z^T, unit norm
  Vector u;
  Vector z;
  EscapeMode mode = EscapeMode::Augmented;
  Scalar curvature = 0; // 2 u^T S u
};

/// Requires cert.lambda_min < 0 and a rank-deficient Y (for a full-rank Y
/// call append_zero_columns first; the zero column is then the kernel).
EscapeDirection escape_direction(const CostModel &model, const StiefelPoint &Y,
                                 const Certificate &cert);

/// Coefficient of t^4 in phi(t) = g(R_Y(t u z^T)) for a linear cost and
/// Y z = 0: (<C, A X A> + u^T D (3 symblockdiag(C X) - 4 C) u) / 4.
Scalar escape_quartic_coefficient(const LinearCost &C, const StiefelPoint &Y,
                                  const Vector &u);

struct EscapeStep {
  Scalar t = 0;
  Scalar L = 0;
  bool backtracked = false;
  Scalar phi0 = 0;
  Scalar phi_t = 0;
  StiefelPoint Y; // R_Y(t Ydot)
};

/// Step along u z^T from the quartic model when it is convex, otherwise by
/// Armijo backtracking from t = 1.
EscapeStep escape_step_size(const LinearCost &C, const StiefelPoint &Y,
                            const Vector &u, const Vector &z);

/// Armijo backtracking along Ydot from t = 1 (any cost).
EscapeStep escape_backtracking(const CostModel &model, const StiefelPoint &Y,
                               const TangentVector &Ydot, Scalar curvature);

/// Dispatches to escape_step_size for linear costs, backtracking otherwise.
EscapeStep escape_step(const CostModel &model, const StiefelPoint &Y,
                       const EscapeDirection &dir);

} // namespace bdsdp
