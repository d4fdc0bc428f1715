#include "bdsdp/assignment.h"

#include <cmath>
#include <limits>

namespace bdsdp {

Assignment max_weight_assignment(const Matrix &W) {
  const Index n = W.rows();
  if (W.cols() != n)
    throw DimensionError("max_weight_assignment: square matrix required");
  if (!W.allFinite())
    throw NumericalError("max_weight_assignment: non-finite weights");
  Assignment out;
  if (n == 0)
    return out;

  // Shortest augmenting path version with potentials, 1-based internally.
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  std::vector<Scalar> u(n + 1, 0), v(n + 1, 0);
  std::vector<Index> match(n + 1, 0), way(n + 1, 0);
  for (Index i = 1; i <= n; ++i) {
    match[0] = i;
    Index j0 = 0;
    std::vector<Scalar> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const Index i0 = match[j0];
      Scalar delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[j])
          continue;
        const Scalar cur = -W(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const Index j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  out.col.assign(static_cast<std::size_t>(n), 0);
  for (Index j = 1; j <= n; ++j)
    out.col[static_cast<std::size_t>(match[j] - 1)] = j - 1;
  for (Index r = 0; r < n; ++r)
    out.value += W(r, out.col[static_cast<std::size_t>(r)]);

  const Scalar tol = 1e-12 * std::max<Scalar>(1, W.cwiseAbs().maxCoeff());
  for (Index a = 0; a < n && !out.ambiguous; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      const Index ca = out.col[static_cast<std::size_t>(a)];
      const Index cb = out.col[static_cast<std::size_t>(b)];
      const Scalar swap = W(a, cb) + W(b, ca) - W(a, ca) - W(b, cb);
      if (std::abs(swap) <= tol) {
        out.ambiguous = true;
        break;
      }
    }
  }
  return out;
}

} // namespace bdsdp
