#pragma once

#include "bdsdp/common.h"

#include <vector>

namespace bdsdp {

struct Assignment {
  /// col[r] is the column matched to row r.
  std::vector<Index> col;
  Scalar value = 0;
  /// Another assignment reachable by swapping two rows attains the same value
  /// (within 1e-12 relative); the lowest-index solution is returned.
  bool ambiguous = false;
};

/// Square assignment maximizing sum_r W(r, col[r]) (Hungarian method).
Assignment max_weight_assignment(const Matrix &W);

} // namespace bdsdp
