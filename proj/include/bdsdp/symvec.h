#pragma once

#include "bdsdp/common.h"

namespace bdsdp {

// Coordinates of symmetric p x p matrices in the orthonormal basis
// {E_kk} U {(E_kl + E_lk)/sqrt(2) : k < l}, ordered column by column over
// the upper triangle: (0,0), (0,1), (1,1), (0,2), (1,2), (2,2), ...

inline Index sym_dim(Index p) { return p * (p + 1) / 2; }

/// Position of basis element (k, l), k <= l.
inline Index sym_index(Index k, Index l) { return l * (l + 1) / 2 + k; }

Vector svec(const Matrix &A);
Matrix smat(const Vector &a, Index p);

} // namespace bdsdp
