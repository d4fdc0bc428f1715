#pragma once

#include "bdsdp/common.h"
#include "bdsdp/kernels.h"

#include <optional>
#include <vector>

namespace bdsdp {

/// One stored entry (0-based global indices).
struct Triplet {
  Index row;
  Index col;
  Scalar value;
};

enum class Storage { Auto, Dense, Sparse };

/// Dense storage is used up to this side length when Storage::Auto is asked.
inline constexpr Index kDenseStorageLimit = 2000;

/// Symmetric n x n matrix viewed as m x m blocks of size d x d. Both
/// triangles are stored. Immutable after construction.
class SymBlockMatrix {
public:
  SymBlockMatrix() = default;

  /// Symmetrizes M by averaging with its transpose. Relative asymmetry
  /// above `asym_tol` is rejected.
  static SymBlockMatrix from_dense(const BlockSpec &spec, const Matrix &M,
                                   Storage storage = Storage::Auto,
                                   Scalar asym_tol = 1e-10);

  /// Entries of one triangle (either one); each off-diagonal entry is
  /// mirrored. Duplicate positions are summed.
  static SymBlockMatrix from_triplets(const BlockSpec &spec,
                                      const std::vector<Triplet> &entries,
                                      Storage storage = Storage::Auto);

  static SymBlockMatrix zero(const BlockSpec &spec,
                             Storage storage = Storage::Auto);
  static SymBlockMatrix identity(const BlockSpec &spec,
                                 Storage storage = Storage::Auto);

  const BlockSpec &spec() const { return spec_; }
  Index n() const { return spec_.n(); }
  bool is_sparse() const { return sparse_.has_value(); }

  Scalar operator()(Index r, Index c) const;
  /// d x d block (i, j).
  Matrix block(Index i, Index j) const;

  /// M * V.
  Matrix apply(const Matrix &V) const;
  Matrix to_dense() const;
  Scalar frobenius_norm() const;
  Index nonzeros() const;

  /// Upper-triangle entries (row <= col), row-major order, zeros skipped.
  std::vector<Triplet> upper_triplets() const;

  SymBlockMatrix scaled(Scalar alpha) const;

  const Matrix &dense() const { return dense_; }
  const SparseMatrix &sparse() const { return *sparse_; }

private:
  BlockSpec spec_;
  Matrix dense_;
  std::optional<SparseMatrix> sparse_;
};

/// Symmetrizes the diagonal d x d blocks of M and zeroes the rest.
SymBlockMatrix symblockdiag(const Matrix &M, const BlockSpec &spec);

/// Stacked (n x d) diagonal blocks of symblockdiag(M).
Matrix symblockdiag_stacked(const Matrix &M, const BlockSpec &spec);

/// Expands stacked diagonal blocks into a dense n x n block-diagonal matrix.
Matrix block_diag_to_dense(const Matrix &stacked, Index d);

/// M * V; dimension mismatch throws.
Matrix apply_sym(const SymBlockMatrix &M, const Matrix &V);

} // namespace bdsdp
