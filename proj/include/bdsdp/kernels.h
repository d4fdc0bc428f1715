#pragma once

// Data-parallel inner loops. Every kernel exists twice: a plain serial
// reference and an OpenMP version that distributes independent outputs
// (rows, slices, basis elements) across threads. Each output entry is
// computed by the same arithmetic in both versions, so results are bitwise
// identical for any thread count.
//
// Stacked block-diagonal matrices are stored as n x d: rows [i*d, (i+1)*d)
// hold the d x d block i.

#include "bdsdp/common.h"

#include <Eigen/SparseCore>

namespace bdsdp {

using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor, Index>;

namespace kernels {

/// Result of slice-wise polar factorization. `bad_slice` is -1 on success.
struct PolarResult {
  Matrix Q;
  Index bad_slice = -1;
  Scalar min_singular_value = 0;
};

namespace serial {
Matrix dense_apply(const Matrix &M, const Matrix &V);
Matrix sparse_apply(const SparseMatrix &M, const Matrix &V);
Matrix outer(const Matrix &A, const Matrix &B);
Matrix sym_block_products(const Matrix &A, const Matrix &B, Index d);
Matrix block_diag_apply(const Matrix &D, const Matrix &V, Index d);
PolarResult polar_slices(const Matrix &M, Index d, Scalar min_sv);
Matrix face_gram_matrix(const Matrix &Y, Index d);
} // namespace serial

namespace omp {
Matrix dense_apply(const Matrix &M, const Matrix &V);
Matrix sparse_apply(const SparseMatrix &M, const Matrix &V);
Matrix outer(const Matrix &A, const Matrix &B);
Matrix sym_block_products(const Matrix &A, const Matrix &B, Index d);
Matrix block_diag_apply(const Matrix &D, const Matrix &V, Index d);
PolarResult polar_slices(const Matrix &M, Index d, Scalar min_sv);
Matrix face_gram_matrix(const Matrix &Y, Index d);
} // namespace omp

/// Cap the number of OpenMP threads used by the parallel kernels.
void set_threads(int threads);
int threads();
/// Reads BDSDP_THREADS (if set) and applies it through set_threads.
void init_from_env();

// Dispatchers used by the rest of the library (OpenMP versions).

/// M * V for a dense matrix M stored symmetric (column r of M is used as
/// row r).
inline Matrix dense_apply(const Matrix &M, const Matrix &V) {
  return omp::dense_apply(M, V);
}
inline Matrix sparse_apply(const SparseMatrix &M, const Matrix &V) {
  return omp::sparse_apply(M, V);
}
/// A * B^T.
inline Matrix outer(const Matrix &A, const Matrix &B) {
  return omp::outer(A, B);
}
/// Stacked blocks sym(A_i B_i^T), i.e. symblockdiag(A B^T).
inline Matrix sym_block_products(const Matrix &A, const Matrix &B, Index d) {
  return omp::sym_block_products(A, B, d);
}
/// Slice i of the result is D_i V_i.
inline Matrix block_diag_apply(const Matrix &D, const Matrix &V, Index d) {
  return omp::block_diag_apply(D, V, d);
}
/// Nearest matrix with orthonormal rows, slice by slice (U_i V_i^T).
inline PolarResult polar_slices(const Matrix &M, Index d, Scalar min_sv) {
  return omp::polar_slices(M, d, min_sv);
}
/// Matrix of A -> Y^T symblockdiag(Y A Y^T) Y in the scaled orthonormal
/// basis of symmetric p x p matrices (see faces.h).
inline Matrix face_gram_matrix(const Matrix &Y, Index d) {
  return omp::face_gram_matrix(Y, d);
}

} // namespace kernels
} // namespace bdsdp
