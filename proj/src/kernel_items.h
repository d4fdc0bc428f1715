#pragma once

// Per-output work items shared by the serial and OpenMP kernels. Keeping the
// arithmetic in one place is what makes the two versions bitwise identical.

#include "bdsdp/kernels.h"
#include "bdsdp/symvec.h"

#include <Eigen/SVD>

#include <cmath>

namespace bdsdp::kernels::detail {

inline void check_dense_apply(const Matrix &M, const Matrix &V) {
  if (M.rows() != M.cols() || M.cols() != V.rows())
    throw DimensionError("dense_apply: incompatible dimensions");
}

// Row r of M*V, using symmetry: column r of M is contiguous.
inline void dense_apply_row(const Matrix &M, const Matrix &V, Matrix &out,
                            Index r) {
  for (Index j = 0; j < V.cols(); ++j)
    out(r, j) = M.col(r).dot(V.col(j));
}

inline void sparse_apply_row(const SparseMatrix &M, const Matrix &V,
                             Matrix &out, Index r) {
  out.row(r).setZero();
  for (SparseMatrix::InnerIterator it(M, r); it; ++it)
    out.row(r) += it.value() * V.row(it.col());
}

// Row r of A*B^T.
inline void outer_row(const Matrix &A, const Matrix &B, Matrix &out, Index r) {
  for (Index c = 0; c < B.rows(); ++c)
    out(r, c) = A.row(r).dot(B.row(c));
}

inline void sym_block_product_item(const Matrix &A, const Matrix &B,
                                   Matrix &out, Index i, Index d) {
  const Index p = A.cols();
  Matrix P = A.block(i * d, 0, d, p) * B.block(i * d, 0, d, p).transpose();
  out.block(i * d, 0, d, d) = 0.5 * (P + P.transpose());
}

inline void block_diag_apply_item(const Matrix &D, const Matrix &V,
                                  Matrix &out, Index i, Index d) {
  out.block(i * d, 0, d, V.cols()) =
      D.block(i * d, 0, d, d) * V.block(i * d, 0, d, V.cols());
}

// Polar factor U V^T of one d x p slice, returns its smallest singular value.
inline Scalar polar_item(const Matrix &M, Matrix &out, Index i, Index d) {
  const Index p = M.cols();
  Eigen::JacobiSVD<Matrix> svd(M.block(i * d, 0, d, p),
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.block(i * d, 0, d, p) = svd.matrixU() * svd.matrixV().transpose();
  return svd.singularValues().minCoeff();
}

inline void check_slices(const Matrix &A, Index d, const char *where) {
  if (d < 1 || A.rows() % d != 0)
    throw DimensionError(std::string(where) +
                         ": row count is not a multiple of d");
}

// Column b of the face Gram matrix: svec(sum_i Y_i^T (Y_i E_b Y_i^T) Y_i).
inline void face_gram_column(const Matrix &Y, Matrix &out, Index b, Index d) {
  const Index p = Y.cols();
  const Index m = Y.rows() / d;
  // Locate basis element b = (k, l).
  Index l = 0;
  while (sym_index(0, l + 1) <= b)
    ++l;
  const Index k = b - sym_index(0, l);
  Matrix acc = Matrix::Zero(p, p);
  for (Index i = 0; i < m; ++i) {
    const auto Yi = Y.block(i * d, 0, d, p);
    // Y_i E Y_i^T for E = e_k e_l^T + e_l e_k^T (scaled).
    Matrix B(d, d);
    if (k == l) {
      B = Yi.col(k) * Yi.col(k).transpose();
    } else {
      B = (Yi.col(k) * Yi.col(l).transpose() +
           Yi.col(l) * Yi.col(k).transpose()) /
          std::sqrt(2.0);
    }
    acc.noalias() += Yi.transpose() * (B * Yi);
  }
  out.col(b) = svec(acc);
}

} // namespace bdsdp::kernels::detail
