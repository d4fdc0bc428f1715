#include "kernel_items.h"

#include <limits>

namespace bdsdp::kernels::serial {

Matrix dense_apply(const Matrix &M, const Matrix &V) {
  detail::check_dense_apply(M, V);
  Matrix out(M.rows(), V.cols());
  for (Index r = 0; r < M.rows(); ++r)
    detail::dense_apply_row(M, V, out, r);
  return out;
}

Matrix sparse_apply(const SparseMatrix &M, const Matrix &V) {
  if (M.cols() != V.rows())
    throw DimensionError("sparse_apply: incompatible dimensions");
  Matrix out(M.rows(), V.cols());
  for (Index r = 0; r < M.rows(); ++r)
    detail::sparse_apply_row(M, V, out, r);
  return out;
}

Matrix outer(const Matrix &A, const Matrix &B) {
  if (A.cols() != B.cols())
    throw DimensionError("outer: column counts differ");
  Matrix out(A.rows(), B.rows());
  for (Index r = 0; r < A.rows(); ++r)
    detail::outer_row(A, B, out, r);
  return out;
}

Matrix sym_block_products(const Matrix &A, const Matrix &B, Index d) {
  detail::check_slices(A, d, "sym_block_products");
  check_shape("sym_block_products", B.rows(), B.cols(), A.rows(), A.cols());
  Matrix out(A.rows(), d);
  for (Index i = 0; i < A.rows() / d; ++i)
    detail::sym_block_product_item(A, B, out, i, d);
  return out;
}

Matrix block_diag_apply(const Matrix &D, const Matrix &V, Index d) {
  detail::check_slices(V, d, "block_diag_apply");
  check_shape("block_diag_apply", D.rows(), D.cols(), V.rows(), d);
  Matrix out(V.rows(), V.cols());
  for (Index i = 0; i < V.rows() / d; ++i)
    detail::block_diag_apply_item(D, V, out, i, d);
  return out;
}

PolarResult polar_slices(const Matrix &M, Index d, Scalar min_sv) {
  detail::check_slices(M, d, "polar_slices");
  PolarResult res;
  res.Q.resize(M.rows(), M.cols());
  res.min_singular_value = std::numeric_limits<Scalar>::infinity();
  for (Index i = 0; i < M.rows() / d; ++i) {
    const Scalar s = detail::polar_item(M, res.Q, i, d);
    if (s < res.min_singular_value)
      res.min_singular_value = s;
    if (!(s >= min_sv) && res.bad_slice < 0)
      res.bad_slice = i;
  }
  return res;
}

Matrix face_gram_matrix(const Matrix &Y, Index d) {
  detail::check_slices(Y, d, "face_gram_matrix");
  const Index k = sym_dim(Y.cols());
  Matrix out(k, k);
  for (Index b = 0; b < k; ++b)
    detail::face_gram_column(Y, out, b, d);
  return out;
}

} // namespace bdsdp::kernels::serial
