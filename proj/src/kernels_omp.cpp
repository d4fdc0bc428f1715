#include "kernel_items.h"

#include <cstdlib>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bdsdp::kernels {

namespace {
int g_threads = 0; // 0: OpenMP default
}

void set_threads(int threads) {
  if (threads < 1)
    throw InvalidArgument("set_threads: thread count must be positive");
  g_threads = threads;
#ifdef _OPENMP
  omp_set_num_threads(threads);
#endif
}

int threads() {
#ifdef _OPENMP
  return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
  return 1;
#endif
}

void init_from_env() {
  if (const char *env = std::getenv("BDSDP_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1)
      set_threads(t);
  }
}

namespace omp {

// Small problems are not worth a parallel region.
constexpr Index kMinParallelWork = 1 << 14;

Matrix dense_apply(const Matrix &M, const Matrix &V) {
  detail::check_dense_apply(M, V);
  Matrix out(M.rows(), V.cols());
  const Index rows = M.rows();
#pragma omp parallel for schedule(static) if (rows * M.cols() * V.cols() > kMinParallelWork)
  for (Index r = 0; r < rows; ++r)
    detail::dense_apply_row(M, V, out, r);
  return out;
}

Matrix sparse_apply(const SparseMatrix &M, const Matrix &V) {
  if (M.cols() != V.rows())
    throw DimensionError("sparse_apply: incompatible dimensions");
  Matrix out(M.rows(), V.cols());
  const Index rows = M.rows();
#pragma omp parallel for schedule(dynamic, 64) if (M.nonZeros() * V.cols() > kMinParallelWork)
  for (Index r = 0; r < rows; ++r)
    detail::sparse_apply_row(M, V, out, r);
  return out;
}

Matrix outer(const Matrix &A, const Matrix &B) {
  if (A.cols() != B.cols())
    throw DimensionError("outer: column counts differ");
  Matrix out(A.rows(), B.rows());
  const Index rows = A.rows();
#pragma omp parallel for schedule(static) if (rows * B.rows() * A.cols() > kMinParallelWork)
  for (Index r = 0; r < rows; ++r)
    detail::outer_row(A, B, out, r);
  return out;
}

Matrix sym_block_products(const Matrix &A, const Matrix &B, Index d) {
  detail::check_slices(A, d, "sym_block_products");
  check_shape("sym_block_products", B.rows(), B.cols(), A.rows(), A.cols());
  Matrix out(A.rows(), d);
  const Index m = A.rows() / d;
#pragma omp parallel for schedule(static) if (A.size() * d > kMinParallelWork)
  for (Index i = 0; i < m; ++i)
    detail::sym_block_product_item(A, B, out, i, d);
  return out;
}

Matrix block_diag_apply(const Matrix &D, const Matrix &V, Index d) {
  detail::check_slices(V, d, "block_diag_apply");
  check_shape("block_diag_apply", D.rows(), D.cols(), V.rows(), d);
  Matrix out(V.rows(), V.cols());
  const Index m = V.rows() / d;
#pragma omp parallel for schedule(static) if (V.size() * d > kMinParallelWork)
  for (Index i = 0; i < m; ++i)
    detail::block_diag_apply_item(D, V, out, i, d);
  return out;
}

PolarResult polar_slices(const Matrix &M, Index d, Scalar min_sv) {
  detail::check_slices(M, d, "polar_slices");
  const Index m = M.rows() / d;
  PolarResult res;
  res.Q.resize(M.rows(), M.cols());
  std::vector<Scalar> smin(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(static) if (M.size() * M.cols() > kMinParallelWork)
  for (Index i = 0; i < m; ++i)
    smin[static_cast<std::size_t>(i)] = detail::polar_item(M, res.Q, i, d);
  res.min_singular_value = std::numeric_limits<Scalar>::infinity();
  for (Index i = 0; i < m; ++i) {
    const Scalar s = smin[static_cast<std::size_t>(i)];
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
#pragma omp parallel for schedule(dynamic, 4) if (k * Y.size() > kMinParallelWork)
  for (Index b = 0; b < k; ++b)
    detail::face_gram_column(Y, out, b, d);
  return out;
}

} // namespace omp
} // namespace bdsdp::kernels
