#include "bdsdp/blockmat.h"
#include "bdsdp/symvec.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bdsdp {

void check_shape(const char *where, Index rows, Index cols, Index want_rows,
                 Index want_cols) {
  if (rows != want_rows || cols != want_cols) {
    std::ostringstream os;
    os << where << ": expected " << want_rows << "x" << want_cols << ", got "
       << rows << "x" << cols;
    throw DimensionError(os.str());
  }
}

BlockSpec::BlockSpec(Index m_, Index d_) : m(m_), d(d_) {
  if (m < 1 || d < 1)
    throw InvalidArgument("BlockSpec: m and d must be at least 1");
}

Vector svec(const Matrix &A) {
  if (A.rows() != A.cols())
    throw DimensionError("svec: matrix must be square");
  const Index p = A.rows();
  Vector v(sym_dim(p));
  for (Index l = 0; l < p; ++l) {
    for (Index k = 0; k < l; ++k)
      v(sym_index(k, l)) = std::sqrt(2.0) * 0.5 * (A(k, l) + A(l, k));
    v(sym_index(l, l)) = A(l, l);
  }
  return v;
}

Matrix smat(const Vector &a, Index p) {
  if (a.size() != sym_dim(p))
    throw DimensionError("smat: coordinate vector has the wrong length");
  Matrix A(p, p);
  for (Index l = 0; l < p; ++l) {
    for (Index k = 0; k < l; ++k)
      A(k, l) = A(l, k) = a(sym_index(k, l)) / std::sqrt(2.0);
    A(l, l) = a(sym_index(l, l));
  }
  return A;
}

namespace {

bool use_sparse(Storage storage, Index n) {
  switch (storage) {
  case Storage::Dense:
    return false;
  case Storage::Sparse:
    return true;
  case Storage::Auto:
    break;
  }
  return n > kDenseStorageLimit;
}

} // namespace

SymBlockMatrix SymBlockMatrix::from_dense(const BlockSpec &spec,
                                          const Matrix &M, Storage storage,
                                          Scalar asym_tol) {
  check_shape("SymBlockMatrix::from_dense", M.rows(), M.cols(), spec.n(),
              spec.n());
  if (!M.allFinite())
    throw NumericalError("SymBlockMatrix::from_dense: non-finite entry");
  const Scalar scale = std::max<Scalar>(M.norm(), 1e-300);
  if ((M - M.transpose()).norm() > asym_tol * scale)
    throw InvalidArgument("SymBlockMatrix::from_dense: matrix is not symmetric");

  SymBlockMatrix out;
  out.spec_ = spec;
  Matrix sym = 0.5 * (M + M.transpose());
  if (use_sparse(storage, spec.n())) {
    out.sparse_ = sym.sparseView();
    out.sparse_->makeCompressed();
  } else {
    out.dense_ = std::move(sym);
  }
  return out;
}

SymBlockMatrix SymBlockMatrix::from_triplets(const BlockSpec &spec,
                                             const std::vector<Triplet> &entries,
                                             Storage storage) {
  const Index n = spec.n();
  std::vector<Eigen::Triplet<Scalar, Index>> trips;
  trips.reserve(2 * entries.size());
  for (const auto &t : entries) {
    if (t.row < 0 || t.col < 0 || t.row >= n || t.col >= n)
      throw DimensionError("SymBlockMatrix::from_triplets: index out of range");
    if (!std::isfinite(t.value))
      throw NumericalError("SymBlockMatrix::from_triplets: non-finite value");
    trips.emplace_back(t.row, t.col, t.value);
    if (t.row != t.col)
      trips.emplace_back(t.col, t.row, t.value);
  }
  SymBlockMatrix out;
  out.spec_ = spec;
  SparseMatrix S(n, n);
  S.setFromTriplets(trips.begin(), trips.end());
  S.makeCompressed();
  if (use_sparse(storage, n))
    out.sparse_ = std::move(S);
  else
    out.dense_ = Matrix(S);
  return out;
}

SymBlockMatrix SymBlockMatrix::zero(const BlockSpec &spec, Storage storage) {
  return from_triplets(spec, {}, storage);
}

SymBlockMatrix SymBlockMatrix::identity(const BlockSpec &spec,
                                        Storage storage) {
  std::vector<Triplet> t;
  for (Index r = 0; r < spec.n(); ++r)
    t.push_back({r, r, 1.0});
  return from_triplets(spec, t, storage);
}

Scalar SymBlockMatrix::operator()(Index r, Index c) const {
  if (sparse_)
    return sparse_->coeff(r, c);
  return dense_(r, c);
}

Matrix SymBlockMatrix::block(Index i, Index j) const {
  const Index d = spec_.d;
  if (i < 0 || j < 0 || i >= spec_.m || j >= spec_.m)
    throw DimensionError("SymBlockMatrix::block: block index out of range");
  if (!sparse_)
    return dense_.block(i * d, j * d, d, d);
  Matrix B = Matrix::Zero(d, d);
  for (Index a = 0; a < d; ++a)
    for (SparseMatrix::InnerIterator it(*sparse_, i * d + a); it; ++it)
      if (it.col() >= j * d && it.col() < (j + 1) * d)
        B(a, it.col() - j * d) = it.value();
  return B;
}

Matrix SymBlockMatrix::apply(const Matrix &V) const {
  if (V.rows() != n())
    throw DimensionError("SymBlockMatrix::apply: incompatible dimensions");
  if (sparse_)
    return kernels::sparse_apply(*sparse_, V);
  return kernels::dense_apply(dense_, V);
}

Matrix SymBlockMatrix::to_dense() const {
  if (sparse_)
    return Matrix(*sparse_);
  return dense_;
}

Scalar SymBlockMatrix::frobenius_norm() const {
  if (sparse_)
    return sparse_->norm();
  return dense_.norm();
}

Index SymBlockMatrix::nonzeros() const {
  if (sparse_)
    return sparse_->nonZeros();
  return (dense_.array() != 0.0).count();
}

std::vector<Triplet> SymBlockMatrix::upper_triplets() const {
  std::vector<Triplet> out;
  if (sparse_) {
    for (Index r = 0; r < n(); ++r)
      for (SparseMatrix::InnerIterator it(*sparse_, r); it; ++it)
        if (it.col() >= r && it.value() != 0.0)
          out.push_back({r, it.col(), it.value()});
    return out;
  }
  for (Index r = 0; r < n(); ++r)
    for (Index c = r; c < n(); ++c)
      if (dense_(r, c) != 0.0)
        out.push_back({r, c, dense_(r, c)});
  return out;
}

SymBlockMatrix SymBlockMatrix::scaled(Scalar alpha) const {
  SymBlockMatrix out = *this;
  if (out.sparse_)
    *out.sparse_ *= alpha;
  else
    out.dense_ *= alpha;
  return out;
}

Matrix symblockdiag_stacked(const Matrix &M, const BlockSpec &spec) {
  check_shape("symblockdiag", M.rows(), M.cols(), spec.n(), spec.n());
  const Index d = spec.d;
  Matrix out(spec.n(), d);
  for (Index i = 0; i < spec.m; ++i) {
    const auto B = M.block(i * d, i * d, d, d);
    out.block(i * d, 0, d, d) = 0.5 * (B + B.transpose());
  }
  return out;
}

Matrix block_diag_to_dense(const Matrix &stacked, Index d) {
  const Index n = stacked.rows();
  Matrix out = Matrix::Zero(n, n);
  for (Index i = 0; i < n / d; ++i)
    out.block(i * d, i * d, d, d) = stacked.block(i * d, 0, d, d);
  return out;
}

SymBlockMatrix symblockdiag(const Matrix &M, const BlockSpec &spec) {
  const Matrix stacked = symblockdiag_stacked(M, spec);
  std::vector<Triplet> t;
  const Index d = spec.d;
  for (Index i = 0; i < spec.m; ++i)
    for (Index a = 0; a < d; ++a)
      for (Index b = a; b < d; ++b)
        if (stacked(i * d + a, b) != 0.0)
          t.push_back({i * d + a, i * d + b, stacked(i * d + a, b)});
  return SymBlockMatrix::from_triplets(spec, t);
}

Matrix apply_sym(const SymBlockMatrix &M, const Matrix &V) {
  return M.apply(V);
}

} // namespace bdsdp
