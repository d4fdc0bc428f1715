#include "support.h"

#include <doctest.h>

using namespace bdsdp;
using namespace bdsdp::testing;

TEST_SUITE("blockmat") {

TEST_CASE("symblockdiag examples") {
  const BlockSpec s(3, 2);
  CHECK(symblockdiag(Matrix::Identity(6, 6), s).to_dense().isApprox(Matrix::Identity(6, 6)));

  std::mt19937_64 rng(1);
  const Matrix G = gaussian(6, 6, rng);
  CHECK(symblockdiag(G - G.transpose(), s).to_dense().norm() == 0);

  Matrix M(2, 2);
  M << 2, 5, 7, 4;
  Matrix want(2, 2);
  want << 2, 0, 0, 4;
  CHECK(symblockdiag(M, BlockSpec(2, 1)).to_dense() == want);
}

TEST_CASE("stacked diagonal blocks expand back") {
  std::mt19937_64 rng(2);
  const BlockSpec s(4, 3);
  const Matrix G = gaussian(12, 12, rng);
  const Matrix st = symblockdiag_stacked(G, s);
  CHECK(st.rows() == 12);
  CHECK(st.cols() == 3);
  CHECK((block_diag_to_dense(st, 3) - symblockdiag(G, s).to_dense()).norm() < 1e-14);
}

TEST_CASE("apply matches a triple loop, dense and sparse") {
  std::mt19937_64 rng(3);
  const BlockSpec s(5, 2);
  const SymBlockMatrix M = random_sym(s, rng);
  const Matrix V = gaussian(10, 4, rng);
  Matrix naive = Matrix::Zero(10, 4);
  for (Index i = 0; i < 10; ++i)
    for (Index j = 0; j < 4; ++j)
      for (Index k = 0; k < 10; ++k)
        naive(i, j) += M(i, k) * V(k, j);
  CHECK(rel_err(apply_sym(M, V), naive) < 1e-12);

  const SymBlockMatrix Ms = SymBlockMatrix::from_dense(s, M.to_dense(), Storage::Sparse);
  CHECK(Ms.is_sparse());
  CHECK(rel_err(apply_sym(Ms, V), naive) < 1e-12);

  CHECK(apply_sym(SymBlockMatrix::identity(s), V) == V);
  CHECK(apply_sym(SymBlockMatrix::zero(s), V).norm() == 0);
  CHECK_THROWS_AS(apply_sym(M, Matrix::Zero(9, 4)), DimensionError);
}

TEST_CASE("triplets mirror one triangle") {
  const BlockSpec s(2, 2);
  const SymBlockMatrix M =
      SymBlockMatrix::from_triplets(s, {{0, 3, 1.5}, {2, 1, -2}, {1, 1, 4}});
  CHECK(M(3, 0) == 1.5);
  CHECK(M(0, 3) == 1.5);
  CHECK(M(1, 2) == -2);
  CHECK(M(1, 1) == 4);
  CHECK(M.block(0, 1)(0, 1) == 1.5);
  const auto up = M.upper_triplets();
  CHECK(up.size() == 3);
  for (const Triplet &t : up)
    CHECK(t.row <= t.col);
}

TEST_CASE("asymmetry is rejected") {
  Matrix M = Matrix::Identity(2, 2);
  M(0, 1) = 1;
  CHECK_THROWS_AS(SymBlockMatrix::from_dense(BlockSpec(2, 1), M), InvalidArgument);
  CHECK_THROWS_AS(SymBlockMatrix::from_dense(BlockSpec(2, 2), M), DimensionError);
}

TEST_CASE("svec is an isometry") {
  std::mt19937_64 rng(4);
  for (Index p : {1, 2, 5}) {
    Matrix A = gaussian(p, p, rng), B = gaussian(p, p, rng);
    A = (A + A.transpose()).eval();
    B = (B + B.transpose()).eval();
    CHECK(svec(A).size() == sym_dim(p));
    CHECK(std::abs(svec(A).dot(svec(B)) - (A.cwiseProduct(B)).sum()) < 1e-12);
    CHECK((smat(svec(A), p) - A).norm() < 1e-14);
  }
  CHECK(sym_index(0, 0) == 0);
  CHECK(sym_index(0, 1) == 1);
  CHECK(sym_index(1, 1) == 2);
  CHECK(sym_index(0, 2) == 3);
}

} // TEST_SUITE
