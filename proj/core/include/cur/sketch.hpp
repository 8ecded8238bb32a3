#pragma once

#include <cstdint>
#include <vector>

#include "cur/matrix.hpp"
#include "cur/random.hpp"

namespace cur {

/// Sparse subspace embedding W (xi x n): column i holds sign[i] in row bucket[i].
/// Kept implicit; never densified.
struct SparseEmbedding {
  Index target_dim = 0;
  Index source_dim = 0;
  std::vector<Index> bucket;
  std::vector<std::int8_t> sign;
};

SparseEmbedding make_sse(Index n, Index xi, Rng& rng);

/// Embedding dimension for subspace-embedding use, ceil(40 rho^2 / eps^2).
Index sse_subspace_dim(Index rho, double eps);

/// Embedding dimension for Frobenius-norm-only use, ceil(40 / eps^2).
Index sse_frobenius_dim(double eps);

/// W * A (xi x A.cols). Each stored entry of A is read once.
DenseMatrix apply_sse(const SparseEmbedding& w, const DenseMatrix& a);
DenseMatrix apply_sse(const SparseEmbedding& w, const SparseMatrix& a);

/// X * W^T (X.rows x xi).
DenseMatrix apply_sse_right(const DenseMatrix& x, const SparseEmbedding& w);
DenseMatrix apply_sse_right(const SparseMatrix& x, const SparseEmbedding& w);

/// Sorted list of buckets that receive at least one source index.
std::vector<Index> occupied_buckets(const SparseEmbedding& w);

/// Same products restricted to occupied buckets. The dropped rows (columns) of
/// W*A (X*W^T) are identically zero, so Gram matrices, norms and products are
/// unchanged while memory stays bounded by min(xi, n).
DenseMatrix apply_sse_compact(const SparseEmbedding& w, const DenseMatrix& a);
DenseMatrix apply_sse_compact(const SparseEmbedding& w, const SparseMatrix& a);
DenseMatrix apply_sse_right_compact(const DenseMatrix& x, const SparseEmbedding& w);
DenseMatrix apply_sse_right_compact(const SparseMatrix& x, const SparseEmbedding& w);

/// Dense s x m matrix with i.i.d. entries +-1/sqrt(s).
struct SignSketch {
  DenseMatrix s;

  Index rows() const { return s.rows(); }
  Index cols() const { return s.cols(); }
};

SignSketch make_sign_sketch(Index s, Index m, Rng& rng);

/// Sketch size preserving n vector norms to within [1/2, 3/2] with probability
/// at least 1 - n^-beta: ceil(8 (4 + 2 beta) ln n).
Index jlt_rows(Index n, double beta);

/// S * B with S a fresh sign sketch of jlt_rows(B.cols, beta) rows; preserves
/// the column norms of B.
DenseMatrix jlt(const DenseMatrix& b, double beta, Rng& rng);

/// B * S^T with S of jlt_rows(B.rows, beta) rows; preserves the row norms of B.
DenseMatrix jlt_right(const DenseMatrix& b, double beta, Rng& rng);

}  // namespace cur
