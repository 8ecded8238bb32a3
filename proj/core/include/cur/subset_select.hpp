#pragma once

#include <vector>

#include "cur/matrix.hpp"
#include "cur/random.hpp"

namespace cur {

/// r draws with replacement: Omega has a single 1 in row indices[j] of column j,
/// D is diagonal with scale[j] = 1 / sqrt(p[indices[j]] * r).
struct SamplingPair {
  std::vector<Index> indices;
  Vector scale;
  Vector probabilities;

  Index size() const { return static_cast<Index>(indices.size()); }
  /// Omega * D as an explicit n x r matrix.
  DenseMatrix matrix(Index n) const;
};

/// Sampling probabilities proportional to the squared row norms of X.
Vector row_norm_distribution(const DenseMatrix& x);

SamplingPair rand_sampling(const DenseMatrix& x, Index r, double beta, Rng& rng);

/// Caller supplied distribution; must sum to one and satisfy
/// p_i >= beta * ||x_i||^2 / ||X||_F^2.
SamplingPair rand_sampling(const DenseMatrix& x, Index r, double beta, const Vector& p, Rng& rng);

/// Sparse nonnegative reweighting s with at most r nonzeros. Step tau of the
/// greedy construction picked row picks[tau] with (rescaled) weight
/// step_weights[tau]; weights aggregates them per row.
struct WeightedSelection {
  Vector weights;
  std::vector<Index> picks;
  std::vector<double> step_weights;

  Index size() const { return static_cast<Index>(picks.size()); }
  /// n x r matrix S whose column tau is sqrt(step_weights[tau]) e_{picks[tau]},
  /// so that V^T S S^T V = sum_i s_i v_i v_i^T.
  DenseMatrix matrix() const;
  Index nonzeros() const;
};

/// Deterministic dual-set spectral-Frobenius sparsification. Rows of V (n x k,
/// orthonormal columns) and A (n x l). Guarantees
/// sigma_k(V^T S) >= 1 - sqrt(k / r) and ||A^T S||_F^2 <= ||A||_F^2.
WeightedSelection bss_sampling(const DenseMatrix& v, const DenseMatrix& a, Index r);

/// bss_sampling(V, A W^T, r) with W a sparse embedding of dimension
/// ceil(40 n^2 / eps^2) acting on the columns of A.
WeightedSelection bss_sampling_sparse(const DenseMatrix& v, const DenseMatrix& a, Index r, double eps, Rng& rng);

Index bss_sparse_dim(Index n, double eps);

}  // namespace cur
