#pragma once

#include <cstdint>
#include <vector>

#include "cur/matrix.hpp"
#include "cur/random.hpp"

namespace cur {

/// Indices drawn by an adaptive sampler together with the distribution used.
struct AdaptiveSample {
  std::vector<Index> indices;
  Vector probabilities;
  bool uniform_fallback = false;
};

/// Columns drawn i.i.d. with p_i = ||b_i||^2 / ||B||_F^2, B = A - V V^+ A.
/// alpha is the admissible floor factor of the distribution and is only
/// validated: exact residual norms always satisfy it.
AdaptiveSample adaptive_cols(const DenseMatrix& a, const DenseMatrix& v, double alpha, Index c2, Rng& rng);

/// Rows drawn i.i.d. with probabilities proportional to the squared row norms of
/// B = A - A R1^+ R1.
AdaptiveSample adaptive_rows(const DenseMatrix& a, const DenseMatrix& v, const DenseMatrix& r1, Index r2, Rng& rng);

/// Column norms of B estimated from S A - (S V)(V^+ A) with S a sign sketch of
/// jlt_rows(n, 1) rows; B itself is never formed.
AdaptiveSample adaptive_cols_sparse(const SparseMatrix& a, const DenseMatrix& v, Index c2, Rng& rng);

/// Row norms of B estimated from A S^T - A (R1^+ (R1 S^T)) with S of
/// jlt_rows(m, 1) rows.
AdaptiveSample adaptive_rows_sparse(const SparseMatrix& a, const DenseMatrix& v, const DenseMatrix& r1, Index r2,
                                    Rng& rng);

/// Distribution with every entry a multiple of 1/grid, grid = 4n.
/// counts[i] / grid = q_i; q_i >= p_i / 4 and q_special >= 1/4.
struct DiscreteDistribution {
  std::vector<std::int64_t> counts;
  Index special = 0;
  std::int64_t grid = 0;

  Vector q() const;
  /// Smallest i with h < counts[0] + ... + counts[i].
  Index inverse_cdf(std::int64_t h) const;

  std::vector<std::int64_t> cumulative;
};

DiscreteDistribution discretize(const Vector& p);

/// h_{a,b}(x) = ((a x + b) mod prime) mod range, (a, b) ranging over Z_prime^2.
struct PairwiseHashFamily {
  std::uint64_t prime = 0;
  std::uint64_t range = 0;

  std::uint64_t size() const { return prime * prime; }
  std::uint64_t operator()(std::uint64_t a, std::uint64_t b, std::uint64_t x) const {
    return ((a * x + b) % prime) % range;
  }
};

/// Family over the smallest prime >= range.
PairwiseHashFamily make_hash_family(std::uint64_t range);

std::uint64_t next_prime(std::uint64_t n);

/// Result of a derandomized adaptive step.
struct DerandomizedSample {
  std::vector<Index> indices;
  double objective = 0.0;           // ||A - V V^+ A R^+ R||_F^2 for the chosen R
  std::uint64_t family_member = 0;  // a * prime + b of the winning hash function
  std::uint64_t candidates = 0;
  bool zero_residual = false;
};

/// ||A - V V^+ A R^+ R||_F^2, computed as ||A - Q_V H||^2 + ||H||^2 - ||H Q_R||^2 with
/// H = Q_V^T A and Q_V, Q_R orthonormal bases of range(V), range(R^T).
double adaptive_rows_objective(const DenseMatrix& a, const DenseMatrix& v, const DenseMatrix& r);

/// Deterministic counterpart of adaptive_rows: discretize the residual row
/// distribution, enumerate the pairwise-independent hash family, map each hash
/// through the inverse CDF and keep the candidate with the smallest objective
/// (lowest family index on ties).
DerandomizedSample adaptive_rows_d(const DenseMatrix& a, const DenseMatrix& v, const DenseMatrix& r1, Index r2);

/// adaptive_rows_d(A^T, A_k^T, C1^T, c2) on the transposed problem.
DerandomizedSample adaptive_cols_d(const DenseMatrix& a, const DenseMatrix& c1, Index c2, Index k);

}  // namespace cur
