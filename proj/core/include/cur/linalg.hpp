#pragma once

#include <vector>

#include "cur/matrix.hpp"

namespace cur {

/// Thin SVD truncated to numerical rank: A = u * diag(sigma) * v^T.
struct SvdFactorization {
  DenseMatrix u;  // m x rank
  Vector sigma;   // descending, all above the rank tolerance
  DenseMatrix v;  // n x rank

  Index rank() const { return sigma.size(); }
};

/// Thin QR: A = q * r with q m x c orthonormal and r c x c upper triangular.
struct QrFactorization {
  DenseMatrix q;
  DenseMatrix r;
};

/// Leading singular triplets; sigma may contain zeros when rank(A) < k.
struct TopSingular {
  DenseMatrix u;  // m x k
  Vector sigma;   // length k, descending
  DenseMatrix v;  // n x k
};

/// Absolute cut-off below which a singular value counts as zero:
/// max(m, n) * sigma1 * 2^-45.
double rank_tolerance(Index m, Index n, double sigma1);

/// Relative pivot threshold used with column-pivoted QR, max(m, n) * 2^-45.
double qr_rank_threshold(Index m, Index n);

SvdFactorization svd(const DenseMatrix& a);

/// All min(m, n) singular values, descending.
Vector singular_values(const DenseMatrix& a);

Index numerical_rank(const DenseMatrix& a);

/// A_k from a factorization; returns the full reconstruction when k >= rank.
DenseMatrix truncate(const SvdFactorization& f, Index k);

/// Best rank-k approximation of A.
DenseMatrix best_rank_k(const DenseMatrix& a, Index k);

/// ||A - A_k||_F^2.
double tail_energy(const DenseMatrix& a, Index k);
double tail_energy(const SparseMatrix& a, Index k);

DenseMatrix pinv(const DenseMatrix& a);

QrFactorization qr(const DenseMatrix& a);

double spectral_norm(const DenseMatrix& a);

/// Orthonormal basis of range(A) with numerical-rank many columns.
DenseMatrix orthonormal_range(const DenseMatrix& a);

/// Top-k singular triplets. Small inputs use a dense divide-and-conquer SVD,
/// larger ones block subspace iteration with Rayleigh-Ritz extraction from a
/// fixed start block, so results are deterministic.
TopSingular top_singular(const DenseMatrix& a, Index k);
TopSingular top_singular(const SparseMatrix& a, Index k);
/// Subspace iteration at any size (dense SVD only if it fails to converge);
/// cheaper than a full SVD when k is small.
TopSingular top_singular_iterative(const DenseMatrix& a, Index k);

/// True when sigma_k(A) exceeds the rank tolerance.
bool has_rank_at_least(const DenseMatrix& a, Index k);
bool has_rank_at_least(const SparseMatrix& a, Index k);

/// X * R^+ without forming R^+ (R may be rank deficient or have repeated rows).
DenseMatrix right_pinv_product(const DenseMatrix& x, const DenseMatrix& r);

/// C^+ * X without forming C^+.
DenseMatrix left_pinv_product(const DenseMatrix& c, const DenseMatrix& x);

/// Exact-rank factorization V = Y * Psi with Y m x rho orthonormal and Psi rho x c
/// of full row rank. When V has full column rank Psi is c x c upper triangular.
/// Exactly repeated columns of V are factored once: repeats[j] is then the
/// class of column j (classes numbered by first occurrence), and when the
/// distinct columns have full rank Psi restricted to them is upper triangular.
struct RangeFactor {
  DenseMatrix y;
  DenseMatrix psi;
  bool full_rank = true;
  std::vector<Index> repeats;
  bool distinct_full_rank = false;

  Index rank() const { return y.cols(); }
};

RangeFactor range_factor(const DenseMatrix& v);

/// Psi^+ * X for the psi of a RangeFactor (triangular solve when square).
DenseMatrix psi_pinv_product(const RangeFactor& f, const DenseMatrix& x);

}  // namespace cur
