#pragma once

#include "cur/linalg.hpp"
#include "cur/random.hpp"

namespace cur {

/// (Y, Psi, Delta) with V = Y Psi and Delta the top-k left singular vectors of
/// Xi = Y^T A (or its sketch Y^T A W^T). Y Delta Delta^T Y^T A is the returned
/// rank-k approximation in span(V).
struct SubspaceFactor {
  RangeFactor basis;
  DenseMatrix delta;   // rank(V) x k
  Vector sigma;        // top-k singular values of Xi
  DenseMatrix right;   // matching right singular vectors of Xi

  const DenseMatrix& y() const { return basis.y; }
  const DenseMatrix& psi() const { return basis.psi; }
  /// Y * Delta, the m x k orthonormal basis of the approximation's column space.
  DenseMatrix b() const { return basis.y * delta; }
};

SubspaceFactor best_subspace_svd(const DenseMatrix& a, const DenseMatrix& v, Index k);
SubspaceFactor best_subspace_svd(const SparseMatrix& a, const DenseMatrix& v, Index k);

/// Pi^F_{V,k}(A) = Y Delta Sigma_k V_k^T of best_subspace_svd.
DenseMatrix best_in_span(const DenseMatrix& a, const DenseMatrix& v, Index k);

/// ||A - Pi^F_{V,k}(A)||_F^2.
double best_in_span_residual(const DenseMatrix& a, const DenseMatrix& v, Index k);

/// Xi = Y^T A W^T with W a sparse embedding of dimension ceil(40 c^2 / eps^2).
SubspaceFactor approx_subspace_svd(const DenseMatrix& a, const DenseMatrix& v, Index k, double eps, Rng& rng);
SubspaceFactor approx_subspace_svd(const SparseMatrix& a, const DenseMatrix& v, Index k, double eps, Rng& rng);

/// U = C^+ (U_C U_C^T A V_R V_R^T)_k R^+, the minimum-norm minimizer of
/// ||A - C U R||_F over rank(U) <= k.
DenseMatrix rank_constrained_u(const DenseMatrix& a, const DenseMatrix& c, const DenseMatrix& r, Index k);

}  // namespace cur
