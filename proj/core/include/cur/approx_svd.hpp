#pragma once

#include "cur/matrix.hpp"
#include "cur/random.hpp"

namespace cur {

enum class SvdMode { deterministic, randomized, sparse };

const char* to_string(SvdMode mode);

/// Orthonormal n x k factor Z with ||A - A Z Z^T||_F^2 <= (1 + eps) ||A - A_k||_F^2.
struct FactorZ {
  DenseMatrix z;
  SvdMode mode = SvdMode::deterministic;
  double eps = 0.0;
};

/// Exact truncated SVD (Z = V_k), so the bound holds with eps = 0.
FactorZ deterministic_svd(const DenseMatrix& a, Index k, double eps);

/// Sign sketch of width k + ceil(k / eps) on the right, orthonormalize, project,
/// keep the top-k right singular directions of the projection.
FactorZ randomized_svd(const DenseMatrix& a, Index k, double eps, Rng& rng);
FactorZ randomized_svd(const SparseMatrix& a, Index k, double eps, Rng& rng);

/// Top-k right singular vectors of W * A with W a sparse embedding of
/// dimension ceil(40 (k^2 + k) / eps^2).
FactorZ sparse_svd(const SparseMatrix& a, Index k, double eps, Rng& rng);

Index sparse_svd_dim(Index k, double eps);

}  // namespace cur
