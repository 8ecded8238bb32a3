#pragma once

#include "cur/matrix.hpp"
#include "cur/random.hpp"

namespace cur {

/// Standard normal entries.
DenseMatrix gaussian(Index m, Index n, Rng& rng);

/// G1 * G2 with Gaussian factors of inner dimension `rank`, plus noise * Gaussian.
DenseMatrix low_rank_plus_noise(Index m, Index n, Index rank, double noise, Rng& rng);

/// Each entry is nonzero with probability `density`; values standard normal.
SparseMatrix random_sparse(Index m, Index n, double density, Rng& rng);

/// Sparse matrix with a planted rank-`rank` component on a random row/column
/// pattern plus sparse noise, roughly `density` fill.
SparseMatrix sparse_low_rank_plus_noise(Index m, Index n, Index rank, double density, double noise, Rng& rng);

}  // namespace cur
