#pragma once

#include <cstdint>
#include <vector>

#include "cur/matrix.hpp"

namespace cur {

/// Block-diagonal instance diag(B, B^T), B = k diagonal copies of the (n+1) x n
/// matrix D whose i-th column is e_1 + (alpha/sqrt k) e_{i+1}.
struct AdversarialInstance {
  Index n = 0;
  Index k = 0;
  double alpha = 0.0;
  SparseMatrix a;  // t x t
  Index t = 0;
  Index ell = 0;       // n k
  double opt2 = 0.0;   // ell (1 + 2 alpha^2 / k)

  /// n + alpha^2/k for i < 2k, alpha^2/k afterwards (t entries).
  std::vector<double> sigma_sq_closed_form() const;
};

AdversarialInstance gen_adversarial(Index n, Index k, double alpha = 1e-10);

/// (n+1) x n block D.
DenseMatrix adversarial_block(Index n, Index k, double alpha);

struct BruteForceResult {
  std::vector<Index> columns;
  double min_error = 0.0;
  std::uint64_t subsets = 0;
};

/// Number of c-subsets of an n-set, saturating at UINT64_MAX.
std::uint64_t binomial(Index n, Index c);

/// Exact minimum of ||A - Pi^F_{C,k}(A)||_F^2 over all c-column subsets C.
/// When a subset spans fewer than k dimensions the projection onto its span is used.
BruteForceResult brute_force_best_columns(const DenseMatrix& a, Index c, Index k,
                                          std::uint64_t budget = 1000000);

}  // namespace cur
