#include "cur/generate.hpp"

#include <random>

#include "cur/error.hpp"

namespace cur {

DenseMatrix gaussian(Index m, Index n, Rng& rng) {
  std::normal_distribution<double> nd;
  DenseMatrix g(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) g(i, j) = nd(rng);
  return g;
}

DenseMatrix low_rank_plus_noise(Index m, Index n, Index rank, double noise, Rng& rng) {
  if (m < 1 || n < 1 || rank < 0) throw ArgumentError("low_rank_plus_noise: bad shape");
  DenseMatrix a = gaussian(m, rank, rng) * gaussian(rank, n, rng);
  if (noise != 0.0) a += noise * gaussian(m, n, rng);
  return a;
}

SparseMatrix random_sparse(Index m, Index n, double density, Rng& rng) {
  if (m < 1 || n < 1 || !(density > 0.0 && density <= 1.0)) throw ArgumentError("random_sparse: bad arguments");
  std::normal_distribution<double> nd;
  std::geometric_distribution<long long> gap(density);
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(density * static_cast<double>(m) * static_cast<double>(n) * 1.1) + 16);
  const long long total = static_cast<long long>(m) * n;
  for (long long pos = gap(rng); pos < total; pos += 1 + gap(rng))
    trips.emplace_back(static_cast<Index>(pos / n), static_cast<Index>(pos % n), nd(rng));
  return make_sparse(m, n, trips);
}

SparseMatrix sparse_low_rank_plus_noise(Index m, Index n, Index rank, double density, double noise, Rng& rng) {
  if (rank < 1) throw ArgumentError("sparse_low_rank_plus_noise: rank must be positive");
  // Row i is a scaled copy of one of `rank` sparse patterns.
  std::normal_distribution<double> nd;
  const SparseMatrix patterns = random_sparse(rank, n, density, rng);
  std::vector<Triplet> trips;
  for (Index i = 0; i < m; ++i) {
    const Index p = static_cast<Index>(uniform_below(rng, static_cast<std::uint64_t>(rank)));
    const double scale = nd(rng);
    for (SparseMatrix::InnerIterator it(patterns, p); it; ++it) trips.emplace_back(i, it.col(), scale * it.value());
  }
  if (noise != 0.0) {
    const SparseMatrix e = random_sparse(m, n, density, rng);
    for (Index i = 0; i < e.outerSize(); ++i)
      for (SparseMatrix::InnerIterator it(e, i); it; ++it) trips.emplace_back(i, it.col(), noise * it.value());
  }
  return make_sparse(m, n, trips);
}

}  // namespace cur
