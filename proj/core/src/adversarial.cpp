#include "cur/adversarial.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "cur/error.hpp"
#include "cur/linalg.hpp"
#include "cur/subspace.hpp"

namespace cur {

std::vector<double> AdversarialInstance::sigma_sq_closed_form() const {
  const double small = alpha * alpha / static_cast<double>(k);
  std::vector<double> out(static_cast<std::size_t>(t), small);
  for (Index i = 0; i < 2 * k && i < t; ++i) out[static_cast<std::size_t>(i)] = static_cast<double>(n) + small;
  return out;
}

DenseMatrix adversarial_block(Index n, Index k, double alpha) {
  if (n <= 1 || k < 1 || !(alpha > 0.0)) throw ArgumentError("adversarial instance needs n > 1, k >= 1, alpha > 0");
  DenseMatrix d = DenseMatrix::Zero(n + 1, n);
  const double off = alpha / std::sqrt(static_cast<double>(k));
  for (Index i = 0; i < n; ++i) {
    d(0, i) = 1.0;
    d(i + 1, i) = off;
  }
  return d;
}

AdversarialInstance gen_adversarial(Index n, Index k, double alpha) {
  const DenseMatrix d = adversarial_block(n, k, alpha);
  AdversarialInstance inst;
  inst.n = n;
  inst.k = k;
  inst.alpha = alpha;
  inst.t = (2 * n + 1) * k;
  inst.ell = n * k;
  inst.opt2 = static_cast<double>(inst.ell) * (1.0 + 2.0 * alpha * alpha / static_cast<double>(k));

  // B occupies rows [0, k(n+1)) x cols [0, kn); B^T occupies the complement.
  const Index b_rows = k * (n + 1);
  const Index b_cols = k * n;
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(4 * n * k));
  for (Index blk = 0; blk < k; ++blk) {
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n + 1; ++i) {
        const double v = d(i, j);
        if (v == 0.0) continue;
        trips.emplace_back(blk * (n + 1) + i, blk * n + j, v);
        trips.emplace_back(b_rows + blk * n + j, b_cols + blk * (n + 1) + i, v);
      }
    }
  }
  inst.a = make_sparse(inst.t, inst.t, trips);
  return inst;
}

std::uint64_t binomial(Index n, Index c) {
  if (c < 0 || c > n) return 0;
  c = std::min(c, n - c);
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t r = 1;
  for (Index i = 1; i <= c; ++i) {
    const auto num = static_cast<std::uint64_t>(n - c + i);
    const std::uint64_t g = std::gcd(r, static_cast<std::uint64_t>(i));
    const std::uint64_t rr = r / g;
    const std::uint64_t den = static_cast<std::uint64_t>(i) / g;
    const std::uint64_t nn = num / den;  // den divides num * rr; rr and den coprime
    if (rr > cap / nn) return cap;
    r = rr * nn;
  }
  return r;
}

namespace {

double subset_residual(const DenseMatrix& a, const DenseMatrix& cols, Index k) {
  const DenseMatrix q = orthonormal_range(cols);
  if (q.cols() <= k) {
    const DenseMatrix proj = q * (q.transpose() * a);
    return (a - proj).squaredNorm();
  }
  return best_in_span_residual(a, cols, k);
}

}  // namespace

BruteForceResult brute_force_best_columns(const DenseMatrix& a, Index c, Index k, std::uint64_t budget) {
  const Index n = a.cols();
  if (c < 1 || c > n) throw ArgumentError("brute force needs 1 <= c <= n");
  if (k < 1) throw ArgumentError("brute force needs k >= 1");
  const std::uint64_t total = binomial(n, c);
  if (total > budget) throw ArgumentError("brute force budget exceeded: " + std::to_string(total) + " subsets");
  require_finite(a, "A");

  std::vector<Index> idx(static_cast<std::size_t>(c));
  std::iota(idx.begin(), idx.end(), Index{0});
  BruteForceResult best;
  best.min_error = std::numeric_limits<double>::infinity();
  while (true) {
    const double err = subset_residual(a, gather_columns(a, idx), k);
    ++best.subsets;
    if (err < best.min_error) {
      best.min_error = err;
      best.columns = idx;
    }
    Index p = c - 1;
    while (p >= 0 && idx[static_cast<std::size_t>(p)] == n - c + p) --p;
    if (p < 0) break;
    ++idx[static_cast<std::size_t>(p)];
    for (Index q = p + 1; q < c; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
  }
  return best;
}

}  // namespace cur
