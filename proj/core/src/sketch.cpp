#include "cur/sketch.hpp"

#include <algorithm>
#include <cmath>

#include "cur/error.hpp"

namespace cur {
namespace {

std::vector<Index> slot_map(const SparseEmbedding& w, const std::vector<Index>& buckets) {
  std::vector<Index> slot(static_cast<std::size_t>(w.source_dim));
  for (Index i = 0; i < w.source_dim; ++i) {
    const Index b = w.bucket[static_cast<std::size_t>(i)];
    slot[static_cast<std::size_t>(i)] = std::lower_bound(buckets.begin(), buckets.end(), b) - buckets.begin();
  }
  return slot;
}

std::vector<Index> identity_slots(const SparseEmbedding& w) { return w.bucket; }

template <class Slots>
DenseMatrix left_dense(const SparseEmbedding& w, const DenseMatrix& a, Index out_rows, const Slots& slot) {
  if (a.rows() != w.source_dim) throw ArgumentError("apply_sse: dimension mismatch");
  DenseMatrix out = DenseMatrix::Zero(out_rows, a.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      const double v = a(i, j);
      if (v != 0.0) out(slot[static_cast<std::size_t>(i)], j) += w.sign[static_cast<std::size_t>(i)] * v;
    }
  }
  return out;
}

template <class Slots>
DenseMatrix left_sparse(const SparseEmbedding& w, const SparseMatrix& a, Index out_rows, const Slots& slot) {
  if (a.rows() != w.source_dim) throw ArgumentError("apply_sse: dimension mismatch");
  DenseMatrix out = DenseMatrix::Zero(out_rows, a.cols());
  for (Index i = 0; i < a.outerSize(); ++i) {
    const Index row = slot[static_cast<std::size_t>(i)];
    const double y = w.sign[static_cast<std::size_t>(i)];
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) out(row, it.col()) += y * it.value();
  }
  return out;
}

template <class Slots>
DenseMatrix right_dense(const DenseMatrix& x, const SparseEmbedding& w, Index out_cols, const Slots& slot) {
  if (x.cols() != w.source_dim) throw ArgumentError("apply_sse_right: dimension mismatch");
  DenseMatrix out = DenseMatrix::Zero(x.rows(), out_cols);
  for (Index j = 0; j < x.cols(); ++j) {
    out.col(slot[static_cast<std::size_t>(j)]) += static_cast<double>(w.sign[static_cast<std::size_t>(j)]) * x.col(j);
  }
  return out;
}

template <class Slots>
DenseMatrix right_sparse(const SparseMatrix& x, const SparseEmbedding& w, Index out_cols, const Slots& slot) {
  if (x.cols() != w.source_dim) throw ArgumentError("apply_sse_right: dimension mismatch");
  DenseMatrix out = DenseMatrix::Zero(x.rows(), out_cols);
  for (Index i = 0; i < x.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(x, i); it; ++it) {
      const auto c = static_cast<std::size_t>(it.col());
      out(i, slot[c]) += w.sign[c] * it.value();
    }
  }
  return out;
}

}  // namespace

SparseEmbedding make_sse(Index n, Index xi, Rng& rng) {
  if (xi < 1) throw ArgumentError("make_sse: target dimension must be at least 1");
  if (n < 0) throw ArgumentError("make_sse: negative source dimension");
  SparseEmbedding w;
  w.target_dim = xi;
  w.source_dim = n;
  w.bucket.resize(static_cast<std::size_t>(n));
  w.sign.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    w.bucket[static_cast<std::size_t>(i)] = static_cast<Index>(uniform_below(rng, static_cast<std::uint64_t>(xi)));
    w.sign[static_cast<std::size_t>(i)] = random_sign(rng) > 0 ? 1 : -1;
  }
  return w;
}

Index sse_subspace_dim(Index rho, double eps) {
  if (rho < 1 || !(eps > 0.0)) throw ArgumentError("sse_subspace_dim: invalid arguments");
  return static_cast<Index>(std::ceil(40.0 * static_cast<double>(rho) * static_cast<double>(rho) / (eps * eps)));
}

Index sse_frobenius_dim(double eps) {
  if (!(eps > 0.0)) throw ArgumentError("sse_frobenius_dim: invalid epsilon");
  return static_cast<Index>(std::ceil(40.0 / (eps * eps)));
}

DenseMatrix apply_sse(const SparseEmbedding& w, const DenseMatrix& a) {
  return left_dense(w, a, w.target_dim, identity_slots(w));
}

DenseMatrix apply_sse(const SparseEmbedding& w, const SparseMatrix& a) {
  return left_sparse(w, a, w.target_dim, identity_slots(w));
}

DenseMatrix apply_sse_right(const DenseMatrix& x, const SparseEmbedding& w) {
  return right_dense(x, w, w.target_dim, identity_slots(w));
}

DenseMatrix apply_sse_right(const SparseMatrix& x, const SparseEmbedding& w) {
  return right_sparse(x, w, w.target_dim, identity_slots(w));
}

std::vector<Index> occupied_buckets(const SparseEmbedding& w) {
  std::vector<Index> b = w.bucket;
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

DenseMatrix apply_sse_compact(const SparseEmbedding& w, const DenseMatrix& a) {
  const auto buckets = occupied_buckets(w);
  return left_dense(w, a, static_cast<Index>(buckets.size()), slot_map(w, buckets));
}

DenseMatrix apply_sse_compact(const SparseEmbedding& w, const SparseMatrix& a) {
  const auto buckets = occupied_buckets(w);
  return left_sparse(w, a, static_cast<Index>(buckets.size()), slot_map(w, buckets));
}

DenseMatrix apply_sse_right_compact(const DenseMatrix& x, const SparseEmbedding& w) {
  const auto buckets = occupied_buckets(w);
  return right_dense(x, w, static_cast<Index>(buckets.size()), slot_map(w, buckets));
}

DenseMatrix apply_sse_right_compact(const SparseMatrix& x, const SparseEmbedding& w) {
  const auto buckets = occupied_buckets(w);
  return right_sparse(x, w, static_cast<Index>(buckets.size()), slot_map(w, buckets));
}

SignSketch make_sign_sketch(Index s, Index m, Rng& rng) {
  if (s < 1 || m < 0) throw ArgumentError("make_sign_sketch: invalid dimensions");
  const double v = 1.0 / std::sqrt(static_cast<double>(s));
  SignSketch out;
  out.s.resize(s, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < s; ++i) out.s(i, j) = random_sign(rng) * v;
  return out;
}

Index jlt_rows(Index n, double beta) {
  if (!(beta > 0.0)) throw ArgumentError("jlt: beta must be positive");
  if (n < 2) throw ArgumentError("jlt: needs at least two vectors");
  return static_cast<Index>(std::ceil(8.0 * (4.0 + 2.0 * beta) * std::log(static_cast<double>(n))));
}

DenseMatrix jlt(const DenseMatrix& b, double beta, Rng& rng) {
  const Index s = jlt_rows(b.cols(), beta);
  return make_sign_sketch(s, b.rows(), rng).s * b;
}

DenseMatrix jlt_right(const DenseMatrix& b, double beta, Rng& rng) {
  const Index s = jlt_rows(b.rows(), beta);
  return b * make_sign_sketch(s, b.cols(), rng).s.transpose();
}

}  // namespace cur
