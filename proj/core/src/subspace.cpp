#include "cur/subspace.hpp"

#include <cmath>
#include <string>

#include "cur/error.hpp"
#include "cur/sketch.hpp"

namespace cur {
namespace {

RangeFactor checked_basis(Index m, const DenseMatrix& v, Index k, const char* what) {
  if (v.rows() != m) throw ArgumentError(std::string(what) + ": V must have as many rows as A");
  if (k < 1 || k > v.cols()) throw ArgumentError(std::string(what) + ": requires 1 <= k <= columns of V");
  auto basis = range_factor(v);
  if (basis.rank() < k) throw ArgumentError(std::string(what) + ": span(V) has dimension below k");
  return basis;
}

SubspaceFactor finish(RangeFactor basis, const DenseMatrix& xi, Index k) {
  SubspaceFactor out;
  auto top = top_singular(xi, k);
  out.basis = std::move(basis);
  out.delta = std::move(top.u);
  out.sigma = std::move(top.sigma);
  out.right = std::move(top.v);
  return out;
}

DenseMatrix project(const DenseMatrix& a, const DenseMatrix& y) { return y.transpose() * a; }

DenseMatrix project(const SparseMatrix& a, const DenseMatrix& y) {
  DenseMatrix t = a.transpose() * y;
  return t.transpose();
}

template <class M>
SubspaceFactor best_impl(const M& a, const DenseMatrix& v, Index k) {
  require_finite(a, "best_subspace_svd");
  auto basis = checked_basis(a.rows(), v, k, "best_subspace_svd");
  const DenseMatrix xi = project(a, basis.y);
  return finish(std::move(basis), xi, k);
}

template <class M>
SubspaceFactor approx_impl(const M& a, const DenseMatrix& v, Index k, double eps, Rng& rng) {
  if (!(eps > 0.0)) throw ArgumentError("approx_subspace_svd: eps must be positive");
  require_finite(a, "approx_subspace_svd");
  auto basis = checked_basis(a.rows(), v, k, "approx_subspace_svd");
  const auto w = make_sse(a.cols(), sse_subspace_dim(v.cols(), eps), rng);
  const DenseMatrix xi = apply_sse_right_compact(project(a, basis.y), w);
  if (xi.cols() < k) throw ArgumentError("approx_subspace_svd: sketch narrower than k");
  return finish(std::move(basis), xi, k);
}

}  // namespace

SubspaceFactor best_subspace_svd(const DenseMatrix& a, const DenseMatrix& v, Index k) { return best_impl(a, v, k); }

SubspaceFactor best_subspace_svd(const SparseMatrix& a, const DenseMatrix& v, Index k) { return best_impl(a, v, k); }

DenseMatrix best_in_span(const DenseMatrix& a, const DenseMatrix& v, Index k) {
  const auto f = best_subspace_svd(a, v, k);
  return f.b() * f.sigma.asDiagonal() * f.right.transpose();
}

double best_in_span_residual(const DenseMatrix& a, const DenseMatrix& v, Index k) {
  return (a - best_in_span(a, v, k)).squaredNorm();
}

SubspaceFactor approx_subspace_svd(const DenseMatrix& a, const DenseMatrix& v, Index k, double eps, Rng& rng) {
  return approx_impl(a, v, k, eps, rng);
}

SubspaceFactor approx_subspace_svd(const SparseMatrix& a, const DenseMatrix& v, Index k, double eps, Rng& rng) {
  return approx_impl(a, v, k, eps, rng);
}

DenseMatrix rank_constrained_u(const DenseMatrix& a, const DenseMatrix& c, const DenseMatrix& r, Index k) {
  if (c.rows() != a.rows() || r.cols() != a.cols()) throw ArgumentError("rank_constrained_u: shape mismatch");
  if (k < 1 || k > std::min(c.cols(), r.rows())) throw ArgumentError("rank_constrained_u: requires 1 <= k <= min(c, r)");
  const auto fc = svd(c);
  const auto fr = svd(r);
  if (fc.rank() == 0 || fr.rank() == 0) return DenseMatrix::Zero(c.cols(), r.rows());
  const DenseMatrix core = fc.u.transpose() * a * fr.v;
  const DenseMatrix xk = truncate(svd(core), k);
  return fc.v * fc.sigma.cwiseInverse().asDiagonal() * xk * fr.sigma.cwiseInverse().asDiagonal() * fr.u.transpose();
}

}  // namespace cur
