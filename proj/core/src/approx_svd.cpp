#include "cur/approx_svd.hpp"

#include <cmath>
#include <string>

#include "cur/error.hpp"
#include "cur/linalg.hpp"
#include "cur/sketch.hpp"

namespace cur {
namespace {

void check_eps(double eps, const char* what) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ArgumentError(std::string(what) + ": eps must be positive");
}

void check_k(Index m, Index n, Index k, Index kmin, const char* what) {
  if (k < kmin) throw ArgumentError(std::string(what) + ": k below minimum");
  if (k > std::min(m, n)) throw ArgumentError(std::string(what) + ": k exceeds matrix dimensions");
}

template <class M>
FactorZ randomized_impl(const M& a, Index k, double eps, Rng& rng) {
  check_k(a.rows(), a.cols(), k, 2, "randomized_svd");
  check_eps(eps, "randomized_svd");
  if (eps > 1.0) throw ArgumentError("randomized_svd: eps must be at most 1");
  require_finite(a, "randomized_svd");
  const Index p = std::min(k + static_cast<Index>(std::ceil(static_cast<double>(k) / eps)), a.cols());
  const auto omega = make_sign_sketch(p, a.cols(), rng);
  DenseMatrix y = a * omega.s.transpose();
  Eigen::HouseholderQR<DenseMatrix> f(y);
  DenseMatrix q = DenseMatrix::Identity(a.rows(), p);
  q.applyOnTheLeft(f.householderQ());
  DenseMatrix b = (a.transpose() * q).transpose();  // Q^T A, p x n
  // rank(Q^T A) = min(rank A, p) almost surely; p > k so this tests rank(A) >= k.
  if (!has_rank_at_least(b, k)) throw ArgumentError("randomized_svd: k exceeds rank(A)");
  FactorZ out;
  out.z = top_singular(b, k).v;
  out.mode = SvdMode::randomized;
  out.eps = eps;
  return out;
}

}  // namespace

const char* to_string(SvdMode mode) {
  switch (mode) {
    case SvdMode::deterministic: return "deterministic";
    case SvdMode::randomized: return "randomized";
    case SvdMode::sparse: return "sparse";
  }
  return "unknown";
}

FactorZ deterministic_svd(const DenseMatrix& a, Index k, double eps) {
  check_k(a.rows(), a.cols(), k, 1, "deterministic_svd");
  check_eps(eps, "deterministic_svd");
  require_finite(a, "deterministic_svd");
  if (!has_rank_at_least(a, k)) throw ArgumentError("deterministic_svd: k exceeds rank(A)");
  FactorZ out;
  out.z = top_singular(a, k).v;
  out.mode = SvdMode::deterministic;
  out.eps = eps;
  return out;
}

FactorZ randomized_svd(const DenseMatrix& a, Index k, double eps, Rng& rng) {
  return randomized_impl(a, k, eps, rng);
}

FactorZ randomized_svd(const SparseMatrix& a, Index k, double eps, Rng& rng) {
  return randomized_impl(a, k, eps, rng);
}

Index sparse_svd_dim(Index k, double eps) {
  check_eps(eps, "sparse_svd");
  const double kk = static_cast<double>(k);
  return static_cast<Index>(std::ceil(40.0 * (kk * kk + kk) / (eps * eps)));
}

FactorZ sparse_svd(const SparseMatrix& a, Index k, double eps, Rng& rng) {
  check_k(a.rows(), a.cols(), k, 2, "sparse_svd");
  check_eps(eps, "sparse_svd");
  if (eps > 1.0) throw ArgumentError("sparse_svd: eps must be at most 1");
  require_finite(a, "sparse_svd");
  const auto w = make_sse(a.rows(), sparse_svd_dim(k, eps), rng);
  const DenseMatrix wat = apply_sse_compact(w, a).transpose();
  if (wat.cols() < k) throw ArgumentError("sparse_svd: k exceeds rank(A)");
  // (WA)^T = Q T: the right singular vectors of WA are Q times those of T^T.
  Eigen::HouseholderQR<DenseMatrix> f(wat);
  const Index p = std::min(wat.rows(), wat.cols());
  const DenseMatrix tt = f.matrixQR().topRows(p).triangularView<Eigen::Upper>().toDenseMatrix().transpose();
  const TopSingular top = top_singular_iterative(tt, k);
  if (!(top.sigma(k - 1) > rank_tolerance(tt.rows(), tt.cols(), top.sigma(0))))
    throw ArgumentError("sparse_svd: k exceeds rank(A)");
  DenseMatrix z = DenseMatrix::Zero(wat.rows(), k);
  z.topRows(p) = top.v;
  z.applyOnTheLeft(f.householderQ());
  FactorZ out;
  out.z = std::move(z);
  out.mode = SvdMode::sparse;
  out.eps = eps;
  return out;
}

}  // namespace cur
