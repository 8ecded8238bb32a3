#include "cur/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "cur/error.hpp"
#include "cur/random.hpp"

namespace cur {
namespace {

constexpr double kRankEps = 0x1.0p-45;
constexpr Index kDenseSvdLimit = 1000;
constexpr Index kTailSvdLimit = 1500;
constexpr int kMaxSubspaceIterations = 200;
constexpr double kRitzTolerance = 1e-11;
constexpr std::uint64_t kStartSeed = 0x43555221u;

Eigen::BDCSVD<DenseMatrix> thin_svd(const DenseMatrix& a, bool vectors) {
  const unsigned opts = vectors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  Eigen::BDCSVD<DenseMatrix> s(a, opts);
  if (s.info() != Eigen::Success) throw NumericalError("svd: solver did not converge");
  if (!s.singularValues().allFinite()) throw NumericalError("svd: non-finite singular values");
  return s;
}

TopSingular top_from_dense_svd(const DenseMatrix& a, Index k) {
  auto s = thin_svd(a, true);
  TopSingular out;
  out.u = s.matrixU().leftCols(k);
  out.sigma = s.singularValues().head(k);
  out.v = s.matrixV().leftCols(k);
  return out;
}

DenseMatrix thin_q(const Eigen::HouseholderQR<DenseMatrix>& f, Index cols) {
  DenseMatrix q = DenseMatrix::Identity(f.rows(), cols);
  q.applyOnTheLeft(f.householderQ());
  return q;
}

DenseMatrix thin_q(const Eigen::ColPivHouseholderQR<DenseMatrix>& f, Index cols) {
  DenseMatrix q = DenseMatrix::Identity(f.rows(), cols);
  q.applyOnTheLeft(f.householderQ());
  return q;
}

/// Classes of exactly equal columns (or rows), numbered by first occurrence.
struct Repeats {
  std::vector<Index> first;
  std::vector<Index> of;

  Index distinct() const { return static_cast<Index>(first.size()); }
  Vector multiplicity() const {
    Vector m = Vector::Zero(distinct());
    for (Index c : of) m(c) += 1.0;
    return m;
  }
};

Repeats find_repeats(const DenseMatrix& a, bool by_rows) {
  const Index count = by_rows ? a.rows() : a.cols();
  const Index len = by_rows ? a.cols() : a.rows();
  auto at = [&](Index i, Index t) { return by_rows ? a(i, t) : a(t, i); };
  auto equal = [&](Index i, Index j) {
    for (Index t = 0; t < len; ++t)
      if (at(i, t) != at(j, t)) return false;
    return true;
  };
  Repeats out;
  out.of.resize(static_cast<std::size_t>(count));
  std::unordered_map<std::uint64_t, std::vector<Index>> buckets;
  for (Index j = 0; j < count; ++j) {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (Index t = 0; t < len; ++t) h ^= std::bit_cast<std::uint64_t>(at(j, t)) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    auto& bucket = buckets[h];
    Index cls = -1;
    for (Index c : bucket) {
      if (equal(out.first[static_cast<std::size_t>(c)], j)) {
        cls = c;
        break;
      }
    }
    if (cls < 0) {
      cls = out.distinct();
      out.first.push_back(j);
      bucket.push_back(cls);
    }
    out.of[static_cast<std::size_t>(j)] = cls;
  }
  return out;
}

Repeats repeats_from_classes(const std::vector<Index>& of) {
  Repeats out;
  out.of = of;
  for (std::size_t j = 0; j < of.size(); ++j)
    if (of[j] == static_cast<Index>(out.first.size())) out.first.push_back(static_cast<Index>(j));
  return out;
}

DenseMatrix orthonormalize(const DenseMatrix& x) {
  Eigen::HouseholderQR<DenseMatrix> f(x);
  return thin_q(f, x.cols());
}

template <class M>
TopSingular subspace_iteration(const M& a, Index k, bool& converged) {
  const Index m = a.rows();
  const Index n = a.cols();
  const Index b = std::min(std::min(m, n), 2 * k + 10);
  Rng rng(kStartSeed);
  DenseMatrix start(n, b);
  for (Index j = 0; j < b; ++j)
    for (Index i = 0; i < n; ++i) start(i, j) = 2.0 * uniform01(rng) - 1.0;
  DenseMatrix v = orthonormalize(start);

  TopSingular out;
  converged = false;
  for (int it = 0; it < kMaxSubspaceIterations; ++it) {
    DenseMatrix q = orthonormalize(DenseMatrix(a * v));
    DenseMatrix bt = a.transpose() * q;  // n x b, equals (Q^T A)^T
    auto s = thin_svd(bt, true);
    v = s.matrixU();
    out.sigma = s.singularValues().head(k);
    out.v = v.leftCols(k);
    out.u = q * s.matrixV().leftCols(k);
    const double s1 = out.sigma(0);
    if (s1 == 0.0) {
      converged = true;
      break;
    }
    DenseMatrix residual = a * out.v - out.u * out.sigma.asDiagonal();
    const double worst = residual.colwise().norm().maxCoeff();
    if (!std::isfinite(worst)) throw NumericalError("top_singular: non-finite iterate");
    if (worst <= kRitzTolerance * s1) {
      converged = true;
      break;
    }
  }
  return out;
}

void check_k(Index m, Index n, Index k, const char* what) {
  if (k < 1 || k > std::min(m, n)) throw ArgumentError(std::string(what) + ": k out of range");
}

}  // namespace

double rank_tolerance(Index m, Index n, double sigma1) {
  return static_cast<double>(std::max(m, n)) * sigma1 * kRankEps;
}

double qr_rank_threshold(Index m, Index n) { return static_cast<double>(std::max<Index>({m, n, 1})) * kRankEps; }

SvdFactorization svd(const DenseMatrix& a) {
  require_finite(a, "svd");
  SvdFactorization f;
  if (a.size() == 0) {
    f.u.resize(a.rows(), 0);
    f.v.resize(a.cols(), 0);
    return f;
  }
  auto s = thin_svd(a, true);
  const Vector& sv = s.singularValues();
  const double tol = rank_tolerance(a.rows(), a.cols(), sv(0));
  Index rho = 0;
  while (rho < sv.size() && sv(rho) > tol) ++rho;
  f.u = s.matrixU().leftCols(rho);
  f.sigma = sv.head(rho);
  f.v = s.matrixV().leftCols(rho);
  return f;
}

Vector singular_values(const DenseMatrix& a) {
  require_finite(a, "singular_values");
  if (a.size() == 0) return Vector();
  return thin_svd(a, false).singularValues();
}

Index numerical_rank(const DenseMatrix& a) {
  const Vector sv = singular_values(a);
  if (sv.size() == 0) return 0;
  const double tol = rank_tolerance(a.rows(), a.cols(), sv(0));
  return (sv.array() > tol).count();
}

DenseMatrix truncate(const SvdFactorization& f, Index k) {
  if (k < 1) throw ArgumentError("truncate: k must be at least 1");
  const Index t = std::min(k, f.rank());
  return f.u.leftCols(t) * f.sigma.head(t).asDiagonal() * f.v.leftCols(t).transpose();
}

DenseMatrix best_rank_k(const DenseMatrix& a, Index k) {
  if (k < 1) throw ArgumentError("best_rank_k: k must be at least 1");
  if (std::min(a.rows(), a.cols()) <= kDenseSvdLimit) return truncate(svd(a), k);
  const Index t = std::min(k, std::min(a.rows(), a.cols()));
  auto top = top_singular(a, t);
  return top.u * top.sigma.asDiagonal() * top.v.transpose();
}

double tail_energy(const DenseMatrix& a, Index k) {
  if (k < 0) throw ArgumentError("tail_energy: negative k");
  const Index p = std::min(a.rows(), a.cols());
  if (k >= p) return 0.0;
  if (k == 0) return frobenius_sq(a);
  if (p <= kTailSvdLimit) {
    const Vector sv = singular_values(a);
    return sv.tail(p - k).squaredNorm();
  }
  auto top = top_singular(a, k);
  return std::max(0.0, frobenius_sq(a) - top.sigma.squaredNorm());
}

double tail_energy(const SparseMatrix& a, Index k) { return tail_energy(to_dense(a), k); }

DenseMatrix pinv(const DenseMatrix& a) {
  auto f = svd(a);
  if (f.rank() == 0) return DenseMatrix::Zero(a.cols(), a.rows());
  return f.v * f.sigma.cwiseInverse().asDiagonal() * f.u.transpose();
}

QrFactorization qr(const DenseMatrix& a) {
  if (a.rows() < a.cols()) throw ArgumentError("qr: requires rows >= cols");
  require_finite(a, "qr");
  Eigen::HouseholderQR<DenseMatrix> f(a);
  QrFactorization out;
  out.q = thin_q(f, a.cols());
  out.r = f.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  return out;
}

double spectral_norm(const DenseMatrix& a) {
  if (a.size() == 0) return 0.0;
  return top_singular(a, 1).sigma(0);
}

DenseMatrix orthonormal_range(const DenseMatrix& a) {
  Eigen::ColPivHouseholderQR<DenseMatrix> f(a);
  f.setThreshold(qr_rank_threshold(a.rows(), a.cols()));
  if (a.size() == 0 || f.maxPivot() == 0.0) return DenseMatrix(a.rows(), 0);
  return thin_q(f, f.rank());
}

TopSingular top_singular(const DenseMatrix& a, Index k) {
  check_k(a.rows(), a.cols(), k, "top_singular");
  require_finite(a, "top_singular");
  if (std::min(a.rows(), a.cols()) <= kDenseSvdLimit) return top_from_dense_svd(a, k);
  bool converged = false;
  auto out = subspace_iteration(a, k, converged);
  if (!converged) return top_from_dense_svd(a, k);
  return out;
}

TopSingular top_singular_iterative(const DenseMatrix& a, Index k) {
  check_k(a.rows(), a.cols(), k, "top_singular");
  require_finite(a, "top_singular");
  bool converged = false;
  auto out = subspace_iteration(a, k, converged);
  if (!converged) return top_from_dense_svd(a, k);
  return out;
}

TopSingular top_singular(const SparseMatrix& a, Index k) {
  check_k(a.rows(), a.cols(), k, "top_singular");
  require_finite(a, "top_singular");
  bool converged = false;
  return subspace_iteration(a, k, converged);
}

bool has_rank_at_least(const DenseMatrix& a, Index k) {
  if (k <= 0) return true;
  if (k > std::min(a.rows(), a.cols())) return false;
  if (std::min(a.rows(), a.cols()) <= kDenseSvdLimit) return numerical_rank(a) >= k;
  auto top = top_singular(a, k);
  return top.sigma(k - 1) > rank_tolerance(a.rows(), a.cols(), top.sigma(0));
}

bool has_rank_at_least(const SparseMatrix& a, Index k) {
  if (k <= 0) return true;
  if (k > std::min(a.rows(), a.cols())) return false;
  auto top = top_singular(a, k);
  return top.sigma(k - 1) > rank_tolerance(a.rows(), a.cols(), top.sigma(0));
}

DenseMatrix right_pinv_product(const DenseMatrix& x, const DenseMatrix& r) {
  if (x.cols() != r.cols()) throw ArgumentError("right_pinv_product: dimension mismatch");
  const Index p = x.rows();
  const Index n = r.cols();
  const Index rr = r.rows();
  if (rr == 0 || n == 0) return DenseMatrix::Zero(p, rr);

  // R = E^T R_u with E the class indicator: R^+ = (M^1/2 R_u)^+ M^-1/2 E.
  const Repeats rep = find_repeats(r, true);
  if (rep.distinct() < rr) {
    const Vector w = rep.multiplicity().cwiseSqrt();
    DenseMatrix ru(rep.distinct(), n);
    for (Index i = 0; i < rep.distinct(); ++i) ru.row(i) = w(i) * r.row(rep.first[static_cast<std::size_t>(i)]);
    const DenseMatrix zu = right_pinv_product(x, ru);
    DenseMatrix out(p, rr);
    for (Index j = 0; j < rr; ++j) {
      const Index c = rep.of[static_cast<std::size_t>(j)];
      out.col(j) = zu.col(c) / w(c);
    }
    return out;
  }

  if (n >= rr) {
    // R^T = Q T, X R^+ = (T^-1 (X Q)^T)^T.
    Eigen::HouseholderQR<DenseMatrix> f(r.transpose());
    const Vector d = f.matrixQR().diagonal().cwiseAbs();
    if (d.minCoeff() > qr_rank_threshold(n, rr) * d.maxCoeff()) {
      DenseMatrix xt = x.transpose();
      xt.applyOnTheLeft(f.householderQ().adjoint());
      const DenseMatrix z = f.matrixQR().topRows(rr).triangularView<Eigen::Upper>().solve(xt.topRows(rr));
      return z.transpose();
    }
  }

  // R^T P = Q [T; 0] with T rho x rr, so R = F^T Q_rho^T with F = T P^T of full
  // row rank and R^+ = Q_rho (F^T)^+.
  Eigen::ColPivHouseholderQR<DenseMatrix> f(r.transpose());
  f.setThreshold(qr_rank_threshold(n, rr));
  if (f.maxPivot() == 0.0) return DenseMatrix::Zero(p, rr);
  const Index rho = f.rank();

  DenseMatrix xt = x.transpose();
  xt.applyOnTheLeft(f.householderQ().adjoint());
  DenseMatrix y = xt.topRows(rho);  // (X Q_rho)^T, rho x p

  DenseMatrix t = f.matrixR().topRows(rho).triangularView<Eigen::Upper>();
  if (rho == rr) {
    // (F^T)^+ = T^-T P^T
    DenseMatrix z = t.triangularView<Eigen::Upper>().solve(y);  // T^-1 (X Q)^T
    DenseMatrix out = z.transpose();
    return out * f.colsPermutation().transpose();
  }
  DenseMatrix ft = (t * f.colsPermutation().transpose()).transpose();  // rr x rho
  Eigen::HouseholderQR<DenseMatrix> g(ft);
  DenseMatrix t2 = g.matrixQR().topRows(rho).triangularView<Eigen::Upper>();
  // (F^T)^+ = T2^-1 Q2^T, so X R^+ = (Q2 T2^-T (X Q)^T)^T
  DenseMatrix w = DenseMatrix::Zero(rr, p);
  w.topRows(rho) = t2.transpose().triangularView<Eigen::Lower>().solve(y);
  w.applyOnTheLeft(g.householderQ());
  return w.transpose();
}

DenseMatrix left_pinv_product(const DenseMatrix& c, const DenseMatrix& x) {
  if (c.rows() != x.rows()) throw ArgumentError("left_pinv_product: dimension mismatch");
  return right_pinv_product(x.transpose(), c.transpose()).transpose();
}

RangeFactor range_factor(const DenseMatrix& v) {
  require_finite(v, "range_factor");
  const Index m = v.rows();
  const Index c = v.cols();
  RangeFactor out;
  const Repeats rep = find_repeats(v, false);
  if (rep.distinct() < c) {
    DenseMatrix vu(m, rep.distinct());
    for (Index i = 0; i < rep.distinct(); ++i) vu.col(i) = v.col(rep.first[static_cast<std::size_t>(i)]);
    RangeFactor inner = range_factor(vu);
    out.y = std::move(inner.y);
    out.psi.resize(out.y.cols(), c);
    for (Index j = 0; j < c; ++j) out.psi.col(j) = inner.psi.col(rep.of[static_cast<std::size_t>(j)]);
    out.full_rank = false;
    out.repeats = rep.of;
    out.distinct_full_rank = inner.full_rank;
    return out;
  }
  if (m >= c && c > 0) {
    Eigen::HouseholderQR<DenseMatrix> f(v);
    const Vector d = f.matrixQR().diagonal().cwiseAbs();
    if (d.minCoeff() > qr_rank_threshold(m, c) * d.maxCoeff()) {
      out.y = thin_q(f, c);
      out.psi = f.matrixQR().topRows(c).triangularView<Eigen::Upper>();
      out.full_rank = true;
      return out;
    }
  }
  Eigen::ColPivHouseholderQR<DenseMatrix> f(v);
  f.setThreshold(qr_rank_threshold(m, c));
  const Index rho = (v.size() == 0 || f.maxPivot() == 0.0) ? 0 : f.rank();
  out.y = thin_q(f, rho);
  DenseMatrix t = f.matrixR().topRows(rho).triangularView<Eigen::Upper>();
  out.psi = t * f.colsPermutation().transpose();
  out.full_rank = false;
  return out;
}

DenseMatrix psi_pinv_product(const RangeFactor& f, const DenseMatrix& x) {
  if (x.rows() != f.psi.rows()) throw ArgumentError("psi_pinv_product: dimension mismatch");
  if (f.full_rank) return f.psi.triangularView<Eigen::Upper>().solve(x);
  if (f.repeats.empty()) return left_pinv_product(f.psi, x);
  // Psi = Psi_u E = (Psi_u M^1/2) (M^-1/2 E), the second factor with orthonormal rows.
  const Repeats rep = repeats_from_classes(f.repeats);
  const Vector w = rep.multiplicity().cwiseSqrt();
  DenseMatrix pu(f.psi.rows(), rep.distinct());
  for (Index i = 0; i < rep.distinct(); ++i) pu.col(i) = w(i) * f.psi.col(rep.first[static_cast<std::size_t>(i)]);
  const DenseMatrix zu =
      f.distinct_full_rank ? DenseMatrix(pu.triangularView<Eigen::Upper>().solve(x)) : left_pinv_product(pu, x);
  DenseMatrix out(f.psi.cols(), x.cols());
  for (Index j = 0; j < out.rows(); ++j) {
    const Index c = rep.of[static_cast<std::size_t>(j)];
    out.row(j) = zu.row(c) / w(c);
  }
  return out;
}

}  // namespace cur
