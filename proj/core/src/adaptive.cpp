#include "cur/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cur/error.hpp"
#include "cur/linalg.hpp"
#include "cur/sketch.hpp"

namespace cur {
namespace {

bool negligible(double residual_sq, double reference_sq, Index m, Index n) {
  const double tol = rank_tolerance(m, n, 1.0);
  return residual_sq <= tol * tol * reference_sq;
}

/// i.i.d. draws from p; uniform when use_uniform is set.
AdaptiveSample draw_from(const Vector& weights, bool use_uniform, Index count, Rng& rng) {
  const Index n = weights.size();
  AdaptiveSample out;
  out.uniform_fallback = use_uniform;
  out.probabilities = use_uniform ? Vector(Vector::Constant(n, 1.0 / static_cast<double>(n)))
                                  : Vector(weights / weights.sum());
  Vector cumulative(n);
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) cumulative(i) = (acc += out.probabilities(i));
  out.indices.resize(static_cast<std::size_t>(count));
  for (Index j = 0; j < count; ++j) {
    const double u = uniform01(rng) * acc;
    Index i = std::upper_bound(cumulative.data(), cumulative.data() + n, u) - cumulative.data();
    i = std::min(i, n - 1);
    while (i > 0 && out.probabilities(i) == 0.0) --i;
    out.indices[static_cast<std::size_t>(j)] = i;
  }
  return out;
}

void check_count(Index count, const char* what) {
  if (count < 1) throw ArgumentError(std::string(what) + ": sample count must be at least 1");
}

/// H^T projected: ||Q_R^T H^T||_F^2 where Q_R spans range(R^T).
double projected_energy(const DenseMatrix& rt, const DenseMatrix& ht) {
  Eigen::ColPivHouseholderQR<DenseMatrix> f(rt);
  f.setThreshold(qr_rank_threshold(rt.rows(), rt.cols()));
  if (f.maxPivot() == 0.0) return 0.0;
  DenseMatrix z = ht;
  z.applyOnTheLeft(f.householderQ().adjoint());
  return z.topRows(f.rank()).squaredNorm();
}

}  // namespace

AdaptiveSample adaptive_cols(const DenseMatrix& a, const DenseMatrix& v, double alpha, Index c2, Rng& rng) {
  if (v.rows() != a.rows()) throw ArgumentError("adaptive_cols: V must have as many rows as A");
  if (v.cols() > std::min(a.rows(), a.cols())) throw ArgumentError("adaptive_cols: V has too many columns");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ArgumentError("adaptive_cols: alpha must lie in (0, 1]");
  check_count(c2, "adaptive_cols");
  require_finite(a, "adaptive_cols");
  require_finite(v, "adaptive_cols");
  const DenseMatrix q = orthonormal_range(v);
  const DenseMatrix b = a - q * (q.transpose() * a);
  const Vector norms = column_norms_sq(b);
  const bool zero = negligible(norms.sum(), frobenius_sq(a), a.rows(), a.cols());
  return draw_from(norms, zero, c2, rng);
}

AdaptiveSample adaptive_rows(const DenseMatrix& a, const DenseMatrix& v, const DenseMatrix& r1, Index r2, Rng& rng) {
  if (v.rows() != a.rows()) throw ArgumentError("adaptive_rows: V must have as many rows as A");
  if (r1.cols() != a.cols()) throw ArgumentError("adaptive_rows: R1 must have as many columns as A");
  check_count(r2, "adaptive_rows");
  require_finite(a, "adaptive_rows");
  const DenseMatrix q = orthonormal_range(r1.transpose());
  const DenseMatrix b = a - (a * q) * q.transpose();
  const Vector norms = row_norms_sq(b);
  const bool zero = negligible(norms.sum(), frobenius_sq(a), a.rows(), a.cols());
  return draw_from(norms, zero, r2, rng);
}

AdaptiveSample adaptive_cols_sparse(const SparseMatrix& a, const DenseMatrix& v, Index c2, Rng& rng) {
  if (v.rows() != a.rows()) throw ArgumentError("adaptive_cols_sparse: V must have as many rows as A");
  check_count(c2, "adaptive_cols_sparse");
  require_finite(a, "adaptive_cols_sparse");
  const auto s = make_sign_sketch(jlt_rows(a.cols(), 1.0), a.rows(), rng);
  const DenseMatrix sa = s.s * a;
  const DenseMatrix vpa = pinv(v) * a;
  const DenseMatrix sketched = sa - (s.s * v) * vpa;
  const Vector norms = column_norms_sq(sketched);
  const bool zero = negligible(norms.sum(), sa.squaredNorm(), a.rows(), a.cols());
  return draw_from(norms, zero, c2, rng);
}

AdaptiveSample adaptive_rows_sparse(const SparseMatrix& a, const DenseMatrix& v, const DenseMatrix& r1, Index r2,
                                    Rng& rng) {
  if (v.rows() != a.rows()) throw ArgumentError("adaptive_rows_sparse: V must have as many rows as A");
  if (r1.cols() != a.cols()) throw ArgumentError("adaptive_rows_sparse: R1 must have as many columns as A");
  check_count(r2, "adaptive_rows_sparse");
  require_finite(a, "adaptive_rows_sparse");
  const auto s = make_sign_sketch(jlt_rows(a.rows(), 1.0), a.cols(), rng);
  const DenseMatrix st = s.s.transpose();
  const DenseMatrix as = a * st;
  const DenseMatrix inner = pinv(r1) * (r1 * st);
  const DenseMatrix sketched = as - a * inner;
  const Vector norms = row_norms_sq(sketched);
  const bool zero = negligible(norms.sum(), as.squaredNorm(), a.rows(), a.cols());
  return draw_from(norms, zero, r2, rng);
}

Vector DiscreteDistribution::q() const {
  Vector out(static_cast<Index>(counts.size()));
  for (std::size_t i = 0; i < counts.size(); ++i)
    out(static_cast<Index>(i)) = static_cast<double>(counts[i]) / static_cast<double>(grid);
  return out;
}

Index DiscreteDistribution::inverse_cdf(std::int64_t h) const {
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), h);
  return static_cast<Index>(it - cumulative.begin());
}

DiscreteDistribution discretize(const Vector& p) {
  const Index n = p.size();
  if (n < 1) throw ArgumentError("discretize: empty distribution");
  if (!p.allFinite() || (p.array() < 0.0).any() || std::abs(p.sum() - 1.0) > 1e-9)
    throw ArgumentError("discretize: p is not a probability distribution");
  DiscreteDistribution d;
  d.grid = 4 * static_cast<std::int64_t>(n);
  p.maxCoeff(&d.special);
  d.counts.assign(static_cast<std::size_t>(n), 0);
  std::int64_t others = 0;
  const double half_grid = 2.0 * static_cast<double>(n);
  for (Index i = 0; i < n; ++i) {
    if (i == d.special) continue;
    // r_i = p_i / 2 rounded up to a multiple of 1/(4n)
    const auto c = static_cast<std::int64_t>(std::ceil(p(i) * half_grid));
    d.counts[static_cast<std::size_t>(i)] = c;
    others += c;
  }
  d.counts[static_cast<std::size_t>(d.special)] = d.grid - others;
  d.cumulative.resize(static_cast<std::size_t>(n));
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < d.counts.size(); ++i) d.cumulative[i] = (acc += d.counts[i]);
  return d;
}

std::uint64_t next_prime(std::uint64_t n) {
  auto is_prime = [](std::uint64_t x) {
    if (x < 2) return false;
    for (std::uint64_t d = 2; d * d <= x; ++d)
      if (x % d == 0) return false;
    return true;
  };
  while (!is_prime(n)) ++n;
  return n;
}

PairwiseHashFamily make_hash_family(std::uint64_t range) {
  if (range < 1) throw ArgumentError("make_hash_family: empty range");
  PairwiseHashFamily f;
  f.prime = next_prime(range);
  f.range = range;
  return f;
}

double adaptive_rows_objective(const DenseMatrix& a, const DenseMatrix& v, const DenseMatrix& r) {
  if (v.rows() != a.rows() || r.cols() != a.cols()) throw ArgumentError("adaptive_rows_objective: shape mismatch");
  const DenseMatrix qv = orthonormal_range(v);
  const DenseMatrix h = qv.transpose() * a;
  const double fixed = (a - qv * h).squaredNorm() + h.squaredNorm();
  return std::max(0.0, fixed - projected_energy(r.transpose(), h.transpose()));
}

DerandomizedSample adaptive_rows_d(const DenseMatrix& a, const DenseMatrix& v, const DenseMatrix& r1, Index r2) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (v.rows() != m) throw ArgumentError("adaptive_rows_d: V must have as many rows as A");
  if (r1.cols() != n) throw ArgumentError("adaptive_rows_d: R1 must have as many columns as A");
  check_count(r2, "adaptive_rows_d");
  require_finite(a, "adaptive_rows_d");
  require_finite(v, "adaptive_rows_d");
  require_finite(r1, "adaptive_rows_d");

  const DenseMatrix qv = orthonormal_range(v);
  const DenseMatrix h = qv.transpose() * a;
  if (numerical_rank(h) != qv.cols()) throw ArgumentError("adaptive_rows_d: requires rank(V) = rank(V V^+ A)");
  const DenseMatrix ht = h.transpose();
  const double fixed = (a - qv * h).squaredNorm() + h.squaredNorm();

  const DenseMatrix q1 = orthonormal_range(r1.transpose());
  const DenseMatrix b = a - (a * q1) * q1.transpose();
  const Vector norms = row_norms_sq(b);

  DenseMatrix rt(n, r1.rows() + r2);
  rt.leftCols(r1.rows()) = r1.transpose();
  auto evaluate = [&](const std::vector<Index>& rows) {
    for (Index j = 0; j < r2; ++j) rt.col(r1.rows() + j) = a.row(rows[static_cast<std::size_t>(j)]).transpose();
    return std::max(0.0, fixed - projected_energy(rt, ht));
  };

  DerandomizedSample out;
  if (negligible(norms.sum(), frobenius_sq(a), m, n)) {
    out.zero_residual = true;
    out.indices.resize(static_cast<std::size_t>(r2));
    for (Index j = 0; j < r2; ++j) out.indices[static_cast<std::size_t>(j)] = j % m;
    out.objective = evaluate(out.indices);
    out.candidates = 1;
    return out;
  }

  const auto dist = discretize(norms / norms.sum());
  const auto family = make_hash_family(static_cast<std::uint64_t>(dist.grid));
  std::vector<Index> rows(static_cast<std::size_t>(r2));
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t ca = 0; ca < family.prime; ++ca) {
    for (std::uint64_t cb = 0; cb < family.prime; ++cb) {
      for (Index j = 0; j < r2; ++j) {
        const auto hv = static_cast<std::int64_t>(family(ca, cb, static_cast<std::uint64_t>(j)));
        rows[static_cast<std::size_t>(j)] = dist.inverse_cdf(hv);
      }
      const double value = evaluate(rows);
      if (value < best) {
        best = value;
        out.indices = rows;
        out.family_member = ca * family.prime + cb;
      }
    }
  }
  out.objective = best;
  out.candidates = family.size();
  return out;
}

DerandomizedSample adaptive_cols_d(const DenseMatrix& a, const DenseMatrix& c1, Index c2, Index k) {
  if (c1.rows() != a.rows()) throw ArgumentError("adaptive_cols_d: C1 must have as many rows as A");
  if (k < 1 || k > std::min(a.rows(), a.cols())) throw ArgumentError("adaptive_cols_d: k out of range");
  const DenseMatrix ak = best_rank_k(a, k);
  return adaptive_rows_d(a.transpose(), ak.transpose(), c1.transpose(), c2);
}

}  // namespace cur
