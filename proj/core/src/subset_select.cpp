#include "cur/subset_select.hpp"

#include <algorithm>
#include <cmath>

#include "cur/error.hpp"
#include "cur/sketch.hpp"

namespace cur {
namespace {

constexpr double kAdmissibleSlack = 1e-12;

Index draw(const Vector& cumulative, Rng& rng) {
  const double u = uniform01(rng) * cumulative(cumulative.size() - 1);
  const double* first = cumulative.data();
  const double* last = first + cumulative.size();
  Index i = std::upper_bound(first, last, u) - first;
  // Skip zero-probability entries that share the boundary value.
  return std::min(i, cumulative.size() - 1);
}

void check_orthonormal(const DenseMatrix& v, const char* what) {
  const Index k = v.cols();
  const double dev = (v.transpose() * v - DenseMatrix::Identity(k, k)).cwiseAbs().maxCoeff();
  if (!(dev <= 1e-8)) throw ArgumentError(std::string(what) + ": V must have orthonormal columns");
}

}  // namespace

DenseMatrix SamplingPair::matrix(Index n) const {
  DenseMatrix out = DenseMatrix::Zero(n, size());
  for (Index j = 0; j < size(); ++j) out(indices[static_cast<std::size_t>(j)], j) = scale(j);
  return out;
}

Vector row_norm_distribution(const DenseMatrix& x) {
  require_finite(x, "rand_sampling");
  Vector p = row_norms_sq(x);
  const double total = p.sum();
  if (!(total > 0.0)) throw ArgumentError("rand_sampling: X is zero, distribution undefined");
  return p / total;
}

SamplingPair rand_sampling(const DenseMatrix& x, Index r, double beta, Rng& rng) {
  return rand_sampling(x, r, beta, row_norm_distribution(x), rng);
}

SamplingPair rand_sampling(const DenseMatrix& x, Index r, double beta, const Vector& p, Rng& rng) {
  const Index n = x.rows();
  const Index k = x.cols();
  if (!(k >= 1 && n > k)) throw ArgumentError("rand_sampling: requires n > k >= 1");
  if (r < 1 || r > n) throw ArgumentError("rand_sampling: requires 1 <= r <= n");
  if (!(beta > 0.0 && beta <= 1.0)) throw ArgumentError("rand_sampling: beta must lie in (0, 1]");
  if (p.size() != n) throw ArgumentError("rand_sampling: distribution length mismatch");
  if (!p.allFinite() || (p.array() < 0.0).any() || std::abs(p.sum() - 1.0) > 1e-9)
    throw ArgumentError("rand_sampling: p is not a probability distribution");
  const Vector norms = row_norms_sq(x);
  const double total = norms.sum();
  if (!(total > 0.0)) throw ArgumentError("rand_sampling: X is zero, distribution undefined");
  for (Index i = 0; i < n; ++i) {
    if (p(i) < beta * norms(i) / total * (1.0 - 1e-12))
      throw ArgumentError("rand_sampling: p violates the beta floor");
  }

  Vector cumulative(n);
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) cumulative(i) = (acc += p(i));

  SamplingPair out;
  out.probabilities = p;
  out.indices.resize(static_cast<std::size_t>(r));
  out.scale.resize(r);
  for (Index j = 0; j < r; ++j) {
    Index i = draw(cumulative, rng);
    while (p(i) == 0.0 && i > 0) --i;
    out.indices[static_cast<std::size_t>(j)] = i;
    out.scale(j) = 1.0 / std::sqrt(p(i) * static_cast<double>(r));
  }
  return out;
}

DenseMatrix WeightedSelection::matrix() const {
  DenseMatrix out = DenseMatrix::Zero(weights.size(), size());
  for (Index t = 0; t < size(); ++t)
    out(picks[static_cast<std::size_t>(t)], t) = std::sqrt(step_weights[static_cast<std::size_t>(t)]);
  return out;
}

Index WeightedSelection::nonzeros() const { return (weights.array() != 0.0).count(); }

WeightedSelection bss_sampling(const DenseMatrix& v, const DenseMatrix& a, Index r) {
  const Index n = v.rows();
  const Index k = v.cols();
  if (a.rows() != n) throw ArgumentError("bss_sampling: V and A must have the same number of rows");
  if (k < 1) throw ArgumentError("bss_sampling: V must have at least one column");
  if (r <= k) throw ArgumentError("bss_sampling: requires r > k");
  if (r > n) throw ArgumentError("bss_sampling: requires r <= n");
  require_finite(v, "bss_sampling");
  require_finite(a, "bss_sampling");
  check_orthonormal(v, "bss_sampling");

  const double kd = static_cast<double>(k);
  const double rd = static_cast<double>(r);
  const double shrink = 1.0 - std::sqrt(kd / rd);
  const Vector a_norms = row_norms_sq(a);
  const double frob = a_norms.sum();
  const double delta_u = frob / shrink;
  const Vector upper = delta_u > 0.0 ? Vector(a_norms / delta_u) : Vector(Vector::Zero(n));

  WeightedSelection out;
  out.weights = Vector::Zero(n);
  out.picks.reserve(static_cast<std::size_t>(r));
  out.step_weights.reserve(static_cast<std::size_t>(r));

  DenseMatrix m = DenseMatrix::Zero(k, k);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig;
  for (Index tau = 0; tau < r; ++tau) {
    const double lower = static_cast<double>(tau) - std::sqrt(rd * kd);
    const double next = lower + 1.0;
    eig.compute(m);
    if (eig.info() != Eigen::Success) throw NumericalError("bss_sampling: eigensolver failed");
    const Vector& lambda = eig.eigenvalues();
    if ((lambda.array() <= next).any()) throw InvariantViolation("bss_sampling: lower barrier crossed");
    const double gap = (lambda.array() - next).inverse().sum() - (lambda.array() - lower).inverse().sum();
    const Vector inv1 = (lambda.array() - next).inverse();
    const Vector inv2 = inv1.array().square();
    const DenseMatrix w = (v * eig.eigenvectors()).array().square();  // n x k
    const Vector quad2 = w * inv2;
    const Vector quad1 = w * inv1;

    Index pick = -1;
    double lpick = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double li = quad2(i) / gap - quad1(i);
      if (li > 0.0 && upper(i) <= li * (1.0 + kAdmissibleSlack)) {
        pick = i;
        lpick = li;
        break;
      }
    }
    if (pick < 0) throw InvariantViolation("bss_sampling: no admissible index");
    const double t = 2.0 / (upper(pick) + lpick);
    out.weights(pick) += t;
    out.picks.push_back(pick);
    out.step_weights.push_back(t);
    m.noalias() += t * v.row(pick).transpose() * v.row(pick);
  }
  const double scale = shrink / rd;
  out.weights *= scale;
  for (double& s : out.step_weights) s *= scale;
  return out;
}

Index bss_sparse_dim(Index n, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ArgumentError("bss_sampling_sparse: eps must lie in (0, 1)");
  const double nd = static_cast<double>(n);
  return static_cast<Index>(std::ceil(40.0 * nd * nd / (eps * eps)));
}

WeightedSelection bss_sampling_sparse(const DenseMatrix& v, const DenseMatrix& a, Index r, double eps, Rng& rng) {
  if (a.rows() != v.rows()) throw ArgumentError("bss_sampling_sparse: V and A must have the same number of rows");
  const Index xi = bss_sparse_dim(v.rows(), eps);
  const auto w = make_sse(a.cols(), xi, rng);
  return bss_sampling(v, apply_sse_right_compact(a, w), r);
}

}  // namespace cur
