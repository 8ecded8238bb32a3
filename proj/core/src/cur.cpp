#include "cur/cur.hpp"

#include <chrono>
#include <cmath>

#include "cur/adaptive.hpp"
#include "cur/approx_svd.hpp"
#include "cur/error.hpp"
#include "cur/linalg.hpp"
#include "cur/sketch.hpp"
#include "cur/subset_select.hpp"
#include "cur/subspace.hpp"

namespace cur {
namespace {

using Clock = std::chrono::steady_clock;

class StageTimer {
 public:
  explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink), last_(Clock::now()) {}
  void mark(const char* stage) {
    const auto now = Clock::now();
    sink_[stage] += std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

 private:
  std::map<std::string, double>& sink_;
  Clock::time_point last_;
};

Index ceil_index(double x) { return static_cast<Index>(std::ceil(x - 1e-9)); }

double paper_factor(Variant v) {
  switch (v) {
    case Variant::linear: return 1620.0;
    case Variant::sparse: return 4820.0;
    case Variant::deterministic: return 10.0;
  }
  return 0.0;
}

/// (A - A Z Z^T) Omega D, m x h.
template <class M>
DenseMatrix sampled_residual_columns(const M& a, const DenseMatrix& az, const DenseMatrix& z, const SamplingPair& s) {
  DenseMatrix out = gather_columns(a, s.indices);
  out.noalias() -= az * gather_rows(z, s.indices).transpose();
  return out * s.scale.asDiagonal();
}

/// ((A^T - A^T Z Z^T) Omega D)^T, h x n.
template <class M>
DenseMatrix sampled_residual_rows(const M& a, const DenseMatrix& zta, const DenseMatrix& z, const SamplingPair& s) {
  DenseMatrix out = gather_rows(a, s.indices);
  out.noalias() -= gather_rows(z, s.indices) * zta;
  return s.scale.asDiagonal() * out;
}

DenseMatrix z_transpose_a(const DenseMatrix& a, const DenseMatrix& z) { return z.transpose() * a; }

DenseMatrix z_transpose_a(const SparseMatrix& a, const DenseMatrix& z) {
  DenseMatrix t = a.transpose() * z;
  return t.transpose();
}

/// Leverage-score sampling of the rows of Z until Z^T Omega D has rank k.
struct LeverageStage {
  SamplingPair sample;
  DenseMatrix vm;  // h x k right singular vectors of Z^T Omega D
  int retries = 0;
};

LeverageStage leverage_stage(const DenseMatrix& z, Index h, int retry_budget, Rng& rng) {
  const Index k = z.cols();
  LeverageStage out;
  for (int attempt = 0;; ++attempt) {
    out.sample = rand_sampling(z, h, 1.0, rng);
    const DenseMatrix mt = out.sample.scale.asDiagonal() * gather_rows(z, out.sample.indices);  // M^T, h x k
    auto f = svd(DenseMatrix(mt.transpose()));
    if (f.rank() == k) {
      out.vm = f.v;
      out.retries = attempt;
      return out;
    }
    if (attempt >= retry_budget) throw NumericalError("leverage sampling: rank(Z^T Omega D) < k after retry budget");
  }
}

void append_weighted(const WeightedSelection& s, const std::vector<Index>& base, const Vector& base_scale,
                     std::vector<Index>& indices, std::vector<double>& scales) {
  for (Index t = 0; t < s.size(); ++t) {
    const Index local = s.picks[static_cast<std::size_t>(t)];
    const double w = std::sqrt(s.step_weights[static_cast<std::size_t>(t)]);
    indices.push_back(base.empty() ? local : base[static_cast<std::size_t>(local)]);
    scales.push_back(base_scale.size() ? base_scale(local) * w : w);
  }
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

/// Z2 D = qr(Y Delta) and the column side factor Psi^+ Delta D^-1.
struct RowBasis {
  DenseMatrix z2;
  DenseMatrix left;  // c x k
};

RowBasis row_basis(const SubspaceFactor& f) {
  auto q = qr(f.b());
  RowBasis out;
  out.z2 = std::move(q.q);
  const Index k = f.delta.cols();
  const Vector d = q.r.diagonal().cwiseAbs();
  if (d.minCoeff() <= qr_rank_threshold(k, k) * d.maxCoeff()) throw NumericalError("cur: Y Delta is rank deficient");
  // Delta D^-1 = (D^-T Delta^T)^T
  const DenseMatrix dd = q.r.transpose().triangularView<Eigen::Lower>().solve(f.delta.transpose()).transpose();
  out.left = psi_pinv_product(f.basis, dd);
  return out;
}

void finish_decomposition(CurDecomposition& dec) {
  dec.u = dec.u_left * dec.u_right;
}

void record_dense_residuals(const DenseMatrix& a, const DenseMatrix& c1, const DenseMatrix& z2, CurDiagnostics& d) {
  const DenseMatrix q = orthonormal_range(c1);
  d.c1_residual = (a - q * (q.transpose() * a)).squaredNorm();
  d.span_residual = (a - z2 * (z2.transpose() * a)).squaredNorm();
}

CurDecomposition start(const CurConfig& cfg, Index m, Index n) {
  CurDecomposition dec;
  dec.k = cfg.k;
  dec.variant = cfg.variant;
  dec.fidelity = cfg.fidelity;
  dec.seed = cfg.seed;
  dec.diagnostics.params = resolve_parameters(cfg, m, n);
  return dec;
}

template <class M>
CurDecomposition randomized_pipeline(const M& a, const CurConfig& cfg, Rng& rng, bool sparse) {
  CurDecomposition dec = start(cfg, a.rows(), a.cols());
  const auto& p = dec.diagnostics.params;
  const Index k = cfg.k;
  StageTimer timer(dec.diagnostics.stage_seconds);

  // Columns.
  DenseMatrix z1;
  if constexpr (std::is_same_v<M, SparseMatrix>) {
    z1 = sparse_svd(a, k, 1.0, rng).z;
  } else {
    z1 = randomized_svd(a, k, 1.0, rng).z;
  }
  timer.mark("approx_svd");
  auto lev1 = leverage_stage(z1, p.h1, cfg.retry_budget, rng);
  dec.diagnostics.column_retries = lev1.retries;
  const DenseMatrix az1 = a * z1;
  const DenseMatrix e1 = sampled_residual_columns(a, az1, z1, lev1.sample);
  const WeightedSelection s1 = sparse ? bss_sampling_sparse(lev1.vm, e1.transpose(), p.c1, 0.5, rng)
                                      : bss_sampling(lev1.vm, e1.transpose(), p.c1);
  std::vector<Index> cols;
  std::vector<double> cscale;
  append_weighted(s1, lev1.sample.indices, lev1.sample.scale, cols, cscale);
  const DenseMatrix c1 = gather_columns(a, cols) * to_vector(cscale).asDiagonal();
  timer.mark("column_selection");
  AdaptiveSample c2;
  if constexpr (std::is_same_v<M, SparseMatrix>) {
    c2 = adaptive_cols_sparse(a, c1, p.c2, rng);
  } else {
    c2 = adaptive_cols(a, c1, 1.0, p.c2, rng);
  }
  for (Index j : c2.indices) {
    cols.push_back(j);
    cscale.push_back(1.0);
  }
  dec.c = gather_columns(a, cols);
  timer.mark("adaptive_columns");

  // Rows.
  const SubspaceFactor sf = sparse ? approx_subspace_svd(a, dec.c, k, cfg.eps, rng) : best_subspace_svd(a, dec.c, k);
  const RowBasis rb = row_basis(sf);
  timer.mark("subspace_svd");
  auto lev2 = leverage_stage(rb.z2, p.h2, cfg.retry_budget, rng);
  dec.diagnostics.row_retries = lev2.retries;
  const DenseMatrix z2ta = z_transpose_a(a, rb.z2);
  const DenseMatrix e2 = sampled_residual_rows(a, z2ta, rb.z2, lev2.sample);
  const WeightedSelection s2 = sparse ? bss_sampling_sparse(lev2.vm, e2, p.r1, 0.5, rng)
                                      : bss_sampling(lev2.vm, e2, p.r1);
  std::vector<Index> rows;
  std::vector<double> rscale;
  append_weighted(s2, lev2.sample.indices, lev2.sample.scale, rows, rscale);
  const DenseMatrix r1 = to_vector(rscale).asDiagonal() * gather_rows(a, rows);
  timer.mark("row_selection");
  AdaptiveSample r2;
  if constexpr (std::is_same_v<M, SparseMatrix>) {
    r2 = adaptive_rows_sparse(a, rb.z2, r1, p.r2, rng);
  } else {
    r2 = adaptive_rows(a, rb.z2, r1, p.r2, rng);
  }
  for (Index i : r2.indices) {
    rows.push_back(i);
    rscale.push_back(1.0);
  }
  dec.r = gather_rows(a, rows);
  timer.mark("adaptive_rows");

  // Intersection.
  dec.u_left = rb.left;
  if constexpr (std::is_same_v<M, SparseMatrix>) {
    const auto w = make_sse(a.rows(), p.xi_u, rng);
    const DenseMatrix ar = a * pinv(dec.r);
    dec.u_right = left_pinv_product(apply_sse_compact(w, rb.z2), apply_sse_compact(w, ar));
  } else {
    dec.u_right = right_pinv_product(z2ta, dec.r);
  }
  finish_decomposition(dec);
  timer.mark("intersection");

  dec.column_indices = std::move(cols);
  dec.column_scales = to_vector(cscale);
  dec.row_indices = std::move(rows);
  dec.row_scales = to_vector(rscale);
  if constexpr (!std::is_same_v<M, SparseMatrix>) {
    record_dense_residuals(a, c1, rb.z2, dec.diagnostics);
    timer.mark("diagnostics");
  }
  return dec;
}

void check_config(const CurConfig& cfg) {
  if (cfg.k < 1) throw ArgumentError("cur: k must be at least 1");
  if (!(cfg.eps > 0.0 && cfg.eps <= 1.0)) throw ArgumentError("cur: eps must lie in (0, 1]");
  if (cfg.retry_budget < 0) throw ArgumentError("cur: negative retry budget");
}

}  // namespace

const char* to_string(Variant v) {
  switch (v) {
    case Variant::linear: return "linear";
    case Variant::sparse: return "sparse";
    case Variant::deterministic: return "deterministic";
  }
  return "unknown";
}

const char* to_string(Fidelity f) { return f == Fidelity::paper ? "paper" : "heuristic"; }

Variant parse_variant(const std::string& s) {
  if (s == "linear") return Variant::linear;
  if (s == "sparse") return Variant::sparse;
  if (s == "deterministic") return Variant::deterministic;
  throw ArgumentError("unknown variant: " + s);
}

Fidelity parse_fidelity(const std::string& s) {
  if (s == "paper") return Fidelity::paper;
  if (s == "heuristic") return Fidelity::heuristic;
  throw ArgumentError("unknown fidelity: " + s);
}

CurParameters resolve_parameters(const CurConfig& cfg, Index m, Index n) {
  check_config(cfg);
  const double k = static_cast<double>(cfg.k);
  const double f = cfg.fidelity == Fidelity::paper ? paper_factor(cfg.variant) : 8.0;
  CurParameters p;
  p.c1 = cfg.c1.value_or(4 * cfg.k);
  p.r1 = cfg.r1.value_or(4 * cfg.k);
  p.c2 = cfg.c2.value_or(ceil_index(f * k / cfg.eps));
  p.r2 = cfg.r2.value_or(ceil_index(f * k / cfg.eps));
  p.h1 = cfg.h1.value_or(ceil_index(16.0 * k * std::log(20.0 * k)));
  p.h2 = cfg.h2.value_or(ceil_index(8.0 * k * std::log(20.0 * k)));
  p.xi_u = cfg.xi_u.value_or(ceil_index(40.0 * k * k / (cfg.eps * cfg.eps)));
  if (cfg.fidelity == Fidelity::paper) {
    if (p.c() > n || p.r() > m)
      throw ArgumentError("cur: paper constants need c = " + std::to_string(p.c()) + " <= n and r = " +
                          std::to_string(p.r()) + " <= m");
    if (cfg.variant != Variant::deterministic && (p.h1 > n || p.h2 > m))
      throw ArgumentError("cur: paper constants need h1 <= n and h2 <= m");
  } else {
    p.h1 = std::min(p.h1, n);
    p.h2 = std::min(p.h2, m);
  }
  const Index pool_c = cfg.variant == Variant::deterministic ? n : std::min(p.h1, n);
  const Index pool_r = cfg.variant == Variant::deterministic ? m : std::min(p.h2, m);
  if (p.c1 <= cfg.k || p.c1 > pool_c) throw ArgumentError("cur: c1 must satisfy k < c1 <= candidate pool");
  if (p.r1 <= cfg.k || p.r1 > pool_r) throw ArgumentError("cur: r1 must satisfy k < r1 <= candidate pool");
  if (p.c2 < 1 || p.r2 < 1 || p.xi_u < 1) throw ArgumentError("cur: sample sizes must be positive");
  if (cfg.k >= std::min(m, n)) throw ArgumentError("cur: k must be below min(m, n)");
  return p;
}

ColumnStage linear_column_stage(const DenseMatrix& a, Index k, Index h1, Index c1, int retry_budget, Rng& rng) {
  const DenseMatrix z1 = randomized_svd(a, k, 1.0, rng).z;
  auto lev = leverage_stage(z1, h1, retry_budget, rng);
  const DenseMatrix e1 = sampled_residual_columns(a, DenseMatrix(a * z1), z1, lev.sample);
  const auto s1 = bss_sampling(lev.vm, e1.transpose(), c1);
  ColumnStage out;
  std::vector<double> scales;
  append_weighted(s1, lev.sample.indices, lev.sample.scale, out.indices, scales);
  out.scales = to_vector(scales);
  out.c1 = gather_columns(a, out.indices) * out.scales.asDiagonal();
  out.retries = lev.retries;
  return out;
}

ColumnStage deterministic_column_stage(const DenseMatrix& a, Index k, Index c1) {
  const DenseMatrix z1 = deterministic_svd(a, k, 1.0).z;
  const DenseMatrix e1t = a.transpose() - z1 * (z1.transpose() * a.transpose());  // E1^T, n x m
  const auto s1 = bss_sampling(z1, e1t, c1);
  ColumnStage out;
  std::vector<double> scales;
  append_weighted(s1, {}, Vector(), out.indices, scales);
  out.scales = to_vector(scales);
  out.c1 = gather_columns(a, out.indices) * out.scales.asDiagonal();
  return out;
}

CurDecomposition cur_linear_time(const DenseMatrix& a, const CurConfig& cfg, Rng& rng) {
  require_finite(a, "cur_linear_time");
  CurConfig c = cfg;
  c.variant = Variant::linear;
  return randomized_pipeline(a, c, rng, false);
}

CurDecomposition cur_input_sparsity(const SparseMatrix& a, const CurConfig& cfg, Rng& rng) {
  require_finite(a, "cur_input_sparsity");
  CurConfig c = cfg;
  c.variant = Variant::sparse;
  resolve_parameters(c, a.rows(), a.cols());
  if (!has_rank_at_least(a, c.k)) throw ArgumentError("cur_input_sparsity: k exceeds rank(A)");
  return randomized_pipeline(a, c, rng, true);
}

CurDecomposition cur_deterministic(const DenseMatrix& a, const CurConfig& cfg) {
  require_finite(a, "cur_deterministic");
  CurConfig c = cfg;
  c.variant = Variant::deterministic;
  CurDecomposition dec = start(c, a.rows(), a.cols());
  dec.diagnostics.exact_svd = true;
  const auto& p = dec.diagnostics.params;
  const Index k = c.k;
  StageTimer timer(dec.diagnostics.stage_seconds);

  const ColumnStage st = deterministic_column_stage(a, k, p.c1);
  timer.mark("column_selection");
  std::vector<Index> cols = st.indices;
  std::vector<double> cscale(st.scales.data(), st.scales.data() + st.scales.size());
  const auto c2 = adaptive_cols_d(a, st.c1, p.c2, k);
  for (Index j : c2.indices) {
    cols.push_back(j);
    cscale.push_back(1.0);
  }
  dec.c = gather_columns(a, cols);
  timer.mark("adaptive_columns");

  const SubspaceFactor sf = best_subspace_svd(a, dec.c, k);
  const RowBasis rb = row_basis(sf);
  timer.mark("subspace_svd");
  const DenseMatrix z2ta = rb.z2.transpose() * a;
  const DenseMatrix e2t = a - rb.z2 * z2ta;  // E2^T, m x n
  const auto s2 = bss_sampling(rb.z2, e2t, p.r1);
  std::vector<Index> rows;
  std::vector<double> rscale;
  append_weighted(s2, {}, Vector(), rows, rscale);
  const DenseMatrix r1 = to_vector(rscale).asDiagonal() * gather_rows(a, rows);
  timer.mark("row_selection");
  const auto r2 = adaptive_rows_d(a, rb.z2, r1, p.r2);
  for (Index i : r2.indices) {
    rows.push_back(i);
    rscale.push_back(1.0);
  }
  dec.r = gather_rows(a, rows);
  timer.mark("adaptive_rows");

  dec.u_left = rb.left;
  dec.u_right = right_pinv_product(z2ta, dec.r);
  finish_decomposition(dec);
  timer.mark("intersection");

  dec.column_indices = std::move(cols);
  dec.column_scales = to_vector(cscale);
  dec.row_indices = std::move(rows);
  dec.row_scales = to_vector(rscale);
  record_dense_residuals(a, st.c1, rb.z2, dec.diagnostics);
  timer.mark("diagnostics");
  return dec;
}

CurDecomposition decompose(const DenseMatrix& a, const CurConfig& cfg) {
  Rng rng(cfg.seed);
  switch (cfg.variant) {
    case Variant::linear: return cur_linear_time(a, cfg, rng);
    case Variant::deterministic: return cur_deterministic(a, cfg);
    case Variant::sparse: {
      SparseMatrix s = a.sparseView(0.0, 0.0);
      s.makeCompressed();
      return cur_input_sparsity(s, cfg, rng);
    }
  }
  throw ArgumentError("decompose: unknown variant");
}

CurDecomposition decompose(const SparseMatrix& a, const CurConfig& cfg) {
  if (cfg.variant == Variant::sparse) {
    Rng rng(cfg.seed);
    return cur_input_sparsity(a, cfg, rng);
  }
  return decompose(to_dense(a), cfg);
}

namespace {

Index rank_of_u(const CurDecomposition& dec) {
  if (dec.u_left.size() > 0 && dec.u_right.size() > 0 && dec.u_left.rows() >= dec.u_left.cols()) {
    Eigen::HouseholderQR<DenseMatrix> f(dec.u_left);
    const DenseMatrix t = f.matrixQR().topRows(dec.u_left.cols()).triangularView<Eigen::Upper>();
    return numerical_rank(t * dec.u_right);
  }
  if (std::min(dec.u.rows(), dec.u.cols()) <= 1000) return numerical_rank(dec.u);
  Eigen::ColPivHouseholderQR<DenseMatrix> f(dec.u);
  f.setThreshold(qr_rank_threshold(dec.u.rows(), dec.u.cols()));
  return f.rank();
}

template <class M>
Evaluation evaluate_impl(const M& a, const CurDecomposition& dec, double opt2) {
  if (dec.c.rows() != a.rows() || dec.r.cols() != a.cols() || dec.u.rows() != dec.c.cols() ||
      dec.u.cols() != dec.r.rows())
    throw ArgumentError("evaluate: decomposition shapes do not match A");
  Evaluation e;
  const DenseMatrix ur = dec.u * dec.r;
  DenseMatrix diff = dec.c * ur;
  diff -= a;
  e.err2 = diff.squaredNorm();
  e.opt2 = opt2;
  const double total = frobenius_sq(a);
  e.relative_error = total > 0.0 ? e.err2 / total : 0.0;
  const double tol = qr_rank_threshold(a.rows(), a.cols());
  e.exact = opt2 <= tol * tol * total;
  e.ratio = e.exact ? 0.0 : e.err2 / opt2;
  e.c = dec.c.cols();
  e.r = dec.r.rows();
  e.rank_u = rank_of_u(dec);
  return e;
}

}  // namespace

Evaluation evaluate(const DenseMatrix& a, const CurDecomposition& dec) {
  return evaluate_impl(a, dec, tail_energy(a, dec.k));
}

Evaluation evaluate(const SparseMatrix& a, const CurDecomposition& dec) {
  return evaluate_impl(a, dec, tail_energy(a, dec.k));
}

Evaluation evaluate(const DenseMatrix& a, const CurDecomposition& dec, double opt2) {
  return evaluate_impl(a, dec, opt2);
}

Evaluation evaluate(const SparseMatrix& a, const CurDecomposition& dec, double opt2) {
  return evaluate_impl(a, dec, opt2);
}

}  // namespace cur
