#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cur/matrix.hpp"
#include "cur/random.hpp"

namespace cur {

enum class Variant { linear, sparse, deterministic };
enum class Fidelity { paper, heuristic };

const char* to_string(Variant v);
const char* to_string(Fidelity f);
Variant parse_variant(const std::string& s);
Fidelity parse_fidelity(const std::string& s);

struct CurConfig {
  Index k = 1;
  double eps = 0.5;
  Variant variant = Variant::linear;
  Fidelity fidelity = Fidelity::paper;
  std::uint64_t seed = 0;
  int retry_budget = 10;

  std::optional<Index> c1, c2, r1, r2, h1, h2, xi_u;
};

/// Sample sizes after applying defaults and overrides.
struct CurParameters {
  Index c1 = 0, c2 = 0, r1 = 0, r2 = 0, h1 = 0, h2 = 0, xi_u = 0;

  Index c() const { return c1 + c2; }
  Index r() const { return r1 + r2; }
};

/// Defaults: c1 = r1 = 4k, h1 = ceil(16k ln 20k), h2 = ceil(8k ln 20k),
/// xi_u = ceil(40k^2/eps^2); c2 = r2 = ceil(f k / eps) with f = 1620 (linear),
/// 4820 (sparse), 10 (deterministic) in paper mode and f = 8 in heuristic mode.
/// Paper mode requires c <= n, r <= m, h1 <= n, h2 <= m; heuristic mode clamps
/// h1 and h2 to the matrix dimensions.
CurParameters resolve_parameters(const CurConfig& cfg, Index m, Index n);

struct CurDiagnostics {
  CurParameters params;
  int column_retries = 0;
  int row_retries = 0;
  /// ||A - C1 C1^+ A||_F^2 after the first column stage (dense variants only).
  std::optional<double> c1_residual;
  /// ||A - Z2 Z2^T A||_F^2, the error of the rank-k approximation in span(C).
  std::optional<double> span_residual;
  bool exact_svd = false;
  std::map<std::string, double> stage_seconds;
};

struct CurDecomposition {
  std::vector<Index> column_indices;
  Vector column_scales;
  std::vector<Index> row_indices;
  Vector row_scales;
  DenseMatrix c;
  DenseMatrix u;
  DenseMatrix r;
  Index k = 0;
  Variant variant = Variant::linear;
  Fidelity fidelity = Fidelity::paper;
  std::uint64_t seed = 0;
  CurDiagnostics diagnostics;
  /// U = u_left * u_right with inner dimension k, when known.
  DenseMatrix u_left;
  DenseMatrix u_right;
};

/// First column stage of each pipeline, exposed for component checks.
struct ColumnStage {
  std::vector<Index> indices;
  Vector scales;
  DenseMatrix c1;  // scaled columns
  int retries = 0;
};

ColumnStage linear_column_stage(const DenseMatrix& a, Index k, Index h1, Index c1, int retry_budget, Rng& rng);
ColumnStage deterministic_column_stage(const DenseMatrix& a, Index k, Index c1);

CurDecomposition cur_linear_time(const DenseMatrix& a, const CurConfig& cfg, Rng& rng);
CurDecomposition cur_input_sparsity(const SparseMatrix& a, const CurConfig& cfg, Rng& rng);
CurDecomposition cur_deterministic(const DenseMatrix& a, const CurConfig& cfg);

/// Dispatch on cfg.variant with an Rng seeded from cfg.seed.
CurDecomposition decompose(const DenseMatrix& a, const CurConfig& cfg);
CurDecomposition decompose(const SparseMatrix& a, const CurConfig& cfg);

struct Evaluation {
  double err2 = 0.0;
  double opt2 = 0.0;
  double ratio = 0.0;
  double relative_error = 0.0;  // err2 / ||A||_F^2
  Index c = 0;
  Index r = 0;
  Index rank_u = 0;
  bool exact = false;  // opt2 is zero: A has rank <= k
};

Evaluation evaluate(const DenseMatrix& a, const CurDecomposition& dec);
Evaluation evaluate(const SparseMatrix& a, const CurDecomposition& dec);
/// Same with opt2 = ||A - A_k||_F^2 supplied by the caller.
Evaluation evaluate(const DenseMatrix& a, const CurDecomposition& dec, double opt2);
Evaluation evaluate(const SparseMatrix& a, const CurDecomposition& dec, double opt2);

}  // namespace cur
