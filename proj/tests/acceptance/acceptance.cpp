// Acceptance checks AC1-AC9. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. Pass a criterion name (e.g. AC4) to run a
// subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "cur/adaptive.hpp"
#include "cur/adversarial.hpp"
#include "cur/audit.hpp"
#include "cur/cur.hpp"
#include "cur/generate.hpp"
#include "cur/io.hpp"
#include "cur/linalg.hpp"
#include "cur/subset_select.hpp"
#include "cur/subspace.hpp"
#include "oracle.hpp"

namespace fs = std::filesystem;
using namespace cur;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

CurConfig config(Variant v, Fidelity f, Index k, double eps, std::uint64_t seed) {
  CurConfig c;
  c.variant = v;
  c.fidelity = f;
  c.k = k;
  c.eps = eps;
  c.seed = seed;
  return c;
}

// Deterministic CUR, k = 2, eps = 1: ||A - CUR||^2 <= 9 opt^2 on every run.
Outcome ac1() {
  constexpr int kRuns = 20;
  constexpr double kBudget = 600.0;
  Rng data(101);
  int good = 0;
  double worst = 0.0, algo = 0.0;
  for (int t = 0; t < kRuns; ++t) {
    const DenseMatrix a = low_rank_plus_noise(40, 40, 5, 0.1, data);
    const auto t0 = Clock::now();
    const CurDecomposition d = cur_deterministic(a, config(Variant::deterministic, Fidelity::paper, 2, 1.0, 0));
    algo += since(t0);
    const double opt = oracle::tail(a, 2);
    const double ratio = (a - d.c * d.u * d.r).squaredNorm() / opt;
    worst = std::max(worst, ratio);
    good += ratio <= 9.0 * (1 + 1e-9) && d.c.cols() == 28 && d.r.rows() == 28;
  }
  return {good == kRuns && algo <= kBudget,
          fmt("%d/%d runs within 9 opt^2, worst ratio %.4f, c = r = 28, %.1fs (budget %.0fs)", good, kRuns, worst,
              algo, kBudget)};
}

// Deterministic first column stage: ||A - C1 C1^+ A||^2 <= 10 opt^2.
Outcome ac2() {
  constexpr int kRuns = 50;
  constexpr double kBudget = 60.0;
  Rng data(202);
  int good = 0;
  double worst = 0.0, algo = 0.0;
  for (int t = 0; t < kRuns; ++t) {
    const DenseMatrix a = t % 2 ? low_rank_plus_noise(200, 150, 6, 0.05, data) : oracle::uniform(200, 150, data);
    const auto t0 = Clock::now();
    const ColumnStage s = deterministic_column_stage(a, 4, 16);
    algo += since(t0);
    const DenseMatrix q = oracle::orth(s.c1);
    const double ratio = (a - q * (q.transpose() * a)).squaredNorm() / oracle::tail(a, 4);
    worst = std::max(worst, ratio);
    good += ratio <= 10.0 * (1 + 1e-9);
  }
  return {good == kRuns && algo <= kBudget,
          fmt("%d/%d runs within 10 opt^2, worst ratio %.4f, %.2fs (budget %.0fs)", good, kRuns, worst, algo,
              kBudget)};
}

// Dual-set sparsification contract on every instance.
Outcome ac3() {
  constexpr int kRuns = 100;
  constexpr double kBudget = 60.0;
  Rng data(303);
  int good = 0;
  double algo = 0.0, min_margin = 1e300;
  for (int t = 0; t < kRuns; ++t) {
    const Index k = 1 + t % 6;
    const Index n = 30 + (37 * t) % 271;
    const Index r = k + 1 + (t / 6) % (3 * k);
    const DenseMatrix v = oracle::random_orthonormal(n, k, data);
    const DenseMatrix a = oracle::uniform(n, 1 + t % 12, data);
    const auto t0 = Clock::now();
    const WeightedSelection s = bss_sampling(v, a, r);
    algo += since(t0);
    const DenseMatrix sm = s.matrix();
    const double floor = 1.0 - std::sqrt(static_cast<double>(k) / static_cast<double>(r));
    const double sk = oracle::sigma_k(v.transpose() * sm, k);
    min_margin = std::min(min_margin, sk - floor);
    good += sk >= floor * (1 - 1e-9) && (a.transpose() * sm).squaredNorm() <= a.squaredNorm() * (1 + 1e-9) &&
            s.nonzeros() <= r;
  }
  return {good == kRuns && algo <= kBudget,
          fmt("%d/%d instances satisfy both bounds, min spectral margin %.3g, %.2fs (budget %.0fs)", good, kRuns,
              min_margin, algo, kBudget)};
}

// Linear-time CUR with paper constants on 4000 x 4000, k = 2, eps = 0.9.
Outcome ac4() {
  constexpr int kSeeds = 10;
  constexpr int kExactSeeds = 3;
  constexpr double kBudget = 900.0;
  constexpr double kBound = 1.0 + 20.0 * 0.9;
  const auto t0 = Clock::now();
  Rng data(404);
  const DenseMatrix a = low_rank_plus_noise(4000, 4000, 2, 0.1, data);
  const double opt = tail_energy(a, 2);
  int good = 0;
  double worst = 0.0;
  Index c = 0;
  for (int s = 0; s < kSeeds; ++s) {
    try {
      const CurDecomposition d = decompose(a, config(Variant::linear, Fidelity::paper, 2, 0.9, s));
      const Evaluation e = evaluate(a, d, opt);
      c = e.c;
      worst = std::max(worst, e.ratio);
      good += e.ratio <= kBound;
    } catch (const std::exception& e) {
      std::cerr << "AC4 seed " << s << ": " << e.what() << "\n";
    }
  }
  const DenseMatrix exact = low_rank_plus_noise(4000, 4000, 2, 0.0, data);
  int exact_ok = 0, exact_done = 0;
  double worst_rel = 0.0;
  for (int s = 0; s < kExactSeeds; ++s) {
    try {
      const CurDecomposition d = decompose(exact, config(Variant::linear, Fidelity::paper, 2, 0.9, 100 + s));
      const Evaluation e = evaluate(exact, d);
      ++exact_done;
      worst_rel = std::max(worst_rel, e.relative_error);
      exact_ok += e.relative_error <= 1e-8;
    } catch (const std::exception& e) {
      std::cerr << "AC4 exact seed " << s << ": " << e.what() << "\n";
    }
  }
  const double secs = since(t0);
  return {good >= 4 && exact_done > 0 && exact_ok == exact_done && secs <= kBudget,
          fmt("%d/%d seeds within %.1f opt^2 (need 4), worst ratio %.4f, c = %ld; exact rank 2: %d/%d seeds with "
              "relative error <= 1e-8 (worst %.2g); %.1fs (budget %.0fs)",
              good, kSeeds, kBound, worst, static_cast<long>(c), exact_ok, exact_done, worst_rel, secs, kBudget)};
}

// Input-sparsity CUR: heuristic end-to-end run, component contracts, allocation audit.
Outcome ac5() {
  constexpr int kSeeds = 100;
  constexpr double kBudget = 600.0;
  Rng data(505);
  const SparseMatrix a = sparse_low_rank_plus_noise(2000, 1500, 5, 0.0025, 0.05, data);
  const double opt = tail_energy(a, 5);
  const std::ptrdiff_t mn = a.rows() * a.cols();

  int ratio_good = 0, audit_good = 0;
  double worst = 0.0, algo = 0.0;
  std::ptrdiff_t largest = 0;
  for (int s = 0; s < kSeeds; ++s) {
    CurDecomposition d;
    {
      audit::DenseAllocationScope scope(mn);
      const auto t0 = Clock::now();
      try {
        d = decompose(a, config(Variant::sparse, Fidelity::heuristic, 5, 0.5, s));
      } catch (const std::exception& e) {
        std::cerr << "AC5 seed " << s << ": " << e.what() << "\n";
        continue;
      }
      algo += since(t0);
      largest = std::max(largest, scope.largest());
      audit_good += scope.over_threshold() == 0;
    }
    const Evaluation e = evaluate(a, d, opt);
    worst = std::max(worst, e.ratio);
    ratio_good += e.ratio <= 2.0;
  }
  const bool part_a = ratio_good >= 80 && algo <= kBudget;
  const bool part_c = audit_good == kSeeds;

  // Sparse dual-set sampling at eps = 0.5, r = 4k.
  int spectral_good = 0, frob_good = 0;
  for (int s = 0; s < kSeeds; ++s) {
    Rng rng(5000 + s);
    const Index k = 1 + s % 4;
    const DenseMatrix v = oracle::random_orthonormal(30, k, rng);
    const DenseMatrix b = oracle::uniform(30, 500, rng);
    const Index r = 4 * k;
    const WeightedSelection w = bss_sampling_sparse(v, b, r, 0.5, rng);
    const DenseMatrix sm = w.matrix();
    spectral_good += w.nonzeros() <= r &&
                     oracle::sigma_k(v.transpose() * sm, k) >= (1 - std::sqrt(double(k) / double(r))) * (1 - 1e-9);
    frob_good += (b.transpose() * sm).squaredNorm() <= 3 * b.squaredNorm();
  }

  // Sketched adaptive column probabilities against the exact residual norms.
  const DenseMatrix dense = to_dense(a);
  std::vector<Index> first(20);
  for (Index j = 0; j < 20; ++j) first[static_cast<std::size_t>(j)] = 3 * j;
  const DenseMatrix v = gather_columns(dense, first);
  const DenseMatrix q = oracle::orth(v);
  const DenseMatrix resid = dense - q * (q.transpose() * dense);
  const Vector truth = resid.colwise().squaredNorm().transpose() / resid.squaredNorm();
  int floor_good = 0;
  for (int s = 0; s < kSeeds; ++s) {
    Rng rng(7000 + s);
    const AdaptiveSample smp = adaptive_cols_sparse(a, v, 40, rng);
    floor_good += (smp.probabilities.array() >= truth.array() / 3.0 - 1e-15).all();
  }
  const bool part_b = spectral_good == kSeeds && frob_good >= 95 && floor_good >= 99;

  return {part_a && part_b && part_c,
          fmt("(a) fill %.3f%%, %d/%d seeds ratio <= 2 (need 80), worst %.4f, %.1fs (budget %.0fs); "
              "(b) spectral %d/%d, Frobenius <= 3x %d/%d (need 95), probability floor %d/%d (need 99); "
              "(c) %d/%d runs without an allocation >= m n = %ld, largest %ld",
              100.0 * double(a.nonZeros()) / double(mn), ratio_good, kSeeds, worst, algo, kBudget, spectral_good,
              kSeeds, frob_good, kSeeds, floor_good, kSeeds, audit_good, kSeeds, static_cast<long>(mn),
              static_cast<long>(largest))};
}

// Derandomized adaptive rows: exact bound on every instance.
Outcome ac6() {
  constexpr int kRuns = 20;
  constexpr double kBudget = 120.0;
  Rng data(606);
  int good = 0;
  double algo = 0.0, worst = 0.0;
  for (int t = 0; t < kRuns; ++t) {
    const DenseMatrix a = oracle::uniform(12, 10, data);
    const DenseMatrix v = gaussian(12, 3, data);
    const DenseMatrix r1 = a.topRows(2);
    const double rho = static_cast<double>(oracle::rank(v));
    const DenseMatrix pv = v * oracle::pinv(v);
    const double bound =
        (a - pv * a).squaredNorm() + 4.0 * rho / 4.0 * (a - a * oracle::pinv(r1) * r1).squaredNorm();
    const auto t0 = Clock::now();
    const DerandomizedSample s = adaptive_rows_d(a, v, r1, 4);
    algo += since(t0);
    DenseMatrix r(6, a.cols());
    r.topRows(2) = r1;
    for (std::size_t j = 0; j < s.indices.size(); ++j) r.row(2 + static_cast<Index>(j)) = a.row(s.indices[j]);
    const double direct = (a - pv * a * oracle::pinv(r) * r).squaredNorm();
    worst = std::max(worst, direct / bound);
    good += s.indices.size() == 4u && direct <= bound * (1 + 1e-9);
  }
  return {good == kRuns && algo <= kBudget,
          fmt("%d/%d instances within the bound, worst error/bound %.4f, %.1fs (budget %.0fs)", good, kRuns, worst,
              algo, kBudget)};
}

// Rank-constrained U beats random rank-k competitors.
Outcome ac7() {
  constexpr int kRuns = 50;
  constexpr int kCompetitors = 1000;
  constexpr double kBudget = 60.0;
  Rng data(707);
  int good = 0;
  double algo = 0.0;
  for (int t = 0; t < kRuns; ++t) {
    const Index k = 1 + t % 3;
    const Index m = 8 + t % 8, n = 8 + (3 * t) % 8;
    const DenseMatrix a = t % 2 ? oracle::uniform(m, n, data) : low_rank_plus_noise(m, n, 4, 0.1, data);
    const Index nc = k + 1 + t % 4, nr = k + 2 + t % 3;
    std::vector<Index> cols, rows;
    for (Index j = 0; j < nc; ++j) cols.push_back(static_cast<Index>(uniform_below(data, std::uint64_t(n))));
    for (Index i = 0; i < nr; ++i) rows.push_back(static_cast<Index>(uniform_below(data, std::uint64_t(m))));
    const DenseMatrix c = gather_columns(a, cols), r = gather_rows(a, rows);
    const auto t0 = Clock::now();
    const DenseMatrix u = rank_constrained_u(a, c, r, k);
    algo += since(t0);
    const double best = (a - c * u * r).squaredNorm();
    bool ok = oracle::rank(u, 1e-9) <= k;
    for (int q = 0; q < kCompetitors && ok; ++q) {
      const DenseMatrix cand = q % 2 ? DenseMatrix(gaussian(nc, k, data) * gaussian(k, nr, data))
                                     : oracle::best_rank_k(u + 1e-3 * gaussian(nc, nr, data), k);
      ok = (a - c * cand * r).squaredNorm() >= best * (1 - 1e-10);
    }
    good += ok;
  }
  return {good == kRuns && algo <= kBudget,
          fmt("%d/%d instances: rank(U) <= k and no competitor of %d does better, %.2fs (budget %.0fs)", good, kRuns,
              kCompetitors, algo, kBudget)};
}

// Lower-bound instance: spectrum, opt^2, brute-force single column.
Outcome ac8() {
  constexpr double kBudget = 60.0;
  const auto t0 = Clock::now();
  int spectrum_good = 0, opt_good = 0, cases = 0;
  double worst_sigma = 0.0, worst_opt = 0.0;
  for (Index n = 2; n <= 20; ++n) {
    for (Index k = 1; k <= 3; ++k) {
      ++cases;
      const AdversarialInstance inst = gen_adversarial(n, k, 1e-10);
      const Vector s = oracle::sigma(to_dense(inst.a));
      const std::vector<double> closed = inst.sigma_sq_closed_form();
      double dev = 0.0;
      for (Index i = 0; i < inst.t; ++i) dev = std::max(dev, std::abs(s(i) * s(i) - closed[static_cast<std::size_t>(i)]));
      worst_sigma = std::max(worst_sigma, dev);
      spectrum_good += dev <= 1e-9;
      const double ell = static_cast<double>(inst.ell);
      const double formula = ell * (1 + 2 * inst.alpha * inst.alpha / static_cast<double>(k));
      const double opt_dev = std::abs(oracle::tail(to_dense(inst.a), k) - formula) / formula;
      worst_opt = std::max(worst_opt, opt_dev);
      opt_good += opt_dev <= 1e-9 && std::abs(inst.opt2 - formula) <= 1e-15 * formula;
    }
  }
  const AdversarialInstance small = gen_adversarial(4, 1, 1e-10);
  const BruteForceResult bf = brute_force_best_columns(to_dense(small.a), 1, 1);
  const double ratio = bf.min_error / small.opt2;
  const double threshold = 1.0 + 1.0 / 2.0 - 0.5;
  const bool brute_ok = ratio >= threshold * (1 - 1e-12);
  const double secs = since(t0);
  return {spectrum_good == cases && opt_good == cases && brute_ok && secs <= kBudget,
          fmt("spectrum %d/%d (max dev %.2g), opt^2 %d/%d (max rel dev %.2g), best single column ratio %.17g vs "
              "threshold %.17g over %ld subsets, %.2fs (budget %.0fs)",
              spectrum_good, cases, worst_sigma, opt_good, cases, worst_opt, ratio, threshold,
              static_cast<long>(bf.subsets), secs, kBudget)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

nlohmann::json without_timings(nlohmann::json j) {
  if (j.is_object()) {
    for (const char* key : {"seconds", "total_seconds", "stage_seconds"}) j.erase(key);
    for (auto& [key, value] : j.items()) value = without_timings(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = without_timings(value);
  }
  return j;
}

// Same seed and configuration give byte-identical artifacts for every variant.
Outcome ac9() {
  const fs::path root = fs::temp_directory_path() / "cur_acceptance_ac9";
  fs::remove_all(root);
  fs::create_directories(root);
  Rng data(909);
  write_matrix(root / "dense.mtx", low_rank_plus_noise(60, 50, 4, 0.1, data));
  write_matrix(root / "small.mtx", low_rank_plus_noise(40, 40, 5, 0.1, data));
  write_matrix(root / "sparse.mtx", sparse_low_rank_plus_noise(300, 200, 3, 0.05, 0.05, data));
  struct Case {
    const char* variant;
    const char* input;
    const char* fidelity;
    const char* eps;
  };
  const Case cases[] = {{"linear", "dense.mtx", "heuristic", "0.5"},
                        {"sparse", "sparse.mtx", "heuristic", "0.5"},
                        {"deterministic", "small.mtx", "paper", "1"}};
  const char* artifacts[] = {"C.mtx", "U.mtx", "R.mtx", "columns.mtx", "rows.mtx"};
  int good = 0;
  std::string notes;
  for (const Case& c : cases) {
    bool ok = true;
    for (const char* run : {"a", "b"}) {
      std::ostringstream out, err;
      const int code = cli::run({"decompose", "--input", (root / c.input).string(), "--rank", "2",
                                 "--epsilon", c.eps, "--variant", c.variant, "--fidelity", c.fidelity, "--seed", "17",
                                 "--trials", "3", "--out-dir", (root / c.variant / run).string()},
                                out, err);
      if (code != cli::kExitOk) {
        ok = false;
        notes += std::string(" ") + c.variant + " exit " + std::to_string(code) + ": " + err.str();
      }
    }
    if (!ok) continue;
    for (const char* f : artifacts) {
      const std::string x = slurp(root / c.variant / "a" / f), y = slurp(root / c.variant / "b" / f);
      ok = ok && !x.empty() && x == y;
    }
    const auto ja = nlohmann::json::parse(slurp(root / c.variant / "a" / "report.json"));
    const auto jb = nlohmann::json::parse(slurp(root / c.variant / "b" / "report.json"));
    ok = ok && without_timings(ja) == without_timings(jb);
    if (!ok) notes += std::string(" ") + c.variant + " differs;";
    good += ok;
  }
  fs::remove_all(root);
  return {good == 3, fmt("%d/3 variants reproduce C, U, R, index files byte for byte and the report up to timings%s",
                         good, notes.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}};
  std::set<std::string> wanted(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& [name, check] : checks) {
    if (!wanted.empty() && !wanted.count(name)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << name << (o.pass ? " PASS " : " FAIL ") << fmt("[%.1fs] ", since(t0)) << o.detail << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
