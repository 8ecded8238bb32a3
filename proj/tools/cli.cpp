#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cur/adversarial.hpp"
#include "cur/cur.hpp"
#include "cur/error.hpp"
#include "cur/generate.hpp"
#include "cur/io.hpp"
#include "cur/linalg.hpp"
#include "cur/report.hpp"

namespace cur::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct DecomposeOptions {
  std::string input;
  Index k = 0;
  double eps = 0.5;
  std::string variant = "linear";
  std::uint64_t seed = 0;
  int trials = 1;
  std::string fidelity = "paper";
  std::string out_dir;
};

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ArgumentError("cannot open " + p.string() + " for writing");
  out << text;
}

InputDescriptor describe(const std::string& path, const AnyMatrix& m) {
  InputDescriptor d;
  d.path = path;
  std::visit([&](const auto& x) {
    d.rows = x.rows();
    d.cols = x.cols();
    d.nnz = nnz(x);
  }, m);
  d.sparse = std::holds_alternative<SparseMatrix>(m);
  return d;
}

double opt2_of(const AnyMatrix& m, Index k) {
  return std::visit([&](const auto& x) { return tail_energy(x, k); }, m);
}

CurDecomposition run_variant(const AnyMatrix& m, const CurConfig& cfg) {
  if (cfg.variant == Variant::sparse) return decompose(as_sparse(m), cfg);
  if (const auto* d = std::get_if<DenseMatrix>(&m)) return decompose(*d, cfg);
  return decompose(to_dense(std::get<SparseMatrix>(m)), cfg);
}

Evaluation evaluate_any(const AnyMatrix& m, const CurDecomposition& dec, double opt2) {
  return std::visit([&](const auto& x) { return evaluate(x, dec, opt2); }, m);
}

struct TrialOutcome {
  CurDecomposition dec;
  RunReport report;
};

/// Runs `trials` seeds (the first is `seed` itself) and keeps the lowest ratio.
TrialOutcome best_of_trials(const AnyMatrix& m, const std::string& input_name, CurConfig cfg, int trials) {
  if (trials < 1) throw ArgumentError("--trials must be at least 1");
  const auto t0 = Clock::now();
  const double opt2 = opt2_of(m, cfg.k);
  TrialOutcome best;
  bool have = false;
  std::vector<TrialRecord> log;
  const std::uint64_t base = cfg.seed;
  const int effective = cfg.variant == Variant::deterministic ? 1 : trials;
  for (int t = 0; t < effective; ++t) {
    cfg.seed = t == 0 ? base : derive_seed(base, static_cast<std::uint64_t>(t));
    const auto ts = Clock::now();
    CurDecomposition dec = run_variant(m, cfg);
    const Evaluation ev = evaluate_any(m, dec, opt2);
    log.push_back({cfg.seed, ev.ratio, seconds_since(ts)});
    if (!have || ev.ratio < best.report.evaluation.ratio) {
      have = true;
      best.report.evaluation = ev;
      best.report.best_trial = t;
      best.report.best_seed = cfg.seed;
      best.report.diagnostics = dec.diagnostics;
      best.dec = std::move(dec);
    }
  }
  RunReport& r = best.report;
  r.input = describe(input_name, m);
  r.config = cfg;
  r.config.seed = base;
  r.trials = effective;
  r.trial_log = std::move(log);
  r.total_seconds = seconds_since(t0);
  return best;
}

void write_artifacts(const fs::path& dir, const CurDecomposition& dec, const RunReport& report) {
  fs::create_directories(dir);
  write_matrix(dir / "C.mtx", dec.c);
  write_matrix(dir / "U.mtx", dec.u);
  write_matrix(dir / "R.mtx", dec.r);
  write_indices(dir / "columns.mtx", dec.column_indices);
  write_indices(dir / "rows.mtx", dec.row_indices);
  write_text(dir / "report.json", serialize(report));
}

int cmd_decompose(const DecomposeOptions& o, std::ostream& out) {
  CurConfig cfg;
  cfg.k = o.k;
  cfg.eps = o.eps;
  cfg.variant = parse_variant(o.variant);
  cfg.fidelity = parse_fidelity(o.fidelity);
  cfg.seed = o.seed;
  std::string dir = o.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("CUR_OUT_DIR");
    dir = env && *env ? env : "cur_out";
  }
  const AnyMatrix a = read_matrix(fs::path(o.input));
  const TrialOutcome best = best_of_trials(a, o.input, cfg, o.trials);
  write_artifacts(dir, best.dec, best.report);
  const Evaluation& e = best.report.evaluation;
  out << "ratio " << e.ratio << " err2 " << e.err2 << " opt2 " << e.opt2 << " c " << e.c << " r " << e.r
      << " rank_u " << e.rank_u << " seed " << best.report.best_seed << " dir " << dir << "\n";
  return kExitOk;
}

struct VerifyOptions {
  std::string input;
  std::string dir;
};

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  const AnyMatrix a = read_matrix(fs::path(o.input));
  const fs::path dir(o.dir);
  const RunReport report = parse_report(read_text(dir / "report.json"));
  CurDecomposition dec;
  dec.c = as_dense(read_matrix(dir / "C.mtx"));
  dec.u = as_dense(read_matrix(dir / "U.mtx"));
  dec.r = as_dense(read_matrix(dir / "R.mtx"));
  dec.column_indices = read_indices(dir / "columns.mtx");
  dec.row_indices = read_indices(dir / "rows.mtx");
  dec.k = report.config.k;

  const DenseMatrix dense = as_dense(a);
  bool ok = true;
  try {
    if (gather_columns(dense, dec.column_indices) != dec.c) {
      err << "C is not the listed columns of the input\n";
      ok = false;
    }
    if (gather_rows(dense, dec.row_indices) != dec.r) {
      err << "R is not the listed rows of the input\n";
      ok = false;
    }
  } catch (const ArgumentError& e) {
    err << e.what() << "\n";
    ok = false;
  }
  const Evaluation e = evaluate_any(a, dec, opt2_of(a, dec.k));
  const double reported = report.evaluation.ratio;
  const double diff = std::abs(e.ratio - reported);
  const bool match = diff <= 1e-12 * std::max(1.0, std::abs(reported));
  if (!match) err << "ratio " << e.ratio << " differs from reported " << reported << "\n";
  json j{{"evaluation", e}, {"reported_ratio", reported}, {"ratio_matches", match}, {"factors_match_input", ok}};
  out << j.dump(2) << "\n";
  return ok && match ? kExitOk : kExitNumerical;
}

struct AdversarialOptions {
  Index n = 0;
  Index k = 0;
  double alpha = 1e-10;
  std::string out;
};

int cmd_gen_adversarial(const AdversarialOptions& o, std::ostream& out) {
  const AdversarialInstance inst = gen_adversarial(o.n, o.k, o.alpha);
  write_matrix(fs::path(o.out), inst.a);
  json meta{{"n", inst.n}, {"k", inst.k}, {"alpha", inst.alpha}, {"t", inst.t}, {"ell", inst.ell}, {"opt2", inst.opt2}};
  out << meta.dump() << "\n";
  return kExitOk;
}

AnyMatrix suite_matrix(const json& entry, const fs::path& base) {
  if (entry.contains("input")) {
    fs::path p = entry.at("input").get<std::string>();
    if (p.is_relative()) p = base / p;
    return read_matrix(p);
  }
  const json& g = entry.at("generate");
  const std::string kind = g.at("kind").get<std::string>();
  Rng rng(g.value("seed", std::uint64_t{1}));
  const Index m = g.at("m").get<Index>();
  const Index n = g.at("n").get<Index>();
  if (kind == "low_rank") return low_rank_plus_noise(m, n, g.at("rank").get<Index>(), g.value("noise", 0.0), rng);
  if (kind == "sparse") return random_sparse(m, n, g.at("density").get<double>(), rng);
  if (kind == "sparse_low_rank")
    return sparse_low_rank_plus_noise(m, n, g.at("rank").get<Index>(), g.at("density").get<double>(),
                                      g.value("noise", 0.0), rng);
  throw ArgumentError("unknown generator kind '" + kind + "'");
}

json run_suite_entry(const json& entry, const fs::path& base, std::uint64_t fallback_seed) {
  const std::string name = entry.value("name", std::string("entry"));
  const AnyMatrix a = suite_matrix(entry, base);
  CurConfig cfg;
  cfg.k = entry.at("k").get<Index>();
  cfg.eps = entry.at("epsilon").get<double>();
  cfg.variant = parse_variant(entry.value("variant", std::string("linear")));
  cfg.fidelity = parse_fidelity(entry.value("fidelity", std::string("heuristic")));
  cfg.seed = entry.value("seed", fallback_seed);
  const TrialOutcome best = best_of_trials(a, name, cfg, entry.value("trials", 1));
  return json{{"name", name}, {"report", best.report}};
}

struct BenchOptions {
  std::string suite;
  std::string out;
  int jobs = 1;
};

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  const fs::path suite_path(o.suite);
  json suite;
  try {
    suite = json::parse(read_text(suite_path));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("suite: ") + e.what(), 1);
  }
  const json entries = suite.is_array() ? suite : suite.at("entries");
  const fs::path base = suite_path.parent_path();
  if (o.jobs < 1) throw ArgumentError("--jobs must be at least 1");

  json results = json::array();
  bool failed = false;
  std::vector<std::future<json>> pending;
  auto drain = [&] {
    for (auto& f : pending) {
      try {
        results.push_back(f.get());
      } catch (const std::exception& e) {
        results.push_back(json{{"error", e.what()}});
        failed = true;
      }
    }
    pending.clear();
  };
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const json entry = entries[i];
    const std::uint64_t seed = derive_seed(0, i);
    pending.push_back(std::async(o.jobs > 1 ? std::launch::async : std::launch::deferred,
                                 [entry, base, seed] { return run_suite_entry(entry, base, seed); }));
    if (static_cast<int>(pending.size()) >= o.jobs) drain();
  }
  drain();
  const std::string text = results.dump(2) + "\n";
  if (o.out.empty()) out << text;
  else write_text(o.out, text);
  return failed ? kExitNumerical : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CUR matrix decompositions"};
  app.require_subcommand(1);

  DecomposeOptions dopt;
  auto* dec = app.add_subcommand("decompose", "Compute C, U, R for a Matrix Market input");
  dec->add_option("--input", dopt.input, "Matrix Market file")->required()->check(CLI::ExistingFile);
  dec->add_option("--rank", dopt.k, "Target rank k")->required()->check(CLI::PositiveNumber);
  dec->add_option("--epsilon", dopt.eps, "Accuracy parameter in (0, 1]");
  dec->add_option("--variant", dopt.variant, "linear | sparse | deterministic")
      ->check(CLI::IsMember({"linear", "sparse", "deterministic"}));
  dec->add_option("--seed", dopt.seed, "Random seed");
  dec->add_option("--trials", dopt.trials, "Independent seeds; the best ratio is kept")->check(CLI::PositiveNumber);
  dec->add_option("--fidelity", dopt.fidelity, "paper | heuristic")->check(CLI::IsMember({"paper", "heuristic"}));
  dec->add_option("--out-dir", dopt.out_dir, "Output directory (default $CUR_OUT_DIR or ./cur_out)");

  VerifyOptions vopt;
  auto* ver = app.add_subcommand("verify", "Recompute the error of a stored decomposition");
  ver->add_option("--input", vopt.input, "Matrix Market file")->required()->check(CLI::ExistingFile);
  ver->add_option("--decomposition", vopt.dir, "Directory written by decompose")->required()->check(CLI::ExistingDirectory);

  AdversarialOptions aopt;
  auto* adv = app.add_subcommand("gen-adversarial", "Write the block-diagonal lower-bound instance");
  adv->add_option("--n", aopt.n, "Block width (> 1)")->required();
  adv->add_option("--k", aopt.k, "Rank parameter")->required();
  adv->add_option("--alpha", aopt.alpha, "Perturbation");
  adv->add_option("--out", aopt.out, "Output Matrix Market file")->required();

  BenchOptions bopt;
  auto* bench = app.add_subcommand("bench", "Run a JSON suite of decompositions");
  bench->add_option("--suite", bopt.suite, "Suite file")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", bopt.out, "Write results here instead of stdout");
  bench->add_option("--jobs", bopt.jobs, "Entries run concurrently");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitArgument;
  }

  try {
    if (*dec) return cmd_decompose(dopt, out);
    if (*ver) return cmd_verify(vopt, out, err);
    if (*adv) return cmd_gen_adversarial(aopt, out);
    if (*bench) return cmd_bench(bopt, out);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitArgument;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitArgument;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitArgument;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitArgument;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const InvariantViolation& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitArgument;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace cur::cli
