#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "cur/io.hpp"
#include "cur/report.hpp"
#include "oracle.hpp"

namespace cur {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("cur_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    Rng rng(5);
    write_matrix(dir_ / "a.mtx", low_rank_plus_noise(45, 40, 5, 0.05, rng));
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::vector<std::string>& args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::string input() const { return (dir_ / "a.mtx").string(); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(Cli, DecomposeThenVerify) {
  const std::string out = (dir_ / "d").string();
  ASSERT_EQ(run({"decompose", "--input", input(), "--rank", "2", "--epsilon", "0.5", "--variant", "linear",
                 "--fidelity", "heuristic", "--seed", "3", "--trials", "3", "--out-dir", out}),
            0)
      << err_.str();
  for (const char* f : {"C.mtx", "U.mtx", "R.mtx", "columns.mtx", "rows.mtx", "report.json"})
    EXPECT_TRUE(fs::exists(fs::path(out) / f)) << f;
  const RunReport rep = parse_report(slurp(fs::path(out) / "report.json"));
  EXPECT_EQ(rep.trials, 3);
  EXPECT_EQ(rep.config.seed, 3u);
  EXPECT_EQ(rep.config.fidelity, Fidelity::heuristic);
  ASSERT_EQ(run({"verify", "--input", input(), "--decomposition", out}), 0) << err_.str();
  const auto j = nlohmann::json::parse(out_.str());
  EXPECT_NEAR(j.at("evaluation").at("ratio").get<double>(), rep.evaluation.ratio, 1e-12 * rep.evaluation.ratio);
  EXPECT_TRUE(j.at("factors_match_input").get<bool>());
}

TEST_F(Cli, DeterministicArtifactsAreByteIdentical) {
  const fs::path a = dir_ / "x", b = dir_ / "y";
  for (const fs::path& p : {a, b})
    ASSERT_EQ(run({"decompose", "--input", input(), "--rank", "2", "--epsilon", "1", "--variant", "deterministic",
                   "--out-dir", p.string()}),
              0)
        << err_.str();
  for (const char* f : {"C.mtx", "U.mtx", "R.mtx", "columns.mtx", "rows.mtx"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST_F(Cli, TamperedDecompositionFailsVerification) {
  const fs::path out = dir_ / "t";
  ASSERT_EQ(run({"decompose", "--input", input(), "--rank", "2", "--epsilon", "1", "--variant", "sparse", "--fidelity",
                 "heuristic", "--out-dir", out.string()}),
            0);
  DenseMatrix u = as_dense(read_matrix(out / "U.mtx"));
  u(0, 0) += 1.0;
  write_matrix(out / "U.mtx", u);
  EXPECT_EQ(run({"verify", "--input", input(), "--decomposition", out.string()}), 3);
}

TEST_F(Cli, ArgumentErrorsExitTwo) {
  EXPECT_EQ(run({"decompose", "--input", input(), "--epsilon", "0.5"}), 2);
  EXPECT_EQ(run({"decompose", "--input", input(), "--rank", "2", "--variant", "fast"}), 2);
  EXPECT_EQ(run({"decompose", "--input", (dir_ / "missing.mtx").string(), "--rank", "2"}), 2);
  EXPECT_EQ(run({"decompose", "--input", input(), "--rank", "2", "--epsilon", "0.5"}), 2);  // paper constants too large
  EXPECT_EQ(run({"decompose", "--input", input(), "--rank", "41", "--fidelity", "heuristic"}), 2);
  EXPECT_EQ(run({}), 2);
  std::ofstream(dir_ / "bad.mtx") << "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 9 1\n";
  EXPECT_EQ(run({"decompose", "--input", (dir_ / "bad.mtx").string(), "--rank", "1"}), 2);
  EXPECT_NE(err_.str().find("line 3"), std::string::npos);
}

TEST_F(Cli, OutDirFromEnvironment) {
  const fs::path env_dir = dir_ / "env";
  ::setenv("CUR_OUT_DIR", env_dir.c_str(), 1);
  const int rc = run({"decompose", "--input", input(), "--rank", "2", "--epsilon", "1", "--variant", "deterministic"});
  ::unsetenv("CUR_OUT_DIR");
  ASSERT_EQ(rc, 0) << err_.str();
  EXPECT_TRUE(fs::exists(env_dir / "report.json"));
}

TEST_F(Cli, GenAdversarial) {
  const fs::path out = dir_ / "adv.mtx";
  ASSERT_EQ(run({"gen-adversarial", "--n", "3", "--k", "2", "--alpha", "0.5", "--out", out.string()}), 0);
  const SparseMatrix s = as_sparse(read_matrix(out));
  EXPECT_EQ(s.rows(), 14);
  const auto meta = nlohmann::json::parse(out_.str());
  EXPECT_EQ(meta.at("ell"), 6);
  EXPECT_EQ(run({"gen-adversarial", "--n", "1", "--k", "1", "--out", out.string()}), 2);
}

TEST_F(Cli, BenchSuite) {
  const fs::path suite = dir_ / "suite.json";
  std::ofstream(suite) << R"({"entries": [
    {"name": "file", "input": "a.mtx", "k": 2, "epsilon": 0.5, "variant": "linear", "seed": 1},
    {"name": "gen", "generate": {"kind": "sparse_low_rank", "m": 120, "n": 100, "rank": 3, "density": 0.05, "noise": 0.1},
     "k": 2, "epsilon": 0.5, "variant": "sparse", "trials": 2}
  ]})";
  ASSERT_EQ(run({"bench", "--suite", suite.string(), "--jobs", "2"}), 0) << err_.str();
  const auto res = nlohmann::json::parse(out_.str());
  ASSERT_EQ(res.size(), 2u);
  EXPECT_EQ(res[0].at("name"), "file");
  EXPECT_EQ(res[1].at("report").at("trials"), 2);
  EXPECT_EQ(res[1].at("report").at("fidelity"), "heuristic");
}

}  // namespace
}  // namespace cur
