#include <gtest/gtest.h>

#include <cmath>

#include "cur/error.hpp"
#include "cur/sketch.hpp"
#include "oracle.hpp"

namespace cur {
namespace {

TEST(Sse, SingleSourceIndex) {
  Rng rng(1);
  const SparseEmbedding w = make_sse(1, 5, rng);
  const DenseMatrix d = oracle::dense_sse(w);
  EXPECT_EQ(d.cwiseAbs().sum(), 1.0);
  EXPECT_EQ(d.rows(), 5);
}

TEST(Sse, OneNonzeroPerColumn) {
  Rng rng(2);
  for (Index n : {1, 7, 100, 1000}) {
    const DenseMatrix d = oracle::dense_sse(make_sse(n, 13, rng));
    for (Index j = 0; j < n; ++j) {
      EXPECT_EQ((d.col(j).array() != 0.0).count(), 1);
      EXPECT_EQ(d.col(j).cwiseAbs().sum(), 1.0);
    }
  }
}

TEST(Sse, SeedDeterminism) {
  Rng a(3), b(3);
  const SparseEmbedding x = make_sse(200, 17, a), y = make_sse(200, 17, b);
  EXPECT_EQ(x.bucket, y.bucket);
  EXPECT_EQ(x.sign, y.sign);
}

TEST(Sse, RejectsZeroTarget) {
  Rng rng(4);
  EXPECT_THROW(make_sse(10, 0, rng), ArgumentError);
}

TEST(Sse, ApplyZero) {
  Rng rng(5);
  const SparseEmbedding w = make_sse(6, 4, rng);
  EXPECT_EQ(apply_sse(w, DenseMatrix::Zero(6, 3)).norm(), 0.0);
}

TEST(Sse, ApplySingleNonzero) {
  Rng rng(6);
  const SparseEmbedding w = make_sse(6, 4, rng);
  DenseMatrix a = DenseMatrix::Zero(6, 3);
  a(4, 2) = 1.0;
  const DenseMatrix wa = apply_sse(w, a);
  EXPECT_EQ(wa(w.bucket[4], 2), static_cast<double>(w.sign[4]));
  EXPECT_EQ(wa.cwiseAbs().sum(), 1.0);
}

TEST(Sse, ApplyMatchesExplicitOperator) {
  Rng rng(7);
  const SparseEmbedding w = make_sse(50, 9, rng);
  const DenseMatrix a = oracle::uniform(50, 6, rng);
  const DenseMatrix ref = oracle::dense_sse(w) * a;
  EXPECT_LE((apply_sse(w, a) - ref).norm(), 1e-13);
  SparseMatrix s = a.sparseView();
  EXPECT_LE((apply_sse(w, s) - ref).norm(), 1e-13);
  const DenseMatrix x = oracle::uniform(4, 50, rng);
  const DenseMatrix ref_r = x * oracle::dense_sse(w).transpose();
  EXPECT_LE((apply_sse_right(x, w) - ref_r).norm(), 1e-13);
  SparseMatrix xs = x.sparseView();
  EXPECT_LE((apply_sse_right(xs, w) - ref_r).norm(), 1e-13);
}

TEST(Sse, CompactKeepsGram) {
  Rng rng(8);
  const SparseEmbedding w = make_sse(20, 500, rng);
  const DenseMatrix a = oracle::uniform(20, 5, rng);
  const DenseMatrix full = apply_sse(w, a);
  const DenseMatrix compact = apply_sse_compact(w, a);
  EXPECT_LE(compact.rows(), 20);
  EXPECT_EQ(compact.rows(), static_cast<Index>(occupied_buckets(w).size()));
  EXPECT_LE((full.transpose() * full - compact.transpose() * compact).norm(), 1e-12);
}

TEST(Sse, FrobeniusPreservationMonteCarlo) {
  Rng data(9);
  const DenseMatrix a = oracle::uniform(500, 4, data);
  const double f = a.squaredNorm();
  int good = 0;
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng(1000 + seed);
    const double r = apply_sse(make_sse(500, 400, rng), a).squaredNorm() / f;
    good += r >= 0.5 && r <= 1.5;
  }
  EXPECT_GE(good, 95);
}

TEST(Sse, SubspaceEmbeddingMonteCarlo) {
  const double eps = 0.5;
  int good = 0;
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng(2000 + seed);
    const Index rho = 1 + seed % 5;
    const DenseMatrix a = low_rank_plus_noise(300, 40, rho, 0.0, rng);
    const DenseMatrix u = oracle::orth(a);
    const Vector s = oracle::sigma(apply_sse(make_sse(300, sse_subspace_dim(rho, eps), rng), u));
    good += s(0) <= 1 + eps && s(s.size() - 1) >= 1 - eps;
  }
  EXPECT_GE(good, 95);
}

TEST(Sse, SketchedRegressionMonteCarlo) {
  const double eps = 0.5;
  const Index rho = 3;
  int good = 0;
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng(3000 + seed);
    const DenseMatrix a = gaussian(300, rho, rng);
    const DenseMatrix b = gaussian(300, 2, rng);
    const DenseMatrix x_opt = oracle::pinv(a) * b;
    const double best = (a * x_opt - b).squaredNorm();
    const SparseEmbedding w = make_sse(300, sse_subspace_dim(rho, eps), rng);
    const DenseMatrix x = oracle::pinv(apply_sse(w, a)) * apply_sse(w, b);
    good += (a * x - b).squaredNorm() <= (1 + eps) * best;
  }
  EXPECT_GE(good, 90);
}

TEST(Sse, DimensionFormulas) {
  EXPECT_EQ(sse_subspace_dim(5, 0.5), 4000);
  EXPECT_EQ(sse_frobenius_dim(0.5), 160);
  EXPECT_EQ(sse_subspace_dim(3, 0.3), static_cast<Index>(std::ceil(40.0 * 9 / 0.09)));
}

TEST(Jlt, RowCountFormula) {
  EXPECT_EQ(jlt_rows(100, 1.0), static_cast<Index>(std::ceil(8.0 * 6.0 * std::log(100.0))));
  EXPECT_THROW(jlt_rows(1, 1.0), ArgumentError);
  EXPECT_THROW(jlt_rows(10, 0.0), ArgumentError);
}

TEST(Jlt, SignEntries) {
  Rng rng(10);
  const SignSketch s = make_sign_sketch(37, 11, rng);
  const double v = 1.0 / std::sqrt(37.0);
  for (Index i = 0; i < s.s.size(); ++i) EXPECT_EQ(std::abs(s.s.data()[i]), v);
}

TEST(Jlt, ZeroInput) {
  Rng rng(11);
  EXPECT_EQ(jlt(DenseMatrix::Zero(20, 5), 1.0, rng).norm(), 0.0);
}

TEST(Jlt, ColumnNormsMonteCarlo) {
  Rng data(12);
  const DenseMatrix b = oracle::uniform(300, 50, data);
  const Vector truth = b.colwise().squaredNorm().transpose();
  int good = 0;
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng(4000 + seed);
    const DenseMatrix sb = jlt(b, 1.0, rng);
    ASSERT_EQ(sb.rows(), jlt_rows(50, 1.0));
    const Vector est = sb.colwise().squaredNorm().transpose();
    const Vector ratio = est.cwiseQuotient(truth);
    good += ratio.minCoeff() >= 0.5 && ratio.maxCoeff() <= 1.5;
  }
  EXPECT_GE(good, 99);
}

TEST(Jlt, RightVariantPreservesRowNorms) {
  Rng rng(13);
  const DenseMatrix b = oracle::uniform(40, 300, rng);
  const DenseMatrix bs = jlt_right(b, 1.0, rng);
  EXPECT_EQ(bs.cols(), jlt_rows(40, 1.0));
  const Vector ratio = bs.rowwise().squaredNorm().cwiseQuotient(b.rowwise().squaredNorm());
  EXPECT_GE(ratio.minCoeff(), 0.5);
  EXPECT_LE(ratio.maxCoeff(), 1.5);
}

}  // namespace
}  // namespace cur
