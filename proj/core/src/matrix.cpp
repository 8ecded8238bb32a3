#include "cur/matrix.hpp"

#include <cmath>
#include <string>

#include "cur/error.hpp"

namespace cur {

Index nnz(const DenseMatrix& a) { return (a.array() != 0.0).count(); }

Index nnz(const SparseMatrix& a) { return a.nonZeros(); }

DenseMatrix gather_columns(const DenseMatrix& a, std::span<const Index> columns) {
  DenseMatrix out(a.rows(), static_cast<Index>(columns.size()));
  for (Index j = 0; j < out.cols(); ++j) {
    const Index c = columns[static_cast<std::size_t>(j)];
    if (c < 0 || c >= a.cols()) throw ArgumentError("gather_columns: column index out of range");
    out.col(j) = a.col(c);
  }
  return out;
}

DenseMatrix gather_columns(const SparseMatrix& a, std::span<const Index> columns) {
  // One pass over the stored entries; a column requested several times is
  // filled into every requesting slot.
  std::vector<std::vector<Index>> slots(static_cast<std::size_t>(a.cols()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const Index c = columns[j];
    if (c < 0 || c >= a.cols()) throw ArgumentError("gather_columns: column index out of range");
    slots[static_cast<std::size_t>(c)].push_back(static_cast<Index>(j));
  }
  DenseMatrix out = DenseMatrix::Zero(a.rows(), static_cast<Index>(columns.size()));
  for (Index i = 0; i < a.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) {
      for (Index slot : slots[static_cast<std::size_t>(it.col())]) out(i, slot) = it.value();
    }
  }
  return out;
}

DenseMatrix gather_rows(const DenseMatrix& a, std::span<const Index> rows) {
  DenseMatrix out(static_cast<Index>(rows.size()), a.cols());
  for (Index j = 0; j < out.rows(); ++j) {
    const Index r = rows[static_cast<std::size_t>(j)];
    if (r < 0 || r >= a.rows()) throw ArgumentError("gather_rows: row index out of range");
    out.row(j) = a.row(r);
  }
  return out;
}

DenseMatrix gather_rows(const SparseMatrix& a, std::span<const Index> rows) {
  DenseMatrix out = DenseMatrix::Zero(static_cast<Index>(rows.size()), a.cols());
  for (Index j = 0; j < out.rows(); ++j) {
    const Index r = rows[static_cast<std::size_t>(j)];
    if (r < 0 || r >= a.rows()) throw ArgumentError("gather_rows: row index out of range");
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) out(j, it.col()) = it.value();
  }
  return out;
}

Vector column_norms_sq(const DenseMatrix& a) { return a.colwise().squaredNorm().transpose(); }

Vector column_norms_sq(const SparseMatrix& a) {
  Vector out = Vector::Zero(a.cols());
  for (Index i = 0; i < a.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) out(it.col()) += it.value() * it.value();
  }
  return out;
}

Vector row_norms_sq(const DenseMatrix& a) { return a.rowwise().squaredNorm(); }

Vector row_norms_sq(const SparseMatrix& a) {
  Vector out = Vector::Zero(a.rows());
  for (Index i = 0; i < a.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) out(i) += it.value() * it.value();
  }
  return out;
}

double frobenius_sq(const DenseMatrix& a) { return a.squaredNorm(); }

double frobenius_sq(const SparseMatrix& a) { return a.squaredNorm(); }

bool all_finite(const DenseMatrix& a) { return a.allFinite(); }

bool all_finite(const SparseMatrix& a) {
  for (Index i = 0; i < a.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) {
      if (!std::isfinite(it.value())) return false;
    }
  }
  return true;
}

void require_finite(const DenseMatrix& a, const char* what) {
  if (!all_finite(a)) throw ArgumentError(std::string(what) + ": matrix has non-finite entries");
}

void require_finite(const SparseMatrix& a, const char* what) {
  if (!all_finite(a)) throw ArgumentError(std::string(what) + ": matrix has non-finite entries");
}

SparseMatrix make_sparse(Index rows, Index cols, const std::vector<Triplet>& entries) {
  if (rows < 0 || cols < 0) throw ArgumentError("make_sparse: negative dimension");
  for (const auto& t : entries) {
    if (t.row() < 0 || t.row() >= rows || t.col() < 0 || t.col() >= cols)
      throw ArgumentError("make_sparse: entry index out of range");
  }
  SparseMatrix out(rows, cols);
  out.setFromTriplets(entries.begin(), entries.end());
  out.prune(0.0, 0.0);
  out.makeCompressed();
  return out;
}

bool is_valid_csr(const SparseMatrix& a) {
  if (!a.isCompressed()) return false;
  const auto* offsets = a.outerIndexPtr();
  const auto* inner = a.innerIndexPtr();
  const auto* values = a.valuePtr();
  if (offsets[0] != 0) return false;
  for (Index i = 0; i < a.rows(); ++i) {
    if (offsets[i + 1] < offsets[i]) return false;
    for (auto p = offsets[i]; p < offsets[i + 1]; ++p) {
      if (inner[p] < 0 || inner[p] >= a.cols()) return false;
      if (p > offsets[i] && inner[p] <= inner[p - 1]) return false;
      if (!std::isfinite(values[p]) || values[p] == 0.0) return false;
    }
  }
  return offsets[a.rows()] == a.nonZeros();
}

DenseMatrix to_dense(const SparseMatrix& a) { return DenseMatrix(a); }

}  // namespace cur
