#pragma once

#include "cur/eigen.hpp"

#include <concepts>
#include <span>
#include <type_traits>
#include <vector>

namespace cur {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;

/// Dense real matrix (Eigen column-major storage).
using DenseMatrix = Eigen::MatrixXd;

/// Compressed-sparse-row real matrix. Explicit zeros are pruned on construction.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

using Triplet = Eigen::Triplet<double>;

/// The two concrete matrix layouts every algorithm accepts.
///
/// Both support `A * X`, `A.transpose() * X`, `X * A` with dense X, plus the
/// free functions below (row/column gathers, norms, nnz), so the algorithm
/// code is written once against this interface.
template <class T>
concept MatrixOperand =
    std::same_as<std::remove_cvref_t<T>, DenseMatrix> || std::same_as<std::remove_cvref_t<T>, SparseMatrix>;

Index nnz(const DenseMatrix& a);
Index nnz(const SparseMatrix& a);

DenseMatrix gather_columns(const DenseMatrix& a, std::span<const Index> columns);
DenseMatrix gather_columns(const SparseMatrix& a, std::span<const Index> columns);
DenseMatrix gather_rows(const DenseMatrix& a, std::span<const Index> rows);
DenseMatrix gather_rows(const SparseMatrix& a, std::span<const Index> rows);

Vector column_norms_sq(const DenseMatrix& a);
Vector column_norms_sq(const SparseMatrix& a);
Vector row_norms_sq(const DenseMatrix& a);
Vector row_norms_sq(const SparseMatrix& a);

double frobenius_sq(const DenseMatrix& a);
double frobenius_sq(const SparseMatrix& a);

bool all_finite(const DenseMatrix& a);
bool all_finite(const SparseMatrix& a);

/// Throws ArgumentError naming `what` if any entry is NaN or infinite.
void require_finite(const DenseMatrix& a, const char* what);
void require_finite(const SparseMatrix& a, const char* what);

/// Builds a CSR matrix; duplicate triplets are summed and exact zeros dropped.
SparseMatrix make_sparse(Index rows, Index cols, const std::vector<Triplet>& entries);

/// Checks the CSR invariants: nondecreasing offsets, strictly increasing
/// in-range column indices per row, finite nonzero values.
bool is_valid_csr(const SparseMatrix& a);

DenseMatrix to_dense(const SparseMatrix& a);

}  // namespace cur
