#pragma once

#include <filesystem>
#include <iosfwd>
#include <variant>
#include <vector>

#include "cur/matrix.hpp"

namespace cur {

/// Coordinate files load as sparse, array files as dense.
using AnyMatrix = std::variant<DenseMatrix, SparseMatrix>;

/// Matrix Market reader: real, integer and pattern fields; general, symmetric and
/// skew-symmetric storage (expanded on read). Errors raise ParseError with the
/// offending line number.
AnyMatrix read_matrix(std::istream& in);
AnyMatrix read_matrix(const std::filesystem::path& path);

DenseMatrix as_dense(const AnyMatrix& m);
SparseMatrix as_sparse(const AnyMatrix& m);

/// Array (dense) or coordinate (sparse) general real output, 17 significant digits.
void write_matrix(std::ostream& out, const DenseMatrix& m);
void write_matrix(std::ostream& out, const SparseMatrix& m);
void write_matrix(const std::filesystem::path& path, const DenseMatrix& m);
void write_matrix(const std::filesystem::path& path, const SparseMatrix& m);

/// Index list as an integer array file with 1-based entries.
void write_indices(const std::filesystem::path& path, const std::vector<Index>& indices);
std::vector<Index> read_indices(const std::filesystem::path& path);

}  // namespace cur
