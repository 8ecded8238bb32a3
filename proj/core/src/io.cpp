#include "cur/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "cur/error.hpp"

namespace cur {
namespace {

enum class Field { real, integer, pattern };
enum class Symmetry { general, symmetric, skew };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next line that is neither blank nor a comment.
  bool next_data(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      const auto p = line.find_first_not_of(" \t\r");
      if (p == std::string::npos || line[p] == '%') continue;
      return true;
    }
    return false;
  }

  bool next_raw(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++number_;
    return true;
  }

  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

double parse_value(std::istringstream& ss, Field field, std::size_t line) {
  if (field == Field::pattern) return 1.0;
  std::string tok;
  if (!(ss >> tok)) throw ParseError("missing value", line);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError("invalid value '" + tok + "'", line);
  }
  if (used != tok.size()) throw ParseError("invalid value '" + tok + "'", line);
  if (!std::isfinite(v)) throw ParseError("non-finite value", line);
  return v;
}

long long parse_count(std::istringstream& ss, const char* what, std::size_t line) {
  std::string tok;
  if (!(ss >> tok)) throw ParseError(std::string("missing ") + what, line);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(std::string("invalid ") + what + " '" + tok + "'", line);
  }
  if (used != tok.size()) throw ParseError(std::string("invalid ") + what + " '" + tok + "'", line);
  return v;
}

void expect_end(std::istringstream& ss, std::size_t line) {
  std::string extra;
  if (ss >> extra) throw ParseError("unexpected trailing token '" + extra + "'", line);
}

void write_number(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

AnyMatrix read_matrix(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next_raw(line)) throw ParseError("empty file", 1);
  std::istringstream banner(line);
  std::string tag, object, format, field_s, symmetry_s;
  banner >> tag >> object >> format >> field_s >> symmetry_s;
  if (tag != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", reader.number());
  if (lower(object) != "matrix") throw ParseError("unsupported object '" + object + "'", reader.number());
  format = lower(format);
  if (format != "coordinate" && format != "array") throw ParseError("unsupported format '" + format + "'", reader.number());
  Field field;
  field_s = lower(field_s);
  if (field_s == "real" || field_s == "double") field = Field::real;
  else if (field_s == "integer") field = Field::integer;
  else if (field_s == "pattern") field = Field::pattern;
  else throw ParseError("unsupported field '" + field_s + "'", reader.number());
  Symmetry sym;
  symmetry_s = lower(symmetry_s);
  if (symmetry_s == "general") sym = Symmetry::general;
  else if (symmetry_s == "symmetric") sym = Symmetry::symmetric;
  else if (symmetry_s == "skew-symmetric") sym = Symmetry::skew;
  else throw ParseError("unsupported symmetry '" + symmetry_s + "'", reader.number());
  const bool coordinate = format == "coordinate";
  if (!coordinate && field == Field::pattern) throw ParseError("pattern field requires coordinate format", reader.number());

  if (!reader.next_data(line)) throw ParseError("missing size line", reader.number() + 1);
  std::istringstream size_line(line);
  const long long m = parse_count(size_line, "row count", reader.number());
  const long long n = parse_count(size_line, "column count", reader.number());
  const long long entries = coordinate ? parse_count(size_line, "entry count", reader.number()) : 0;
  expect_end(size_line, reader.number());
  if (m < 0 || n < 0 || entries < 0) throw ParseError("negative size", reader.number());
  if (sym != Symmetry::general && m != n) throw ParseError("symmetric storage requires a square matrix", reader.number());

  if (coordinate) {
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(sym == Symmetry::general ? entries : 2 * entries));
    for (long long e = 0; e < entries; ++e) {
      if (!reader.next_data(line)) throw ParseError("expected " + std::to_string(entries) + " entries", reader.number() + 1);
      std::istringstream ss(line);
      const long long i = parse_count(ss, "row index", reader.number());
      const long long j = parse_count(ss, "column index", reader.number());
      const double v = parse_value(ss, field, reader.number());
      expect_end(ss, reader.number());
      if (i < 1 || i > m || j < 1 || j > n) throw ParseError("index out of range", reader.number());
      if (sym != Symmetry::general && j > i) throw ParseError("entry above the diagonal in symmetric storage", reader.number());
      if (sym == Symmetry::skew && i == j) throw ParseError("diagonal entry in skew-symmetric storage", reader.number());
      triplets.emplace_back(static_cast<Index>(i - 1), static_cast<Index>(j - 1), v);
      if (sym != Symmetry::general && i != j)
        triplets.emplace_back(static_cast<Index>(j - 1), static_cast<Index>(i - 1), sym == Symmetry::skew ? -v : v);
    }
    if (reader.next_data(line)) throw ParseError("more entries than declared", reader.number());
    return make_sparse(static_cast<Index>(m), static_cast<Index>(n), triplets);
  }

  DenseMatrix a = DenseMatrix::Zero(static_cast<Index>(m), static_cast<Index>(n));
  for (long long j = 0; j < n; ++j) {
    const long long first = sym == Symmetry::general ? 0 : (sym == Symmetry::symmetric ? j : j + 1);
    for (long long i = first; i < m; ++i) {
      if (!reader.next_data(line)) throw ParseError("too few array entries", reader.number() + 1);
      std::istringstream ss(line);
      const double v = parse_value(ss, field, reader.number());
      expect_end(ss, reader.number());
      a(static_cast<Index>(i), static_cast<Index>(j)) = v;
      if (sym == Symmetry::symmetric) a(static_cast<Index>(j), static_cast<Index>(i)) = v;
      if (sym == Symmetry::skew) a(static_cast<Index>(j), static_cast<Index>(i)) = -v;
    }
  }
  if (reader.next_data(line)) throw ParseError("more array entries than declared", reader.number());
  return a;
}

AnyMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path.string());
  return read_matrix(in);
}

DenseMatrix as_dense(const AnyMatrix& m) {
  if (const auto* d = std::get_if<DenseMatrix>(&m)) return *d;
  return to_dense(std::get<SparseMatrix>(m));
}

SparseMatrix as_sparse(const AnyMatrix& m) {
  if (const auto* s = std::get_if<SparseMatrix>(&m)) return *s;
  SparseMatrix s = std::get<DenseMatrix>(m).sparseView(0.0, 0.0);
  s.makeCompressed();
  return s;
}

void write_matrix(std::ostream& out, const DenseMatrix& m) {
  out << "%%MatrixMarket matrix array real general\n" << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      write_number(out, m(i, j));
      out << '\n';
    }
  }
}

void write_matrix(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n"
      << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (Index i = 0; i < m.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
      out << (i + 1) << ' ' << (it.col() + 1) << ' ';
      write_number(out, it.value());
      out << '\n';
    }
  }
}

void write_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
  auto out = open_out(path);
  write_matrix(out, m);
  if (!out) throw ArgumentError("write failed: " + path.string());
}

void write_matrix(const std::filesystem::path& path, const SparseMatrix& m) {
  auto out = open_out(path);
  write_matrix(out, m);
  if (!out) throw ArgumentError("write failed: " + path.string());
}

void write_indices(const std::filesystem::path& path, const std::vector<Index>& indices) {
  auto out = open_out(path);
  out << "%%MatrixMarket matrix array integer general\n" << indices.size() << " 1\n";
  for (Index i : indices) out << (i + 1) << '\n';
  if (!out) throw ArgumentError("write failed: " + path.string());
}

std::vector<Index> read_indices(const std::filesystem::path& path) {
  const DenseMatrix m = as_dense(read_matrix(path));
  if (m.cols() != 1) throw ParseError("index file must have one column", 2);
  std::vector<Index> out(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) {
    const double v = m(i, 0);
    if (v < 1 || v != std::floor(v)) throw ParseError("index entries must be positive integers", 3 + static_cast<std::size_t>(i));
    out[static_cast<std::size_t>(i)] = static_cast<Index>(v) - 1;
  }
  return out;
}

}  // namespace cur
