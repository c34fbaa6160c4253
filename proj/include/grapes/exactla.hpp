#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace grapes {

class FieldSpec {
 public:
  static FieldSpec rationals() { return FieldSpec(0); }
  // Throws Error(InvalidField) unless p is an odd prime below 2^62.
  static FieldSpec prime(std::uint64_t p);
  // "q" or "p:<prime>".
  static FieldSpec parse(std::string_view text);

  bool is_rational() const { return p_ == 0; }
  std::uint64_t characteristic() const { return p_; }
  std::string name() const;
  bool operator==(const FieldSpec&) const = default;

 private:
  explicit FieldSpec(std::uint64_t p) : p_(p) {}
  std::uint64_t p_;
};

struct MatrixEntry {
  std::uint32_t row;
  std::uint32_t col;
  mpq_class value;
};

class SparseMatrix {
 public:
  SparseMatrix(std::size_t rows = 0, std::size_t cols = 0) : rows_(rows), cols_(cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return entries_.size(); }
  const std::vector<MatrixEntry>& entries() const { return entries_; }

  // Accumulates; call canonicalize() before relying on entry order.
  void add(std::size_t row, std::size_t col, const mpq_class& value);
  // Sorts by (row, col), merges duplicates and drops zeros.
  void canonicalize();

  SparseMatrix transpose() const;
  static SparseMatrix hconcat(const SparseMatrix& a, const SparseMatrix& b);
  // Dense product; for tests and small checks.
  SparseMatrix multiply(const SparseMatrix& o) const;
  bool is_zero() const;

  void write_matrix_market(std::ostream& out) const;

 private:
  std::size_t rows_, cols_;
  std::vector<MatrixEntry> entries_;
};

inline constexpr std::size_t kMaxRankNonzeros = 1'000'000;

std::size_t rank(const SparseMatrix& m, const FieldSpec& f);
std::size_t rank_of_span_mod(const SparseMatrix& z, const SparseMatrix& b, const FieldSpec& f);

}  // namespace grapes
