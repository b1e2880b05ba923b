#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace miron::engine {

using Binary = std::vector<std::uint8_t>;

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational reciprocal(std::int64_t n) { return {1, n}; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  Rational operator+(const Rational& o) const;
  bool operator==(const Rational& o) const { return num * o.den == o.num * den; }
};

/// Sparse matrix over exact rationals, with row-major and column-major views of the
/// floating-point values used at run time.
class SparseMatrix {
 public:
  struct Entry {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    Rational value;
  };

  struct Cell {
    std::uint32_t index;  // the other coordinate
    double value;
  };

  SparseMatrix() = default;
  /// Entries may come in any order; duplicates, out-of-range indices and non-positive
  /// denominators throw std::invalid_argument.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Entry> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  /// Entries in row-major order.
  const std::vector<Entry>& entries() const { return entries_; }

  std::span<const Cell> row(std::size_t r) const { return {by_row_.data() + row_ptr_[r], by_row_.data() + row_ptr_[r + 1]}; }
  std::span<const Cell> col(std::size_t c) const { return {by_col_.data() + col_ptr_[c], by_col_.data() + col_ptr_[c + 1]}; }

  std::vector<double> multiply(const Binary& x) const;
  /// Products with the elementwise ramps σ(W) and σ(−W).
  void multiply_split(const Binary& x, std::vector<double>& positive, std::vector<double>& negative) const;

  bool operator==(const SparseMatrix& o) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Entry> entries_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Cell> by_row_;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<Cell> by_col_;
};

}  // namespace miron::engine
