#include "miron/engine/sparse.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace miron::engine {

Rational Rational::operator+(const Rational& o) const {
  Rational r{num * o.den + o.num * den, den * o.den};
  const std::int64_t g = std::gcd(r.num, r.den);
  if (g > 1) {
    r.num /= g;
    r.den /= g;
  }
  return r;
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Entry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& e = entries_[i];
    if (e.row >= rows_ || e.col >= cols_) {
      throw std::invalid_argument("matrix entry (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                                  ") out of range");
    }
    if (e.value.den <= 0) throw std::invalid_argument("matrix entry with non-positive denominator");
    if (i > 0 && entries_[i - 1].row == e.row && entries_[i - 1].col == e.col) {
      throw std::invalid_argument("duplicate matrix entry (" + std::to_string(e.row) + "," + std::to_string(e.col) + ")");
    }
  }

  row_ptr_.assign(rows_ + 1, 0);
  col_ptr_.assign(cols_ + 1, 0);
  for (const Entry& e : entries_) {
    ++row_ptr_[e.row + 1];
    ++col_ptr_[e.col + 1];
  }
  std::partial_sum(row_ptr_.begin(), row_ptr_.end(), row_ptr_.begin());
  std::partial_sum(col_ptr_.begin(), col_ptr_.end(), col_ptr_.begin());

  by_row_.resize(entries_.size());
  by_col_.resize(entries_.size());
  std::vector<std::size_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& e = entries_[i];
    by_row_[i] = Cell{e.col, e.value.value()};
    by_col_[fill[e.col]++] = Cell{e.row, e.value.value()};
  }
}

std::vector<double> SparseMatrix::multiply(const Binary& x) const {
  std::vector<double> y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (const Cell& c : row(r)) acc += c.value * x[c.index];
    y[r] = acc;
  }
  return y;
}

void SparseMatrix::multiply_split(const Binary& x, std::vector<double>& positive, std::vector<double>& negative) const {
  positive.assign(rows_, 0.0);
  negative.assign(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (const Cell& c : row(r)) {
      if (c.value > 0.0) positive[r] += c.value * x[c.index];
      else negative[r] += -c.value * x[c.index];
    }
  }
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || entries_.size() != o.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& a = entries_[i];
    const Entry& b = o.entries_[i];
    if (a.row != b.row || a.col != b.col || a.value.num != b.value.num || a.value.den != b.value.den) return false;
  }
  return true;
}

}  // namespace miron::engine
