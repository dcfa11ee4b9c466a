#pragma once

#include <vector>

#include "mw/spd.hpp"

namespace mw {

// Ordered tuple of SPD matrices sharing one dimension.
using MatrixVector = std::vector<SpdMatrix>;

// Common dimension of a nonempty MatrixVector; throws on mismatch.
int common_dim(const MatrixVector& v);

// Height-N triangular array x = (x^i_j), 1 <= j <= i <= N. Row i holds i
// matrices. Indexing is 1-based to match the recursions it implements.
class TriangularArray {
 public:
  TriangularArray() = default;
  TriangularArray(int height, int dim);  // filled with identities

  static TriangularArray from_rows(std::vector<MatrixVector> rows);

  int height() const { return static_cast<int>(rows_.size()); }
  int dim() const;

  const SpdMatrix& at(int i, int j) const { return rows_[i - 1][j - 1]; }
  SpdMatrix& at(int i, int j) { return rows_[i - 1][j - 1]; }

  const MatrixVector& row(int i) const { return rows_[i - 1]; }
  MatrixVector& row(int i) { return rows_[i - 1]; }

  // First N-1 rows as a height-(N-1) array.
  TriangularArray inner() const;

  // New array with rows `inner` extended by bottom row z.
  static TriangularArray with_bottom(const TriangularArray& inner, const MatrixVector& z);

 private:
  std::vector<MatrixVector> rows_;
};

// Trapezoidal array: rows 1..n, row i holds min(i, N) matrices.
class TrapezoidArray {
 public:
  TrapezoidArray() = default;
  TrapezoidArray(int width, int length, int dim);  // N, n >= N; identities

  int width() const { return width_; }    // N
  int length() const { return static_cast<int>(rows_.size()); }  // n
  int dim() const;
  int row_width(int i) const { return std::min(i, width_); }

  const SpdMatrix& at(int i, int j) const { return rows_[i - 1][j - 1]; }
  SpdMatrix& at(int i, int j) { return rows_[i - 1][j - 1]; }
  const MatrixVector& row(int i) const { return rows_[i - 1]; }
  MatrixVector& row(int i) { return rows_[i - 1]; }

 private:
  int width_ = 0;
  std::vector<MatrixVector> rows_;
};

}  // namespace mw
