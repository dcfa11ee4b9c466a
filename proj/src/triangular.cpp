#include "mw/triangular.hpp"

namespace mw {

int common_dim(const MatrixVector& v) {
  if (v.empty()) throw DimensionMismatchError("common_dim: empty MatrixVector");
  const int d = v.front().dim();
  for (const auto& m : v) {
    if (m.dim() != d) throw DimensionMismatchError("common_dim: mixed dimensions");
  }
  return d;
}

TriangularArray::TriangularArray(int height, int dim) {
  rows_.reserve(height);
  for (int i = 1; i <= height; ++i) rows_.emplace_back(i, SpdMatrix::identity(dim));
}

TriangularArray TriangularArray::from_rows(std::vector<MatrixVector> rows) {
  TriangularArray t;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != i + 1) throw DimensionMismatchError("TriangularArray: row i must have i entries");
  }
  t.rows_ = std::move(rows);
  if (t.height() > 0) t.dim();  // validates shared dimension
  return t;
}

int TriangularArray::dim() const {
  if (rows_.empty()) throw DimensionMismatchError("TriangularArray: empty");
  const int d = rows_.front().front().dim();
  for (const auto& r : rows_) {
    for (const auto& m : r) {
      if (m.dim() != d) throw DimensionMismatchError("TriangularArray: mixed dimensions");
    }
  }
  return d;
}

TriangularArray TriangularArray::inner() const {
  TriangularArray t;
  t.rows_.assign(rows_.begin(), rows_.end() - 1);
  return t;
}

TriangularArray TriangularArray::with_bottom(const TriangularArray& inner, const MatrixVector& z) {
  if (static_cast<int>(z.size()) != inner.height() + 1) {
    throw DimensionMismatchError("with_bottom: |z| must equal inner height + 1");
  }
  TriangularArray t = inner;
  t.rows_.push_back(z);
  t.dim();
  return t;
}

TrapezoidArray::TrapezoidArray(int width, int length, int dim) : width_(width) {
  if (length < width || width < 1) throw DimensionMismatchError("TrapezoidArray: requires n >= N >= 1");
  rows_.reserve(length);
  for (int i = 1; i <= length; ++i) rows_.emplace_back(row_width(i), SpdMatrix::identity(dim));
}

int TrapezoidArray::dim() const {
  if (rows_.empty()) throw DimensionMismatchError("TrapezoidArray: empty");
  return rows_.front().front().dim();
}

}  // namespace mw
