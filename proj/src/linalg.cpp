#include "heightlab/linalg.hpp"

#include "heightlab/error.hpp"

namespace heightlab {

std::vector<size_t> rref(RationalMatrix& m) {
  std::vector<size_t> pivots;
  if (m.empty()) return pivots;
  const size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pivot = r;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[r], m[pivot]);
    Rational inv = 1 / m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational factor = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= factor * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

size_t rank(RationalMatrix m) { return rref(m).size(); }

RationalMatrix nullspace(RationalMatrix m, size_t columns) {
  for (const auto& row : m) {
    if (row.size() != columns) throw Error(ErrorCode::BadParameter, "ragged matrix");
  }
  auto pivots = rref(m);
  std::vector<bool> is_pivot(columns, false);
  for (size_t c : pivots) is_pivot[c] = true;
  RationalMatrix basis;
  for (size_t free = 0; free < columns; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(columns, Rational(0));
    v[free] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

Rational determinant(RationalMatrix m) {
  const size_t n = m.size();
  Rational det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t pivot = c;
    while (pivot < n && m[pivot][c] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != c) {
      std::swap(m[pivot], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rational factor = m[i][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[i][j] -= factor * m[c][j];
    }
  }
  return det;
}

RationalMatrix row_space_key(RationalMatrix rows) {
  auto pivots = rref(rows);
  rows.resize(pivots.size());
  return rows;
}

}  // namespace heightlab
