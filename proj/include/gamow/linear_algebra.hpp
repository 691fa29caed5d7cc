#pragma once

// Exact Gauss-Jordan elimination for Eigen matrices over Q or Q(i).
// Pivoting is structural (first nonzero entry), which is only meaningful
// for exact scalars; floating matrices should go through Eigen's own
// decompositions instead.

#include <vector>

#include "gamow/exact.hpp"

namespace gamow {

template <typename Scalar>
struct RowEchelon {
  MatrixX<Scalar> reduced;
  std::vector<Eigen::Index> pivot_columns;

  [[nodiscard]] Eigen::Index rank() const { return static_cast<Eigen::Index>(pivot_columns.size()); }
};

template <typename Scalar>
RowEchelon<Scalar> reduced_row_echelon(MatrixX<Scalar> m) {
  RowEchelon<Scalar> out;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index pivot = row;
    while (pivot < m.rows() && is_zero(m(pivot, col))) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) m.row(pivot).swap(m.row(row));

    const Scalar inv = Scalar(1) / m(row, col);
    for (Eigen::Index c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == row || is_zero(m(r, col))) continue;
      const Scalar factor = m(r, col);
      for (Eigen::Index c = col; c < m.cols(); ++c) m(r, c) -= factor * m(row, c);
    }
    out.pivot_columns.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

template <typename Scalar>
Eigen::Index exact_rank(const MatrixX<Scalar>& m) {
  return reduced_row_echelon(m).rank();
}

/// Columns span ker(m). Each basis column has a 1 in exactly one free
/// (non-pivot) variable and 0 in the other free variables, so the basis is
/// canonical for a given column order.
template <typename Scalar>
MatrixX<Scalar> nullspace_basis(const MatrixX<Scalar>& m) {
  const RowEchelon<Scalar> rref = reduced_row_echelon(m);
  const Eigen::Index n = m.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (auto c : rref.pivot_columns) is_pivot[static_cast<std::size_t>(c)] = true;

  std::vector<Eigen::Index> free_columns;
  for (Eigen::Index c = 0; c < n; ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) free_columns.push_back(c);

  MatrixX<Scalar> basis = MatrixX<Scalar>::Zero(n, static_cast<Eigen::Index>(free_columns.size()));
  for (std::size_t b = 0; b < free_columns.size(); ++b) {
    const Eigen::Index bc = static_cast<Eigen::Index>(b);
    basis(free_columns[b], bc) = Scalar(1);
    for (std::size_t p = 0; p < rref.pivot_columns.size(); ++p)
      basis(rref.pivot_columns[p], bc) = -rref.reduced(static_cast<Eigen::Index>(p), free_columns[b]);
  }
  return basis;
}

}  // namespace gamow
