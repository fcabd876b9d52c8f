#include "bouligand/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "bouligand/error.hpp"

namespace bouligand {

SparseMatrix SparseMatrix::from_triplets(std::size_t dim, std::vector<Triplet> triplets,
                                         bool drop_zeros) {
  for (const auto& t : triplets) {
    if (t.row < 0 || t.col < 0 || static_cast<std::size_t>(t.row) >= dim ||
        static_cast<std::size_t>(t.col) >= dim)
      throw Error(ErrorCode::DimensionMismatch, "triplet index out of range");
  }
  // Stable so that duplicates are summed in insertion order.
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix K;
  K.row_ptr_.assign(dim + 1, 0);
  K.col_idx_.reserve(triplets.size());
  K.values_.reserve(triplets.size());
  for (std::size_t p = 0; p < triplets.size();) {
    const auto row = triplets[p].row, col = triplets[p].col;
    double sum = 0.0;
    for (; p < triplets.size() && triplets[p].row == row && triplets[p].col == col; ++p)
      sum += triplets[p].value;
    if (drop_zeros && sum == 0.0 && row != col) continue;
    K.col_idx_.push_back(col);
    K.values_.push_back(sum);
    ++K.row_ptr_[static_cast<std::size_t>(row) + 1];
  }
  for (std::size_t i = 0; i < dim; ++i) K.row_ptr_[i + 1] += K.row_ptr_[i];
  return K;
}

double SparseMatrix::at(std::size_t i, std::size_t j) const noexcept {
  const auto begin = col_idx_.begin() + row_ptr_[i], end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, static_cast<std::int32_t>(j));
  if (it == end || *it != static_cast<std::int32_t>(j)) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(dim());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

bool SparseMatrix::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    for (auto p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const auto j = static_cast<std::size_t>(col_idx_[p]);
      if (std::abs(values_[p] - at(j, i)) > tol) return false;
    }
  }
  return true;
}

void SparseMatrix::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != dim() || y.size() != dim())
    throw Error(ErrorCode::DimensionMismatch,
                "matrix of dimension " + std::to_string(dim()) + " applied to vector of size " +
                    std::to_string(x.size()));
  const auto* rp = row_ptr_.data();
  const auto* ci = col_idx_.data();
  const auto* va = values_.data();
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (auto p = rp[i]; p < rp[i + 1]; ++p) s += va[p] * x[ci[p]];
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(dim());
  apply(x, y);
  return y;
}

DiagonalMatrix::DiagonalMatrix(std::vector<double> diag) : diag_(std::move(diag)) {
  for (double d : diag_)
    if (!(d >= 0.0)) throw Error(ErrorCode::InvalidArgument, "diagonal entries must be >= 0");
}

std::vector<double> DiagonalMatrix::apply(std::span<const double> x) const {
  if (x.size() != dim())
    throw Error(ErrorCode::DimensionMismatch, "diagonal matrix of dimension " +
                                                  std::to_string(dim()) +
                                                  " applied to vector of size " +
                                                  std::to_string(x.size()));
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = diag_[i] * x[i];
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "dot product of vectors of different length");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace bouligand
