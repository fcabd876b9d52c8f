#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bouligand {

// Compressed sparse row storage of a symmetric matrix. Both triangles are
// stored and column indices are sorted within each row.
class SparseMatrix {
 public:
  struct Triplet {
    std::int32_t row;
    std::int32_t col;
    double value;
  };

  SparseMatrix() = default;

  // Sums duplicate entries. Entries that sum to exactly zero are dropped when
  // drop_zeros is set.
  static SparseMatrix from_triplets(std::size_t dim, std::vector<Triplet> triplets,
                                    bool drop_zeros = true);

  std::size_t dim() const noexcept { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::int64_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::int32_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  // Stored value, or 0 when (i, j) is not in the pattern.
  double at(std::size_t i, std::size_t j) const noexcept;
  std::vector<double> diagonal() const;
  bool is_symmetric(double tol = 0.0) const;

  // y = K x. y must not alias x.
  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

 private:
  std::vector<std::int64_t> row_ptr_;
  std::vector<std::int32_t> col_idx_;
  std::vector<double> values_;
};

class DiagonalMatrix {
 public:
  DiagonalMatrix() = default;
  explicit DiagonalMatrix(std::vector<double> diag);

  std::size_t dim() const noexcept { return diag_.size(); }
  std::span<const double> values() const noexcept { return diag_; }
  double operator[](std::size_t i) const noexcept { return diag_[i]; }

  std::vector<double> apply(std::span<const double> x) const;

 private:
  std::vector<double> diag_;
};

// Left-to-right summation; results are reproducible for identical inputs.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace bouligand
