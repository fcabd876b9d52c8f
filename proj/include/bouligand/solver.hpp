#pragma once

#include <span>
#include <vector>

#include "bouligand/sparse.hpp"

namespace bouligand {

enum class Preconditioner {
  None,
  Diagonal,
  // Modified incomplete Cholesky with zero fill-in.
  IncompleteCholesky,
};

struct SolveOptions {
  double rel_tol = 1e-12;
  // 0 means 10 * dimension.
  int max_iterations = 0;
  Preconditioner preconditioner = Preconditioner::Diagonal;

  void validate() const;
};

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;  // ||Kx - b||_2 of the recursively updated residual
};

// Solves (K + diag(shift)) x = b by preconditioned conjugate gradients. An
// empty shift means zero. x0 is an optional initial guess.
//
// Stops once ||r||_2 <= rel_tol * ||b||_2, or once the true residual is at the
// rounding level 8 eps || |K||x| + |b| ||_2 of its own evaluation. Throws ConvergenceError carrying the
// achieved residual when max_iterations is exhausted and Error(NonFinite) if b
// contains non-finite values.
std::vector<double> solve_spd(const SparseMatrix& K, std::span<const double> shift,
                              std::span<const double> b, const SolveOptions& opts = {},
                              std::span<const double> x0 = {}, SolveStats* stats = nullptr);

inline std::vector<double> solve_spd(const SparseMatrix& K, std::span<const double> b,
                                     const SolveOptions& opts = {}) {
  return solve_spd(K, {}, b, opts);
}

}  // namespace bouligand
