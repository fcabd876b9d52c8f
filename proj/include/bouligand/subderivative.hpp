#pragma once

#include <memory>
#include <vector>

#include "bouligand/forward.hpp"

namespace bouligand {

// G_u w = eta with (A + K_y) eta = M w, K_y = D diag(a), a_i = f'_sel(y_i)
// under the strict convention (for max: a_i = 1 iff y_i > 0).
class LinearizedOperator {
 public:
  LinearizedOperator(const ForwardProblem& problem, GridFunction state);

  const GridFunction& state() const noexcept { return state_; }
  const std::vector<double>& coefficient() const noexcept { return coefficient_; }
  // Diagonal of K_y.
  const std::vector<double>& shift() const noexcept { return shift_; }
  const SparseMatrix& stiffness() const noexcept { return matrices_->stiffness; }
  const SolveOptions& solve_options() const noexcept { return inner_; }
  std::size_t dim() const noexcept { return shift_.size(); }

  // Solves (A + K_y) eta = rhs.
  std::vector<double> solve(std::span<const double> rhs, SolveStats* stats = nullptr) const;

 private:
  std::shared_ptr<const FemMatrices> matrices_;
  GridFunction state_;
  std::vector<double> coefficient_;
  std::vector<double> shift_;
  SolveOptions inner_;
};

LinearizedOperator build_linearized(const ForwardProblem& problem, const GridFunction& y);

// eta = G_u w. The operator is self-adjoint in the M inner product, so the
// same call also applies the adjoint.
GridFunction apply_subderivative(const LinearizedOperator& op, const SparseMatrix& mass,
                                 const GridFunction& w);

}  // namespace bouligand
