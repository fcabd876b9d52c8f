#include "bouligand/subderivative.hpp"

#include "bouligand/error.hpp"

namespace bouligand {

LinearizedOperator::LinearizedOperator(const ForwardProblem& problem, GridFunction state)
    : matrices_(problem.shared_matrices()),
      state_(std::move(state)),
      inner_(problem.options().inner) {
  const std::size_t n = problem.dim();
  if (state_.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "state has " + std::to_string(state_.size()) +
                                                  " values, problem has " + std::to_string(n) +
                                                  " unknowns");
  const auto& f = problem.nonlinearity();
  const auto& D = problem.lumped();
  coefficient_.resize(n);
  shift_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    coefficient_[i] = f.bouligand_slope(state_.values[i]);
    shift_[i] = D[i] * coefficient_[i];
  }
}

std::vector<double> LinearizedOperator::solve(std::span<const double> rhs,
                                              SolveStats* stats) const {
  return solve_spd(matrices_->stiffness, shift_, rhs, inner_, {}, stats);
}

LinearizedOperator build_linearized(const ForwardProblem& problem, const GridFunction& y) {
  return LinearizedOperator(problem, y);
}

GridFunction apply_subderivative(const LinearizedOperator& op, const SparseMatrix& mass,
                                 const GridFunction& w) {
  if (w.size() != op.dim() || mass.dim() != op.dim())
    throw Error(ErrorCode::DimensionMismatch,
                "subderivative of dimension " + std::to_string(op.dim()) +
                    " applied to vector of size " + std::to_string(w.size()));
  return GridFunction(w.mesh, op.solve(mass.apply(w.values)), Role::State);
}

}  // namespace bouligand
