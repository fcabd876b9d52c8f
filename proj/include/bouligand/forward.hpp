#pragma once

#include <memory>
#include <span>
#include <vector>

#include "bouligand/fem.hpp"
#include "bouligand/mesh.hpp"
#include "bouligand/nonlinearity.hpp"
#include "bouligand/solver.hpp"

namespace bouligand {

struct ForwardOptions {
  int max_iterations = 100;
  // Absolute bound on ||A y + D f(y) - M u||_2.
  double tolerance = 1e-11;
  SolveOptions inner;
};

// The discrete state equation A y + D f(y) = M u on one mesh.
class ForwardProblem {
 public:
  ForwardProblem(std::shared_ptr<const Mesh> mesh,
                 PC1Nonlinearity nonlinearity = PC1Nonlinearity::max0(),
                 ForwardOptions options = {});
  // Reuses already assembled matrices.
  ForwardProblem(std::shared_ptr<const Mesh> mesh, std::shared_ptr<const FemMatrices> matrices,
                 PC1Nonlinearity nonlinearity = PC1Nonlinearity::max0(),
                 ForwardOptions options = {});

  const std::shared_ptr<const Mesh>& mesh() const noexcept { return mesh_; }
  const FemMatrices& matrices() const noexcept { return *matrices_; }
  const std::shared_ptr<const FemMatrices>& shared_matrices() const noexcept { return matrices_; }
  const SparseMatrix& stiffness() const noexcept { return matrices_->stiffness; }
  const SparseMatrix& mass() const noexcept { return matrices_->mass; }
  const DiagonalMatrix& lumped() const noexcept { return matrices_->lumped; }
  const PC1Nonlinearity& nonlinearity() const noexcept { return nonlinearity_; }
  const ForwardOptions& options() const noexcept { return options_; }
  ForwardOptions& options() noexcept { return options_; }
  std::size_t dim() const noexcept { return mesh_->num_interior(); }

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::shared_ptr<const FemMatrices> matrices_;
  PC1Nonlinearity nonlinearity_;
  ForwardOptions options_;
};

struct ForwardSolution {
  GridFunction y;
  // Selection branch per node at the final iterate (newton_branch); for max
  // this is the indicator of y_i >= 0.
  std::vector<int> active_pattern;
  int ssn_iterations = 0;
  double final_residual = 0.0;
  long inner_iterations = 0;
};

// Semi-smooth Newton: (A + D diag(f'(y^k))) y^{k+1} = M u - D (f(y^k) - f'(y^k) y^k).
// For piecewise-linear f it stops at the first k whose selection pattern
// repeats; otherwise the pattern must repeat and the residual must be below
// tolerance. An empty y0 starts from zero.
//
// Throws ConvergenceError after options().max_iterations steps; inner solver
// failures propagate.
ForwardSolution solve_forward(const ForwardProblem& problem, const GridFunction& u,
                              std::span<const double> y0 = {});

double forward_residual(const ForwardProblem& problem, std::span<const double> y,
                        std::span<const double> u);
double forward_residual(const ForwardProblem& problem, const GridFunction& y,
                        const GridFunction& u);

// Test oracle for f = max(., 0): enumerates all 2^m sign patterns s, solves
// (A + D diag(s)) y = M u densely and returns the y consistent with its
// pattern. Refuses m > 16.
ForwardSolution brute_force_forward(const ForwardProblem& problem, const GridFunction& u);

}  // namespace bouligand
