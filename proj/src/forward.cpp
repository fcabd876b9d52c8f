#include "bouligand/forward.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bouligand/error.hpp"

namespace bouligand {

ForwardProblem::ForwardProblem(std::shared_ptr<const Mesh> mesh, PC1Nonlinearity nonlinearity,
                               ForwardOptions options)
    : ForwardProblem(mesh, std::make_shared<const FemMatrices>(assemble(*mesh)),
                     std::move(nonlinearity), options) {}

ForwardProblem::ForwardProblem(std::shared_ptr<const Mesh> mesh,
                               std::shared_ptr<const FemMatrices> matrices,
                               PC1Nonlinearity nonlinearity, ForwardOptions options)
    : mesh_(std::move(mesh)),
      matrices_(std::move(matrices)),
      nonlinearity_(std::move(nonlinearity)),
      options_(options) {
  const std::size_t n = mesh_->num_interior();
  if (matrices_->stiffness.dim() != n || matrices_->mass.dim() != n ||
      matrices_->lumped.dim() != n)
    throw Error(ErrorCode::DimensionMismatch, "FEM matrices do not match the mesh");
  if (options_.max_iterations < 1)
    throw Error(ErrorCode::InvalidArgument, "SSN max_iterations must be >= 1");
  if (!(options_.tolerance > 0.0))
    throw Error(ErrorCode::InvalidArgument, "forward tolerance must be positive");
  options_.inner.validate();
}

namespace {

void check_dim(const ForwardProblem& problem, std::size_t n, const char* what) {
  if (n != problem.dim())
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has " + std::to_string(n) +
                                                  " values, problem has " +
                                                  std::to_string(problem.dim()) + " unknowns");
}

std::vector<int> selection_pattern(const PC1Nonlinearity& f, std::span<const double> y) {
  std::vector<int> pattern(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) pattern[i] = f.newton_branch(y[i]);
  return pattern;
}

// Dense Cholesky solve for the enumeration oracle. K is overwritten.
std::vector<double> dense_cholesky_solve(std::vector<double> K, std::vector<double> b,
                                         std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = K[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= K[j * n + k] * K[j * n + k];
    if (!(d > 0.0)) throw Error(ErrorCode::Internal, "oracle system is not positive definite");
    d = std::sqrt(d);
    K[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = K[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= K[i * n + k] * K[j * n + k];
      K[i * n + j] = s / d;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= K[i * n + k] * b[k];
    b[i] /= K[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) b[i] -= K[k * n + i] * b[k];
    b[i] /= K[i * n + i];
  }
  return b;
}

}  // namespace

double forward_residual(const ForwardProblem& problem, std::span<const double> y,
                        std::span<const double> u) {
  check_dim(problem, y.size(), "state");
  check_dim(problem, u.size(), "source");
  const auto& f = problem.nonlinearity();
  const auto& D = problem.lumped();
  auto r = problem.stiffness().apply(y);
  const auto Mu = problem.mass().apply(u);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += D[i] * f(y[i]) - Mu[i];
  return norm2(r);
}

double forward_residual(const ForwardProblem& problem, const GridFunction& y,
                        const GridFunction& u) {
  return forward_residual(problem, std::span<const double>(y.values),
                          std::span<const double>(u.values));
}

ForwardSolution solve_forward(const ForwardProblem& problem, const GridFunction& u,
                              std::span<const double> y0) {
  check_dim(problem, u.size(), "source");
  if (!y0.empty()) check_dim(problem, y0.size(), "initial state");

  const std::size_t n = problem.dim();
  const auto& f = problem.nonlinearity();
  const auto& D = problem.lumped();
  const auto& opts = problem.options();
  const auto Mu = problem.mass().apply(u.values);

  ForwardSolution sol;
  sol.y = GridFunction(problem.mesh(), Role::State);
  auto& y = sol.y.values;
  if (!y0.empty()) y.assign(y0.begin(), y0.end());

  auto pattern = selection_pattern(f, y);
  std::vector<double> shift(n), rhs(n);
  SolveOptions inner = opts.inner;

  for (int k = 0; k < opts.max_iterations; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double slope = f.newton_slope(y[i]);
      shift[i] = D[i] * slope;
      rhs[i] = Mu[i] - D[i] * (f(y[i]) - slope * y[i]);
    }
    // Tighten the inner solve when the relative tolerance alone could not
    // meet the absolute forward tolerance.
    const double rhs_norm = norm2(rhs);
    inner.rel_tol = opts.inner.rel_tol;
    if (rhs_norm > 0.0)
      inner.rel_tol = std::max(1e-15, std::min(opts.inner.rel_tol, 0.1 * opts.tolerance / rhs_norm));

    SolveStats stats;
    y = solve_spd(problem.stiffness(), shift, rhs, inner, y, &stats);
    sol.inner_iterations += stats.iterations;
    ++sol.ssn_iterations;

    auto next = selection_pattern(f, y);
    const bool unchanged = next == pattern;
    pattern = std::move(next);
    if (unchanged) {
      sol.final_residual = forward_residual(problem, y, u.values);
      if (sol.final_residual <= opts.tolerance) {
        sol.active_pattern = std::move(pattern);
        return sol;
      }
    }
  }

  const double res = forward_residual(problem, y, u.values);
  std::ostringstream msg;
  msg << "semi-smooth Newton did not converge in " << opts.max_iterations
      << " iterations (residual " << res << ")";
  throw ConvergenceError(msg.str(), res, opts.max_iterations);
}

ForwardSolution brute_force_forward(const ForwardProblem& problem, const GridFunction& u) {
  check_dim(problem, u.size(), "source");
  if (!problem.nonlinearity().is_max0())
    throw Error(ErrorCode::Refused, "enumeration oracle only supports f = max(., 0)");
  const std::size_t m = problem.dim();
  if (m > 16)
    throw Error(ErrorCode::Refused, "enumeration oracle refuses " + std::to_string(m) +
                                        " unknowns (limit 16)");

  std::vector<double> A(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) A[i * m + j] = problem.stiffness().at(i, j);
  const auto Mu = problem.mass().apply(u.values);
  const auto& D = problem.lumped();

  double scale = 0.0;
  for (double v : Mu) scale = std::max(scale, std::abs(v));
  const double slack = 1e-13 * std::max(scale, 1e-300);

  for (std::uint32_t s = 0; s < (1u << m); ++s) {
    auto K = A;
    for (std::size_t i = 0; i < m; ++i)
      if (s >> i & 1u) K[i * m + i] += D[i];
    auto y = dense_cholesky_solve(std::move(K), Mu, m);

    // Pattern bit i set means y_i >= 0; a zero component fits either way.
    bool consistent = true;
    for (std::size_t i = 0; i < m && consistent; ++i)
      consistent = (s >> i & 1u) ? y[i] >= -slack : y[i] <= slack;
    if (!consistent) continue;

    ForwardSolution sol;
    sol.y = GridFunction(problem.mesh(), std::move(y), Role::State);
    sol.active_pattern.resize(m);
    for (std::size_t i = 0; i < m; ++i) sol.active_pattern[i] = static_cast<int>(s >> i & 1u);
    sol.final_residual = forward_residual(problem, sol.y, u);
    return sol;
  }
  throw Error(ErrorCode::Internal, "no sign pattern is consistent with its own solution");
}

}  // namespace bouligand
