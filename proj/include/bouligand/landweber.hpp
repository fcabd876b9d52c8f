#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bouligand/forward.hpp"
#include "bouligand/subderivative.hpp"

namespace bouligand {

enum class StepMode { Constant, Schedule };

struct LandweberConfig {
  double mu = 0.1;
  double tau = 1.4;
  double rho = 5.0;    // radius of the ball around u_dagger; informational
  double lbar = 0.05;  // estimate of sup ||G_u||
  StepMode step_mode = StepMode::Constant;
  // Step n uses schedule[min(n, size-1)]; every entry must lie in [lambda, Lambda].
  std::vector<double> schedule;
  // Bounds for the step sizes. Unset means both equal the constant step.
  std::optional<double> lambda;
  std::optional<double> Lambda;
  int max_iterations = 5000;
  double delta = 0.0;
  // Start each SSN solve from the previous state instead of zero.
  bool warm_start = false;
  bool store_iterates = false;

  // (2 - 2 mu) / lbar^2.
  double constant_step() const noexcept { return (2.0 - 2.0 * mu) / (lbar * lbar); }
  double step(int n) const;
  double lower_step() const;
  double upper_step() const;

  // Throws Error(InvalidArgument).
  void validate() const;
};

struct ParameterCheck {
  // 2(mu+1)/tau - (2 - 2mu - Lambda L^2); needs < 0 for a finite stopping index.
  double choice = 0.0;
  // -1 + mu + 5 Lambda L^2; needs < 0 for asymptotic stability.
  double choice_aux = 0.0;
  bool choice_satisfied = false;
  bool choice_aux_satisfied = false;
};

// Warn-only: never throws on violated conditions.
ParameterCheck check_parameters(const LandweberConfig& cfg, double L);

enum class Termination { Discrepancy, MaxIterations, ForwardFailure };

const char* to_string(Termination t) noexcept;
Termination termination_from_string(const std::string& s);

struct RunRecord {
  // Entry n refers to iterate u_n, n = 0..stopping_index.
  std::vector<double> residual;   // ||y_delta - F(u_n)||_M
  std::vector<double> rel_error;  // E_n; empty without an exact source
  std::vector<int> ssn_iterations;
  int stopping_index = 0;
  Termination reason = Termination::MaxIterations;
  std::string failure_message;
  double delta = 0.0;
  double tau = 0.0;
  LandweberConfig config;
  // Conditions evaluated with L = lbar; violations are reported, not enforced.
  ParameterCheck parameters;
  GridFunction final_iterate;
  std::vector<GridFunction> iterates;  // only with config.store_iterates

  long total_ssn() const;
  double mean_ssn_per_step() const;
  // Discrepancy bookkeeping re-derived from the stored residuals alone.
  bool discrepancy_consistent() const;
};

// u_{n+1} = u_n + w_n G_{u_n}(y_delta - F(u_n)), stopped at the first n with
// ||y_delta - F(u_n)||_M <= tau * delta or at max_iterations.
RunRecord run(const ForwardProblem& problem, const GridFunction& y_data,
              const LandweberConfig& cfg, const GridFunction& u0,
              const GridFunction* u_exact = nullptr);

// ||u_exact - u||_M / ||u_exact||_M. Throws Error(Degenerate) when the
// denominator is zero.
double relative_error(const GridFunction& u, const GridFunction& u_exact,
                      const SparseMatrix& mass);
// ||u_exact - u||_M / sqrt(delta). Throws Error(Degenerate) for delta <= 0.
double empirical_rate(double err_abs, double delta);

}  // namespace bouligand
