#include "bouligand/landweber.hpp"

#include <algorithm>
#include <cmath>

#include "bouligand/error.hpp"

namespace bouligand {

double LandweberConfig::step(int n) const {
  if (step_mode == StepMode::Constant) return constant_step();
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(std::max(n, 0)), schedule.size() - 1);
  return schedule[idx];
}

double LandweberConfig::lower_step() const {
  if (lambda) return *lambda;
  if (step_mode == StepMode::Schedule && !schedule.empty())
    return *std::min_element(schedule.begin(), schedule.end());
  return constant_step();
}

double LandweberConfig::upper_step() const {
  if (Lambda) return *Lambda;
  if (step_mode == StepMode::Schedule && !schedule.empty())
    return *std::max_element(schedule.begin(), schedule.end());
  return constant_step();
}

void LandweberConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (!(tau > 1.0)) fail("tau must exceed 1");
  if (!(mu >= 0.0 && mu < 1.0)) fail("mu must lie in [0, 1)");
  if (!(rho > 0.0)) fail("rho must be positive");
  if (!(lbar > 0.0)) fail("lbar must be positive");
  if (max_iterations < 1) fail("max_iterations must be >= 1");
  if (!(delta >= 0.0) || !std::isfinite(delta)) fail("delta must be finite and >= 0");
  if (step_mode == StepMode::Schedule && schedule.empty()) fail("step schedule is empty");
  const double lo = lower_step(), hi = upper_step();
  if (!(lo > 0.0)) fail("lambda must be positive");
  if (!(lo <= hi)) fail("lambda must not exceed Lambda");
  if (step_mode == StepMode::Constant) {
    if (constant_step() < lo || constant_step() > hi) fail("constant step lies outside [lambda, Lambda]");
  } else {
    for (double w : schedule)
      if (!(w >= lo && w <= hi)) fail("scheduled step lies outside [lambda, Lambda]");
  }
}

ParameterCheck check_parameters(const LandweberConfig& cfg, double L) {
  const double Lambda = cfg.upper_step();
  ParameterCheck out;
  out.choice = 2.0 * (cfg.mu + 1.0) / cfg.tau - (2.0 - 2.0 * cfg.mu - Lambda * L * L);
  out.choice_aux = -1.0 + cfg.mu + 5.0 * Lambda * L * L;
  out.choice_satisfied = out.choice < 0.0;
  out.choice_aux_satisfied = out.choice_aux < 0.0;
  return out;
}

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::Discrepancy: return "discrepancy";
    case Termination::MaxIterations: return "max-iterations";
    case Termination::ForwardFailure: return "forward-failure";
  }
  return "max-iterations";
}

Termination termination_from_string(const std::string& s) {
  if (s == "discrepancy") return Termination::Discrepancy;
  if (s == "max-iterations") return Termination::MaxIterations;
  if (s == "forward-failure") return Termination::ForwardFailure;
  throw Error(ErrorCode::InvalidArgument, "unknown termination reason '" + s + "'");
}

long RunRecord::total_ssn() const {
  long total = 0;
  for (int k : ssn_iterations) total += k;
  return total;
}

double RunRecord::mean_ssn_per_step() const {
  return ssn_iterations.empty() ? 0.0
                                : static_cast<double>(total_ssn()) / ssn_iterations.size();
}

bool RunRecord::discrepancy_consistent() const {
  const double threshold = tau * delta;
  const auto N = static_cast<std::size_t>(stopping_index);
  const std::size_t expected = reason == Termination::ForwardFailure ? N : N + 1;
  if (stopping_index < 0 || residual.size() != expected) return false;
  const std::size_t above = reason == Termination::Discrepancy ? N : residual.size();
  for (std::size_t n = 0; n < above; ++n)
    if (!(residual[n] > threshold)) return false;
  if (reason == Termination::Discrepancy && !(residual[N] <= threshold)) return false;
  return true;
}

double relative_error(const GridFunction& u, const GridFunction& u_exact,
                      const SparseMatrix& mass) {
  if (u.size() != u_exact.size())
    throw Error(ErrorCode::DimensionMismatch, "relative_error: sizes differ");
  const double denom = m_norm(mass, u_exact);
  if (!(denom > 0.0)) throw Error(ErrorCode::Degenerate, "relative_error: exact source has zero norm");
  std::vector<double> diff(u.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = u_exact.values[i] - u.values[i];
  return m_norm(mass, diff) / denom;
}

double empirical_rate(double err_abs, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::Degenerate, "empirical_rate needs delta > 0");
  return err_abs / std::sqrt(delta);
}

RunRecord run(const ForwardProblem& problem, const GridFunction& y_data,
              const LandweberConfig& cfg, const GridFunction& u0, const GridFunction* u_exact) {
  cfg.validate();
  const std::size_t n_dof = problem.dim();
  if (y_data.size() != n_dof || u0.size() != n_dof || (u_exact && u_exact->size() != n_dof))
    throw Error(ErrorCode::DimensionMismatch, "Landweber inputs do not live on the problem mesh");

  const auto& M = problem.mass();
  const double threshold = cfg.tau * cfg.delta;
  const double exact_norm = u_exact ? m_norm(M, *u_exact) : 0.0;
  if (u_exact && !(exact_norm > 0.0))
    throw Error(ErrorCode::Degenerate, "exact source has zero norm");

  RunRecord rec;
  rec.config = cfg;
  rec.delta = cfg.delta;
  rec.tau = cfg.tau;
  rec.parameters = check_parameters(cfg, cfg.lbar);

  GridFunction u = u0;
  u.role = Role::Source;
  std::vector<double> warm;
  std::vector<double> diff(n_dof);

  for (int n = 0;; ++n) {
    ForwardSolution fwd;
    try {
      fwd = solve_forward(problem, u, warm);
    } catch (const Error& e) {
      rec.reason = Termination::ForwardFailure;
      rec.failure_message = e.what();
      rec.stopping_index = n;
      break;
    }
    if (cfg.warm_start) warm = fwd.y.values;

    GridFunction r(problem.mesh(), Role::Data);
    for (std::size_t i = 0; i < n_dof; ++i) r.values[i] = y_data.values[i] - fwd.y.values[i];
    const double res = m_norm(M, r);
    rec.residual.push_back(res);
    rec.ssn_iterations.push_back(fwd.ssn_iterations);
    if (u_exact) {
      for (std::size_t i = 0; i < n_dof; ++i) diff[i] = u_exact->values[i] - u.values[i];
      rec.rel_error.push_back(m_norm(M, diff) / exact_norm);
    }
    if (cfg.store_iterates) rec.iterates.push_back(u);

    rec.stopping_index = n;
    if (res <= threshold) {
      rec.reason = Termination::Discrepancy;
      break;
    }
    if (n >= cfg.max_iterations) {
      rec.reason = Termination::MaxIterations;
      break;
    }

    GridFunction eta;
    try {
      eta = apply_subderivative(build_linearized(problem, fwd.y), M, r);
    } catch (const Error& e) {
      rec.reason = Termination::ForwardFailure;
      rec.failure_message = e.what();
      // u_{n+1} could not be formed; the history ends with residual n.
      rec.stopping_index = n + 1;
      rec.final_iterate = u;
      return rec;
    }
    const double w = cfg.step(n);
    for (std::size_t i = 0; i < n_dof; ++i) u.values[i] += w * eta.values[i];
  }
  rec.final_iterate = std::move(u);
  return rec;
}

}  // namespace bouligand
