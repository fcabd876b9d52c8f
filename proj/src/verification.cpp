#include "bouligand/verification.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>

#include <json.hpp>

#include "bouligand/error.hpp"
#include "bouligand/experiments.hpp"
#include "bouligand/random.hpp"

namespace bouligand {

namespace {

std::vector<double> subtract(std::span<const double> a, std::span<const double> b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

GridFunction uniform_nodal(const std::shared_ptr<const Mesh>& mesh, NormalStream& rng, double amp) {
  GridFunction g(mesh, Role::Source);
  for (double& v : g.values) v = rng.uniform(-amp, amp);
  return g;
}

GridFunction smooth_bumps(const std::shared_ptr<const Mesh>& mesh, NormalStream& rng) {
  struct Bump {
    double cx, cy, width, sign;
  };
  Bump bumps[3];
  for (auto& b : bumps) {
    b.cx = rng.uniform(0.1, 0.9);
    b.cy = rng.uniform(0.1, 0.9);
    b.width = rng.uniform(0.05, 0.2);
    b.sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  }
  return interpolate(mesh, [&](double x1, double x2) {
    double s = 0.0;
    for (const auto& b : bumps) {
      const double r2 = (x1 - b.cx) * (x1 - b.cx) + (x2 - b.cy) * (x2 - b.cy);
      s += b.sign * std::exp(-r2 / (2.0 * b.width * b.width));
    }
    return s;
  });
}

void scale_to(GridFunction& g, const SparseMatrix& mass, double radius) {
  const double n = m_norm(mass, g);
  for (double& v : g.values) v *= radius / n;
}

}  // namespace

double mismatch_measure(const DiagonalMatrix& lumped, std::span<const double> y,
                        std::span<const double> y_hat) {
  if (y.size() != lumped.dim() || y_hat.size() != lumped.dim())
    throw Error(ErrorCode::DimensionMismatch, "mismatch_measure: sizes differ");
  double area = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool a = y[i] > 0.0, b = y_hat[i] > 0.0;
    if (a != b) area += lumped[i];
  }
  return area;
}

TCCEstimate tcc_ratio(const ForwardProblem& problem, const GridFunction& u,
                      const GridFunction& u_hat) {
  const auto& M = problem.mass();
  const auto y = solve_forward(problem, u).y;
  const auto y_hat = solve_forward(problem, u_hat).y;

  GridFunction step(problem.mesh(), subtract(u_hat.values, u.values), Role::Source);
  const auto dy = subtract(y_hat.values, y.values);

  TCCEstimate est;
  est.radius = m_norm(M, step);
  const double denom = m_norm(M, dy);
  if (!(denom > 1e-14 * est.radius) || est.radius == 0.0)
    throw Error(ErrorCode::Degenerate, "tcc_ratio: states of the pair coincide");

  const auto lin = apply_subderivative(build_linearized(problem, y), M, step);
  est.ratio = m_norm(M, subtract(dy, lin.values)) / denom;
  est.mismatch = mismatch_measure(problem.lumped(), y.values, y_hat.values);
  return est;
}

OracleReport oracle_sweep(int n_h, int trials, std::uint64_t seed) {
  const ForwardProblem problem(build_mesh(n_h));
  NormalStream rng(seed);
  OracleReport rep{n_h, trials, 0.0, 0};
  for (int t = 0; t < trials; ++t) {
    const auto u = uniform_nodal(problem.mesh(), rng, 1.0);
    const auto ssn = solve_forward(problem, u);
    const auto enumerated = brute_force_forward(problem, u);
    double diff = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      diff = std::max(diff, std::abs(ssn.y.values[i] - enumerated.y.values[i]));
    rep.max_diff = std::max(rep.max_diff, diff);
    if (diff > 1e-10) ++rep.failures;
  }
  return rep;
}

AdjointReport adjoint_check(int n_h, int trials, std::uint64_t seed) {
  const ForwardProblem problem(build_mesh(n_h));
  const auto& M = problem.mass();
  NormalStream rng(seed);
  AdjointReport rep{n_h, trials, 0.0, 0.0};
  for (int t = 0; t < trials; ++t) {
    // A smooth sign-changing source plus nodal noise gives states with both
    // signs and a ragged zero level set.
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    auto u = uniform_nodal(problem.mesh(), rng, 10.0);
    const auto smooth = interpolate(problem.mesh(), [&](double x1, double x2) {
      return 40.0 * std::sin(2.0 * std::numbers::pi * x1 + phase) * std::sin(std::numbers::pi * x2);
    });
    for (std::size_t i = 0; i < u.size(); ++i) u.values[i] += smooth.values[i];

    const auto op = build_linearized(problem, solve_forward(problem, u).y);
    const auto h = uniform_nodal(problem.mesh(), rng, 1.0);
    const auto w = uniform_nodal(problem.mesh(), rng, 1.0);
    const auto Gh = apply_subderivative(op, M, h);
    const auto Gw = apply_subderivative(op, M, w);
    const double hn = m_norm(M, h), wn = m_norm(M, w);
    const double asym = std::abs(m_inner(M, h, Gw) - m_inner(M, w, Gh)) / (hn * wn);
    rep.max_asymmetry = std::max(rep.max_asymmetry, asym);
    rep.max_rayleigh = std::max({rep.max_rayleigh, m_norm(M, Gh) / hn, m_norm(M, Gw) / wn});
  }
  return rep;
}

const char* to_string(Sampler s) noexcept {
  return s == Sampler::UniformNodal ? "uniform-nodal" : "smooth-bump";
}

TCCSurvey tcc_survey(const ForwardProblem& problem, const GridFunction& center, int pairs,
                     double ball_radius, std::uint64_t seed) {
  const auto& M = problem.mass();
  NormalStream rng(seed);
  TCCSurvey out;
  out.n_h = problem.mesh()->n_h();
  out.ball_radius = ball_radius;

  for (int k = 0; k < pairs; ++k) {
    const Sampler sampler = k % 2 == 0 ? Sampler::UniformNodal : Sampler::SmoothBump;
    auto draw = [&] {
      auto p = sampler == Sampler::UniformNodal ? uniform_nodal(problem.mesh(), rng, 1.0)
                                                : smooth_bumps(problem.mesh(), rng);
      // Radius uniform in (0, ball_radius].
      scale_to(p, M, ball_radius * (1.0 - rng.uniform()));
      for (std::size_t i = 0; i < p.size(); ++i) p.values[i] += center.values[i];
      return p;
    };
    const auto u = draw();
    const auto u_hat = draw();
    try {
      out.samples.push_back({sampler, tcc_ratio(problem, u, u_hat)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Degenerate) throw;
    }
  }

  for (const auto& s : out.samples) out.max_ratio = std::max(out.max_ratio, s.estimate.ratio);
  for (int p_prime : {4, 6, 10}) {
    double C = 0.0;
    for (const auto& s : out.samples)
      if (s.estimate.mismatch > 0.0)
        C = std::max(C, s.estimate.ratio / std::pow(s.estimate.mismatch, 1.0 / p_prime));
    out.mismatch_fits.emplace_back(p_prime, C);
  }
  return out;
}

Suite suite_from_string(const std::string& s) {
  if (s == "oracle") return Suite::Oracle;
  if (s == "tcc") return Suite::Tcc;
  if (s == "adjoint") return Suite::Adjoint;
  if (s == "all") return Suite::All;
  throw Error(ErrorCode::InvalidArgument, "unknown verification suite '" + s + "'");
}

bool VerificationReport::passed() const {
  for (const auto& r : oracle)
    if (!r.passed()) return false;
  for (const auto& r : adjoint)
    if (!(r.max_asymmetry <= 1e-10)) return false;
  for (const auto& r : tcc)
    if (!(r.max_ratio < 1.0)) return false;
  return true;
}

VerificationReport run_verification(Suite suite, std::uint64_t seed) {
  VerificationReport rep;
  if (suite == Suite::Oracle || suite == Suite::All)
    for (int n_h : {3, 4, 5}) rep.oracle.push_back(oracle_sweep(n_h, 100, seed + n_h));
  if (suite == Suite::Adjoint || suite == Suite::All)
    rep.adjoint.push_back(adjoint_check(65, 50, seed));
  if (suite == Suite::Tcc || suite == Suite::All) {
    const ForwardProblem problem(build_mesh(64));
    const auto fields = exact_fields(problem.mesh());
    rep.tcc.push_back(tcc_survey(problem, fields.source, 200, 0.5, seed));
  }
  return rep;
}

void write_tcc_csv(std::ostream& out, const VerificationReport& report) {
  out << "sampler,radius,mu_hat,m_hat\n" << std::setprecision(17);
  for (const auto& survey : report.tcc)
    for (const auto& s : survey.samples)
      out << to_string(s.sampler) << ',' << s.estimate.radius << ',' << s.estimate.ratio << ','
          << s.estimate.mismatch << '\n';
}

void write_verification_json(std::ostream& out, const VerificationReport& report) {
  using nlohmann::json;
  json j;
  j["passed"] = report.passed();
  j["oracle"] = json::array();
  for (const auto& r : report.oracle)
    j["oracle"].push_back({{"n_h", r.n_h},
                           {"trials", r.trials},
                           {"max_diff", r.max_diff},
                           {"failures", r.failures},
                           {"threshold", 1e-10}});
  j["adjoint"] = json::array();
  for (const auto& r : report.adjoint)
    j["adjoint"].push_back({{"n_h", r.n_h},
                            {"trials", r.trials},
                            {"max_asymmetry", r.max_asymmetry},
                            {"max_rayleigh", r.max_rayleigh},
                            {"threshold", 1e-10}});
  j["tcc"] = json::array();
  for (const auto& r : report.tcc) {
    json fits = json::object();
    for (const auto& [p, C] : r.mismatch_fits) fits[std::to_string(p)] = C;
    j["tcc"].push_back(
        {{"n_h", r.n_h},
         {"ball_radius", r.ball_radius},
         {"pairs", r.samples.size()},
         {"max_mu_hat", r.max_ratio},
         {"mismatch_fit_C_by_p_prime", fits},
         {"sampling",
          "pairs u, u_hat = I_h u_dagger + p with ||p||_M uniform in (0, ball_radius]; even pairs "
          "use i.i.d. uniform[-1,1] nodal p, odd pairs a sum of three Gaussian bumps with centers "
          "in [0.1,0.9]^2, widths in [0.05,0.2] and random signs"}});
  }
  out << j.dump(2) << '\n';
}

}  // namespace bouligand
