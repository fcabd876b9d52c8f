#include "bouligand/experiments.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <thread>

#include "bouligand/error.hpp"
#include "bouligand/random.hpp"

namespace bouligand {

namespace {
constexpr double kPi = std::numbers::pi;
}

double ExactData::state(double x1, double x2) const {
  if (!(x1 > beta && x1 <= 1.0 - beta)) return 0.0;
  const double a = x1 - beta, b = x1 - 1.0 + beta;
  return a * a * b * b * std::sin(2.0 * kPi * x2);
}

double ExactData::source(double x1, double x2) const {
  if (!(x1 > beta && x1 <= 1.0 - beta)) return 0.0;
  const double y = state(x1, x2);
  const double a = x1 - beta, b = x1 - 1.0 + beta;
  const double c = 2.0 * x1 - 1.0;
  // -Lap y = 4 pi^2 y - p''(x1) sin(2 pi x2) with p'' = 2((2x1-1)^2 + 2ab).
  return std::max(y, 0.0) + 4.0 * kPi * kPi * y - 2.0 * (c * c + 2.0 * b * a) * std::sin(2.0 * kPi * x2);
}

double ExactData::start(double x1, double x2) const {
  return source(x1, x2) - 2.0 * rho * std::sin(kPi * x1) * std::sin(2.0 * kPi * x2);
}

ExactFields exact_fields(std::shared_ptr<const Mesh> mesh, const ExactData& data) {
  if (!(data.beta > 0.0 && data.beta < 0.5))
    throw Error(ErrorCode::InvalidArgument, "beta must lie in (0, 0.5)");
  ExactFields out;
  out.source = interpolate(mesh, [&](double x1, double x2) { return data.source(x1, x2); },
                           Role::Source);
  out.state = interpolate(mesh, [&](double x1, double x2) { return data.state(x1, x2); },
                          Role::State);
  out.start = interpolate(mesh, [&](double x1, double x2) { return data.start(x1, x2); },
                          Role::Source);
  return out;
}

NoisyData add_noise(const GridFunction& state, const NoiseSpec& spec, const SparseMatrix& mass) {
  if (!(spec.value >= 0.0) || !std::isfinite(spec.value))
    throw Error(ErrorCode::InvalidArgument, "noise amplitude/target must be finite and >= 0");
  NoisyData out{state, 0.0};
  out.data.role = Role::Data;
  if (spec.value == 0.0) return out;

  NormalStream rng(spec.seed);
  std::vector<double> noise(state.size());
  for (double& v : noise) v = rng.normal();

  double scale = spec.value;
  if (spec.mode == NoiseMode::RescaleToTarget) {
    const double norm = m_norm(mass, noise);
    if (!(norm > 0.0)) throw Error(ErrorCode::Degenerate, "noise draw has zero norm");
    scale = spec.value / norm;
  }
  std::vector<double> diff(state.size());
  for (std::size_t i = 0; i < noise.size(); ++i) {
    out.data.values[i] = state.values[i] + scale * noise[i];
    diff[i] = out.data.values[i] - state.values[i];
  }
  out.delta = m_norm(mass, diff);
  return out;
}

StartKind start_from_string(const std::string& s) {
  if (s == "zero") return StartKind::Zero;
  if (s == "source") return StartKind::Source;
  throw Error(ErrorCode::InvalidArgument, "start must be 'zero' or 'source', got '" + s + "'");
}

const char* to_string(StartKind s) noexcept { return s == StartKind::Zero ? "zero" : "source"; }

GridFunction starting_point(const ExactFields& fields, StartKind start) {
  if (start == StartKind::Source) return fields.start;
  return GridFunction(fields.source.mesh, Role::Source);
}

RunRecord run_noise_free(const ForwardProblem& problem, const ExactFields& fields,
                         StartKind start, int iters, LandweberConfig cfg) {
  if (iters < 0) throw Error(ErrorCode::InvalidArgument, "iteration count must be >= 0");
  cfg.delta = 0.0;
  const GridFunction u0 = starting_point(fields, start);
  if (iters > 0) {
    cfg.max_iterations = iters;
    return run(problem, fields.state, cfg, u0, &fields.source);
  }

  // Zero steps: only the starting point is evaluated.
  cfg.validate();
  RunRecord rec;
  rec.config = cfg;
  rec.config.max_iterations = 0;
  rec.tau = cfg.tau;
  rec.parameters = check_parameters(cfg, cfg.lbar);
  const auto fwd = solve_forward(problem, u0);
  std::vector<double> r(problem.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = fields.state.values[i] - fwd.y.values[i];
  rec.residual.push_back(m_norm(problem.mass(), r));
  rec.rel_error.push_back(relative_error(u0, fields.source, problem.mass()));
  rec.ssn_iterations.push_back(fwd.ssn_iterations);
  rec.reason = rec.residual.front() <= 0.0 ? Termination::Discrepancy : Termination::MaxIterations;
  rec.final_iterate = u0;
  return rec;
}

std::vector<TableRow> run_table(const ForwardProblem& problem, const ExactFields& fields,
                                const std::vector<double>& deltas,
                                const std::vector<std::uint64_t>& seeds, StartKind start,
                                const LandweberConfig& cfg, int threads) {
  for (double d : deltas)
    if (!(d > 0.0)) throw Error(ErrorCode::InvalidArgument, "noise levels must be positive");

  std::vector<TableRow> rows;
  for (std::uint64_t seed : seeds)
    for (double d : deltas) {
      TableRow row;
      row.delta_target = d;
      row.seed = seed;
      rows.push_back(std::move(row));
    }

  const GridFunction u0 = starting_point(fields, start);
  const double exact_norm = m_norm(problem.mass(), fields.source);

  auto work = [&](TableRow& row) {
    try {
      const auto noisy = add_noise(fields.state, {row.seed, NoiseMode::RescaleToTarget, row.delta_target},
                                   problem.mass());
      LandweberConfig c = cfg;
      c.delta = noisy.delta;
      row.delta = noisy.delta;
      row.record = run(problem, noisy.data, c, u0, &fields.source);
      row.stopping_index = row.record.stopping_index;
      row.rel_error = row.record.rel_error.empty() ? std::nan("") : row.record.rel_error.back();
      row.rate = empirical_rate(row.rel_error * exact_norm, row.delta);
      row.ssn_total = row.record.total_ssn();
      row.mean_ssn = row.record.mean_ssn_per_step();
      row.reason = to_string(row.record.reason);
    } catch (const std::exception& e) {
      row.reason = std::string("error: ") + e.what();
    }
  };

  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(rows.size())));
  if (workers == 1) {
    for (auto& row : rows) work(row);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (std::size_t k; (k = next.fetch_add(1)) < rows.size();) work(rows[k]);
    });
  pool.clear();
  return rows;
}

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows) {
  out << "delta,seed,N,rel_error,rate,ssn_total,reason\n" << std::setprecision(17);
  for (const auto& r : rows) {
    // Commas would break the row; failure messages keep their text otherwise.
    std::string reason = r.reason;
    for (char& ch : reason)
      if (ch == ',' || ch == '\n') ch = ';';
    out << r.delta << ',' << r.seed << ',' << r.stopping_index << ',' << r.rel_error << ','
        << r.rate << ',' << r.ssn_total << ',' << reason << '\n';
  }
}

std::vector<TableRow> read_table_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("delta,seed,N,rel_error,rate,ssn_total,reason", 0) != 0)
    throw Error(ErrorCode::Io, "table CSV lacks its header");
  std::vector<TableRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f[7];
    for (int k = 0; k < 6; ++k)
      if (!std::getline(ls, f[k], ',')) throw Error(ErrorCode::Io, "malformed table row '" + line + "'");
    std::getline(ls, f[6]);
    TableRow r;
    try {
      r.delta = std::stod(f[0]);
      r.seed = std::stoull(f[1]);
      r.stopping_index = std::stoi(f[2]);
      r.rel_error = f[3] == "nan" ? std::nan("") : std::stod(f[3]);
      r.rate = f[4] == "nan" ? std::nan("") : std::stod(f[4]);
      r.ssn_total = std::stol(f[5]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Io, "malformed table row '" + line + "'");
    }
    r.reason = f[6];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace bouligand
