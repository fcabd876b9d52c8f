#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bouligand/landweber.hpp"

namespace bouligand {

// Closed-form reconstruction target. The state
//   y(x1,x2) = (x1-beta)^2 (x1-1+beta)^2 sin(2 pi x2)  on x1 in (beta, 1-beta], 0 elsewhere
// solves -Lap y + max(y,0) = u for the matching source u. The starting guess
// u_bar = u - 2 rho sin(pi x1) sin(2 pi x2) satisfies a source condition.
struct ExactData {
  double beta = 0.005;
  double rho = 5.0;

  double state(double x1, double x2) const;
  double source(double x1, double x2) const;
  double start(double x1, double x2) const;
};

struct ExactFields {
  GridFunction source;  // I_h u_dagger
  GridFunction state;   // I_h y_dagger
  GridFunction start;   // I_h u_bar
};

// Throws Error(InvalidArgument) unless beta lies in (0, 0.5).
ExactFields exact_fields(std::shared_ptr<const Mesh> mesh, const ExactData& data = {});

enum class NoiseMode { RawAmplitude, RescaleToTarget };

struct NoiseSpec {
  std::uint64_t seed = 0;
  NoiseMode mode = NoiseMode::RescaleToTarget;
  // sigma in raw mode, the target ||y_delta - y||_M in rescale mode.
  double value = 0.0;
};

struct NoisyData {
  GridFunction data;
  double delta = 0.0;  // measured ||y_delta - y||_M
};

NoisyData add_noise(const GridFunction& state, const NoiseSpec& spec, const SparseMatrix& mass);

enum class StartKind { Zero, Source };
StartKind start_from_string(const std::string& s);
const char* to_string(StartKind s) noexcept;

GridFunction starting_point(const ExactFields& fields, StartKind start);

// Landweber with delta = 0 for exactly `iters` steps (the discrepancy test
// never fires on nonzero residuals).
RunRecord run_noise_free(const ForwardProblem& problem, const ExactFields& fields,
                         StartKind start, int iters, LandweberConfig cfg = {});

struct TableRow {
  double delta_target = 0.0;
  std::uint64_t seed = 0;
  double delta = 0.0;
  int stopping_index = 0;
  double rel_error = 0.0;
  double rate = 0.0;
  long ssn_total = 0;
  double mean_ssn = 0.0;
  std::string reason;
  RunRecord record;
};

// One Landweber run per (delta target, seed) in rescale mode. Cells run in
// parallel over the shared problem; per-cell failures land in `reason`.
std::vector<TableRow> run_table(const ForwardProblem& problem, const ExactFields& fields,
                                const std::vector<double>& deltas,
                                const std::vector<std::uint64_t>& seeds, StartKind start,
                                const LandweberConfig& cfg = {}, int threads = 0);

// Columns `delta,seed,N,rel_error,rate,ssn_total,reason`.
void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows);
std::vector<TableRow> read_table_csv(std::istream& in);

}  // namespace bouligand
