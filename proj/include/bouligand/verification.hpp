#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bouligand/forward.hpp"
#include "bouligand/subderivative.hpp"

namespace bouligand {

struct TCCEstimate {
  // ||F(u_hat) - F(u) - G_u(u_hat - u)||_M / ||F(u_hat) - F(u)||_M
  double ratio = 0.0;
  // Lumped area of the set where the sign patterns of F(u) and F(u_hat) disagree.
  double mismatch = 0.0;
  // ||u_hat - u||_M
  double radius = 0.0;
};

// Throws Error(Degenerate) when ||F(u_hat) - F(u)||_M <= 1e-14 ||u_hat - u||_M.
TCCEstimate tcc_ratio(const ForwardProblem& problem, const GridFunction& u,
                      const GridFunction& u_hat);

// Sum of D_ii over nodes with (y_i <= 0, y_hat_i > 0) or (y_i > 0, y_hat_i <= 0).
double mismatch_measure(const DiagonalMatrix& lumped, std::span<const double> y,
                        std::span<const double> y_hat);

struct OracleReport {
  int n_h = 0;
  int trials = 0;
  double max_diff = 0.0;
  int failures = 0;  // trials with max-norm difference above 1e-10
  bool passed() const noexcept { return failures == 0; }
};

// SSN against exhaustive sign-pattern enumeration on seeded sources drawn
// uniformly from [-1, 1] at each node.
OracleReport oracle_sweep(int n_h, int trials, std::uint64_t seed);

struct AdjointReport {
  int n_h = 0;
  int trials = 0;
  // max |h^T M G(w) - w^T M G(h)| / (||h||_M ||w||_M)
  double max_asymmetry = 0.0;
  // max ||G(w)||_M / ||w||_M over the probes
  double max_rayleigh = 0.0;
};

// Random (h, w, u) triples with states of mixed sign.
AdjointReport adjoint_check(int n_h, int trials, std::uint64_t seed);

enum class Sampler { UniformNodal, SmoothBump };
const char* to_string(Sampler s) noexcept;

struct TCCSample {
  Sampler sampler;
  TCCEstimate estimate;
};

struct TCCSurvey {
  int n_h = 0;
  double ball_radius = 0.0;
  std::vector<TCCSample> samples;
  double max_ratio = 0.0;
  // Smallest C with ratio <= C * mismatch^{1/p'} over samples with mismatch > 0.
  std::vector<std::pair<int, double>> mismatch_fits;
};

// Pairs u, u_hat = center + perturbation with M-norm radius drawn uniformly in
// (0, ball_radius]. Half the pairs use i.i.d. uniform nodal perturbations, the
// other half sums of three Gaussian bumps with random centers, widths and signs.
TCCSurvey tcc_survey(const ForwardProblem& problem, const GridFunction& center, int pairs,
                     double ball_radius, std::uint64_t seed);

enum class Suite { Oracle, Tcc, Adjoint, All };
Suite suite_from_string(const std::string& s);

struct VerificationReport {
  std::vector<OracleReport> oracle;
  std::vector<AdjointReport> adjoint;
  std::vector<TCCSurvey> tcc;
  bool passed() const;
};

// oracle: n_h in {3,4,5}, 100 trials each; adjoint: n_h = 65, 50 triples;
// tcc: 200 pairs in an M-ball of radius 0.5 around I_h u_dagger at n_h = 64.
VerificationReport run_verification(Suite suite, std::uint64_t seed);

// CSV of `sampler,radius,mu_hat,m_hat` rows from every TCC survey.
void write_tcc_csv(std::ostream& out, const VerificationReport& report);
void write_verification_json(std::ostream& out, const VerificationReport& report);

}  // namespace bouligand
