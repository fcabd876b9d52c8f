#include <doctest.h>

#include <bouligand/error.hpp>
#include <bouligand/experiments.hpp>
#include <bouligand/forward.hpp>
#include <bouligand/verification.hpp>

#include <sstream>

using namespace bouligand;

TEST_CASE("mismatch measure") {
  DiagonalMatrix D({0.25, 0.5, 1.0});
  std::vector<double> y{1.0, -1.0, 0.0};
  CHECK(mismatch_measure(D, y, y) == 0.0);
  CHECK(mismatch_measure(D, y, std::vector<double>{-1.0, -1.0, 0.0}) == 0.25);
  // zero counts as non-positive
  CHECK(mismatch_measure(D, y, std::vector<double>{1.0, 0.0, 2.0}) == 1.0);
  CHECK_THROWS_AS(mismatch_measure(D, y, std::vector<double>{1.0}), Error);
}

TEST_CASE("tcc ratio degenerate and linear regimes") {
  ForwardProblem p(build_mesh(9));
  GridFunction u(p.mesh(), Role::Source);
  for (auto& v : u.values) v = -1.0;
  CHECK_THROWS_AS(tcc_ratio(p, u, u), Error);
  // both sources strictly negative: F is linear, ratio vanishes
  auto v = u;
  v.values[3] = -2.0;
  auto est = tcc_ratio(p, u, v);
  CHECK(est.ratio <= 1e-9);
  CHECK(est.mismatch == 0.0);
}

TEST_CASE("small verification sweeps") {
  auto o = oracle_sweep(4, 20, 9);
  CHECK(o.passed());
  CHECK(o.max_diff <= 1e-10);
  auto a = adjoint_check(17, 5, 9);
  CHECK(a.max_asymmetry <= 1e-10);
  CHECK(a.max_rayleigh > 0.0);
  ForwardProblem p(build_mesh(17));
  auto f = exact_fields(p.mesh());
  auto s = tcc_survey(p, f.source, 10, 0.5, 4);
  CHECK(s.samples.size() > 0);
  CHECK(s.max_ratio < 1.0);
  CHECK(suite_from_string("all") == Suite::All);
  CHECK_THROWS_AS(suite_from_string("bogus"), Error);
  VerificationReport rep;
  rep.tcc.push_back(s);
  std::stringstream csv;
  write_tcc_csv(csv, rep);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "sampler,radius,mu_hat,m_hat");
}
