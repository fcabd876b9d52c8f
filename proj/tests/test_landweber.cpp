#include <doctest.h>

#include <bouligand/error.hpp>
#include <bouligand/experiments.hpp>
#include <bouligand/fem.hpp>
#include <bouligand/forward.hpp>
#include <bouligand/landweber.hpp>
#include <bouligand/record_io.hpp>

#include <cmath>
#include <sstream>

using namespace bouligand;

TEST_CASE("parameter checks") {
  LandweberConfig cfg;
  CHECK(cfg.constant_step() == doctest::Approx(720.0).epsilon(1e-14));
  auto pc = check_parameters(cfg, cfg.lbar);
  CHECK(std::abs(pc.choice - (2.2 / 1.4)) <= 1e-12);
  CHECK(std::abs(pc.choice_aux - 8.1) <= 1e-12);
  CHECK_FALSE(pc.choice_satisfied);
  CHECK_FALSE(pc.choice_aux_satisfied);

  LandweberConfig small;
  small.mu = 0.0;
  small.tau = 2.0;
  small.lambda = 0.1;
  small.Lambda = 0.1;
  small.step_mode = StepMode::Schedule;
  small.schedule = {0.1};
  auto ok = check_parameters(small, 1.0);
  CHECK(std::abs(ok.choice + 0.9) <= 1e-12);
  CHECK(std::abs(ok.choice_aux + 0.5) <= 1e-12);
  CHECK(ok.choice_satisfied);
  CHECK(ok.choice_aux_satisfied);

  small.tau = 1e15;
  small.Lambda = 1e-15;
  small.lambda = 1e-15;
  small.schedule = {1e-15};
  auto lim = check_parameters(small, 1.0);
  CHECK(lim.choice == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(lim.choice_aux == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("config validation and schedules") {
  LandweberConfig c;
  c.tau = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.step_mode = StepMode::Schedule;
  CHECK_THROWS_AS(c.validate(), Error);
  c.schedule = {1.0, 2.0};
  CHECK_NOTHROW(c.validate());
  CHECK(c.step(0) == 1.0);
  CHECK(c.step(7) == 2.0);
  c.Lambda = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("relative error and rate") {
  auto mesh = build_mesh(9);
  auto fm = assemble(*mesh);
  auto u = interpolate(mesh, [](double x, double y) { return x * y; });
  CHECK(relative_error(u, u, fm.mass) == 0.0);
  CHECK(relative_error(GridFunction(mesh, Role::Source), u, fm.mass) == doctest::Approx(1.0));
  CHECK_THROWS_AS(relative_error(u, GridFunction(mesh, Role::Source), fm.mass), Error);
  CHECK(empirical_rate(0.3, 0.01) == doctest::Approx(3.0));
  CHECK_THROWS_AS(empirical_rate(1.0, 0.0), Error);
}

TEST_CASE("exact fields") {
  auto mesh = build_mesh(5);
  ExactData d;
  // (x1 - b)^2 (x1 - 1 + b)^2 sin(2 pi x2) at (0.5, 0.25)
  CHECK(d.state(0.5, 0.25) == doctest::Approx(std::pow(0.495, 4)).epsilon(1e-14));
  CHECK(d.state(0.004, 0.25) == 0.0);
  CHECK(d.state(0.996, 0.25) == doctest::Approx(0.0).epsilon(1e-14));
  auto f = exact_fields(mesh, d);
  auto k = mesh->interior_index(2, 1);
  CHECK(f.start.values[k] == doctest::Approx(f.source.values[k] - 10.0).epsilon(1e-14));
  // source identity: u = max(y, 0) + (-Laplace y); check the Laplacian by finite differences
  const double x1 = 0.37, x2 = 0.61, e = 1e-4;
  double lap = (d.state(x1 + e, x2) + d.state(x1 - e, x2) + d.state(x1, x2 + e) +
                d.state(x1, x2 - e) - 4 * d.state(x1, x2)) / (e * e);
  CHECK(d.source(x1, x2) == doctest::Approx(std::max(d.state(x1, x2), 0.0) - lap).epsilon(1e-6));
  ExactData bad;
  bad.beta = 0.7;
  CHECK_THROWS_AS(exact_fields(mesh, bad), Error);
}

TEST_CASE("noise is deterministic and hits the target") {
  auto mesh = build_mesh(33);
  auto fm = assemble(*mesh);
  auto f = exact_fields(mesh);
  auto a = add_noise(f.state, {7, NoiseMode::RescaleToTarget, 1e-3}, fm.mass);
  auto b = add_noise(f.state, {7, NoiseMode::RescaleToTarget, 1e-3}, fm.mass);
  auto c = add_noise(f.state, {8, NoiseMode::RescaleToTarget, 1e-3}, fm.mass);
  CHECK(a.data.values == b.data.values);
  CHECK(a.data.values != c.data.values);
  CHECK(a.delta == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(a.data.role == Role::Data);
  auto raw = add_noise(f.state, {7, NoiseMode::RawAmplitude, 0.01}, fm.mass);
  // E||sigma xi||_M^2 = sigma^2 trace(M) ~ sigma^2 |Omega|
  CHECK(raw.delta == doctest::Approx(0.01).epsilon(0.1));
  auto none = add_noise(f.state, {7, NoiseMode::RawAmplitude, 0.0}, fm.mass);
  CHECK(none.delta == 0.0);
  CHECK(none.data.values == f.state.values);
}

TEST_CASE("Landweber stops at once when the start already meets the discrepancy") {
  ForwardProblem p(build_mesh(9));
  auto f = exact_fields(p.mesh());
  LandweberConfig cfg;
  cfg.delta = 1e6;
  auto rec = run(p, f.state, cfg, f.start, &f.source);
  CHECK(rec.stopping_index == 0);
  CHECK(rec.reason == Termination::Discrepancy);
  CHECK(rec.final_iterate.values == f.start.values);
  CHECK(rec.discrepancy_consistent());
}

TEST_CASE("short noisy run keeps its invariants and round-trips") {
  ForwardProblem p(build_mesh(17));
  auto f = exact_fields(p.mesh());
  auto noisy = add_noise(f.state, {3, NoiseMode::RescaleToTarget, 1e-2}, p.mass());
  LandweberConfig cfg;
  cfg.delta = noisy.delta;
  cfg.store_iterates = true;
  auto rec = run(p, noisy.data, cfg, f.start, &f.source);
  CHECK(rec.reason == Termination::Discrepancy);
  CHECK(rec.stopping_index > 0);
  CHECK(rec.discrepancy_consistent());
  CHECK(rec.iterates.size() == rec.residual.size());
  for (int n = 0; n < rec.stopping_index; ++n)
    CHECK(rec.rel_error[n + 1] <= rec.rel_error[n] + 1e-12);
  CHECK(rec.mean_ssn_per_step() >= 1.0);

  auto again = run(p, noisy.data, cfg, f.start, &f.source);
  CHECK(again.residual == rec.residual);
  CHECK(again.final_iterate.values == rec.final_iterate.values);

  std::stringstream csv, json;
  write_history_csv(csv, rec);
  write_summary_json(json, rec);
  auto back = read_run_record(csv, json);
  CHECK(back.residual == rec.residual);
  CHECK(back.rel_error == rec.rel_error);
  CHECK(back.ssn_iterations == rec.ssn_iterations);
  CHECK(back.stopping_index == rec.stopping_index);
  CHECK(back.delta == rec.delta);
  CHECK(back.tau == rec.tau);
  CHECK(back.reason == rec.reason);
  CHECK(back.discrepancy_consistent());
  CHECK(sidecar_path("out/run.csv") == "out/run.json");
}

TEST_CASE("forward failure truncates the record") {
  ForwardProblem p(build_mesh(17));
  p.options().max_iterations = 1;
  auto f = exact_fields(p.mesh());
  LandweberConfig cfg;
  cfg.delta = 1e-8;
  auto rec = run(p, f.state, cfg, f.start, &f.source);
  CHECK(rec.reason == Termination::ForwardFailure);
  CHECK_FALSE(rec.failure_message.empty());
  CHECK(rec.residual.size() == static_cast<std::size_t>(rec.stopping_index));
  CHECK(rec.discrepancy_consistent());
}

TEST_CASE("noise-free run with zero steps") {
  ForwardProblem p(build_mesh(9));
  auto f = exact_fields(p.mesh());
  auto rec = run_noise_free(p, f, StartKind::Zero, 0);
  CHECK(rec.residual.size() == 1);
  CHECK(rec.rel_error[0] == doctest::Approx(1.0));
  auto two = run_noise_free(p, f, StartKind::Zero, 2);
  CHECK(two.residual.size() == 3);
  CHECK(two.residual[2] < two.residual[0]);
}

TEST_CASE("table rows and csv") {
  ForwardProblem p(build_mesh(17));
  auto f = exact_fields(p.mesh());
  auto rows = run_table(p, f, {1e-2, 1e-3}, {1, 2}, StartKind::Source, {}, 2);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.reason == "discrepancy");
    CHECK(r.record.discrepancy_consistent());
    CHECK(r.rate == doctest::Approx(r.rel_error * m_norm(p.mass(), f.source) / std::sqrt(r.delta)));
  }
  // same seed, same delta, same result regardless of scheduling
  auto solo = run_table(p, f, {1e-3}, {2}, StartKind::Source, {}, 1);
  CHECK(solo[0].record.residual == rows[3].record.residual);
  std::stringstream ss;
  write_table_csv(ss, rows);
  auto back = read_table_csv(ss);
  REQUIRE(back.size() == rows.size());
  CHECK(back[1].stopping_index == rows[1].stopping_index);
  CHECK(back[1].rel_error == rows[1].rel_error);
  CHECK(back[1].seed == rows[1].seed);
}
