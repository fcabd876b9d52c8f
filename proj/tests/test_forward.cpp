#include <doctest.h>

#include <bouligand/error.hpp>
#include <bouligand/fem.hpp>
#include <bouligand/forward.hpp>
#include <bouligand/nonlinearity.hpp>
#include <bouligand/random.hpp>
#include <bouligand/subderivative.hpp>

#include <algorithm>
#include <cmath>

using namespace bouligand;

namespace {

GridFunction random_source(const std::shared_ptr<const Mesh>& mesh, NormalStream& rng,
                           double amp) {
  GridFunction g(mesh, Role::Source);
  for (auto& v : g.values) v = rng.uniform(-amp, amp);
  return g;
}

}  // namespace

TEST_CASE("max nonlinearity conventions") {
  auto f = PC1Nonlinearity::max0();
  CHECK(f(-2.0) == 0.0);
  CHECK(f(3.0) == 3.0);
  CHECK(f.newton_slope(0.0) == 1.0);
  CHECK(f.bouligand_slope(0.0) == 0.0);
  CHECK(f.newton_slope(-1e-300) == 0.0);
  CHECK(f.bouligand_slope(1e-300) == 1.0);
}

TEST_CASE("nonlinearity validation") {
  using B = PC1Nonlinearity::Branch;
  B zero{[](double) { return 0.0; }, [](double) { return 0.0; }};
  B ident{[](double t) { return t; }, [](double) { return 1.0; }};
  B jump{[](double t) { return t + 1.0; }, [](double) { return 1.0; }};
  B down{[](double t) { return -t; }, [](double) { return -1.0; }};
  CHECK_NOTHROW(PC1Nonlinearity({0.0}, {zero, ident}, true));
  CHECK_THROWS_AS(PC1Nonlinearity({0.0}, {zero}), Error);
  CHECK_THROWS_AS(PC1Nonlinearity({0.0}, {zero, jump}), Error);
  CHECK_THROWS_AS(PC1Nonlinearity({0.0}, {zero, down}), Error);
  CHECK_THROWS_AS(PC1Nonlinearity({1.0, 0.0}, {zero, zero, zero}), Error);
  // Three-branch clamp-like map, continuous and monotone.
  B two{[](double t) { return 2 * t - 1.0; }, [](double) { return 2.0; }};
  PC1Nonlinearity g({0.0, 1.0}, {zero, ident, two}, true, "kink");
  CHECK(g.bouligand_branch(1.0) == 1);
  CHECK(g.newton_branch(1.0) == 2);
  CHECK(g(2.0) == 3.0);
}

TEST_CASE("n_h = 3 hand solutions") {
  ForwardProblem p(build_mesh(3));
  auto one = GridFunction(p.mesh(), {1.0}, Role::Source);
  auto s = solve_forward(p, one);
  CHECK(std::abs(s.y.values[0] - 0.125 / 4.25) <= 1e-12);
  CHECK(s.active_pattern[0] == 1);
  CHECK(forward_residual(p, s.y, one) <= 1e-12);
  auto minus = GridFunction(p.mesh(), {-1.0}, Role::Source);
  CHECK(std::abs(solve_forward(p, minus).y.values[0] + 0.125 / 4) <= 1e-12);
  auto zero = GridFunction(p.mesh(), {0.0}, Role::Source);
  CHECK(solve_forward(p, zero).y.values[0] == 0.0);
  CHECK(brute_force_forward(p, zero).y.values[0] == 0.0);
  auto bf = brute_force_forward(p, one);
  CHECK(std::abs(bf.y.values[0] - 0.125 / 4.25) <= 1e-12);
}

TEST_CASE("brute force refuses large meshes") {
  ForwardProblem p(build_mesh(7));
  GridFunction u(p.mesh(), Role::Source);
  try {
    brute_force_forward(p, u);
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Refused);
  }
}

TEST_CASE("SSN agrees with enumeration") {
  NormalStream rng(11);
  for (int n_h : {3, 4, 5, 6}) {
    ForwardProblem p(build_mesh(n_h));
    for (int t = 0; t < 40; ++t) {
      auto u = random_source(p.mesh(), rng, 1.0);
      auto a = solve_forward(p, u);
      auto b = brute_force_forward(p, u);
      for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(std::abs(a.y.values[i] - b.y.values[i]) <= 1e-10);
      CHECK(a.ssn_iterations <= 30);
    }
  }
}

TEST_CASE("comparison principle and Lipschitz bound") {
  NormalStream rng(5);
  for (int n_h : {9, 17}) {
    ForwardProblem p(build_mesh(n_h));
    const auto& M = p.mass();
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      auto u = random_source(p.mesh(), rng, 20.0);
      auto v = u;
      for (auto& x : v.values) x += rng.uniform(0.0, 5.0);
      auto yu = solve_forward(p, u).y;
      auto yv = solve_forward(p, v).y;
      std::vector<double> dy(u.size()), du(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(yu.values[i] <= yv.values[i] + 1e-10);
        dy[i] = yv.values[i] - yu.values[i];
        du[i] = v.values[i] - u.values[i];
      }
      worst = std::max(worst, m_norm(M, dy) / m_norm(M, du));
    }
    // F is a contraction-like map: the constant is bounded by 1/lambda_min(A) ~ 1/(2 pi^2).
    CHECK(worst <= 1.0 / (2 * M_PI * M_PI) * 1.05);
  }
}

TEST_CASE("warm start and dimension errors") {
  ForwardProblem p(build_mesh(9));
  NormalStream rng(2);
  auto u = random_source(p.mesh(), rng, 30.0);
  auto cold = solve_forward(p, u);
  auto warm = solve_forward(p, u, cold.y.values);
  CHECK(warm.ssn_iterations <= 2);
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(warm.y.values[i] == doctest::Approx(cold.y.values[i]).epsilon(1e-10));
  GridFunction wrong(build_mesh(5), Role::Source);
  CHECK_THROWS_AS(solve_forward(p, wrong), Error);
}

TEST_CASE("smooth nonlinearity uses the pattern-and-residual stop") {
  using B = PC1Nonlinearity::Branch;
  B zero{[](double) { return 0.0; }, [](double) { return 0.0; }};
  B cube{[](double t) { return t * t * t + t; }, [](double t) { return 3 * t * t + 1; }};
  ForwardProblem p(build_mesh(9), PC1Nonlinearity({0.0}, {zero, cube}, false, "cubic"));
  NormalStream rng(8);
  auto u = random_source(p.mesh(), rng, 50.0);
  auto s = solve_forward(p, u);
  CHECK(s.final_residual <= 1e-11);
  CHECK(forward_residual(p, s.y, u) <= 1e-11);
}

TEST_CASE("subderivative scalar cases") {
  ForwardProblem p(build_mesh(3));
  GridFunction w(p.mesh(), {1.0}, Role::Data);
  auto neg = build_linearized(p, GridFunction(p.mesh(), {-0.5}, Role::State));
  CHECK(apply_subderivative(neg, p.mass(), w).values[0] == doctest::Approx(0.03125));
  auto pos = build_linearized(p, GridFunction(p.mesh(), {0.5}, Role::State));
  CHECK(apply_subderivative(pos, p.mass(), w).values[0] == doctest::Approx(0.125 / 4.25));
  // strict convention: a zero state is inactive
  auto at0 = build_linearized(p, GridFunction(p.mesh(), {0.0}, Role::State));
  CHECK(at0.coefficient()[0] == 0.0);
}

TEST_CASE("G_u is M-self-adjoint and exact on a fixed pattern") {
  ForwardProblem p(build_mesh(17));
  const auto& M = p.mass();
  NormalStream rng(21);
  auto u = random_source(p.mesh(), rng, 40.0);
  auto y = solve_forward(p, u).y;
  auto op = build_linearized(p, y);
  auto h = random_source(p.mesh(), rng, 1.0);
  auto w = random_source(p.mesh(), rng, 1.0);
  auto gh = apply_subderivative(op, M, h);
  auto gw = apply_subderivative(op, M, w);
  double a = m_inner(M, gh.values, w.values), b = m_inner(M, h.values, gw.values);
  CHECK(std::abs(a - b) <= 1e-10 * std::max(std::abs(a), std::abs(b)));
  CHECK(m_inner(M, gh.values, h.values) > 0.0);

  // Shrink the step until every strict sign survives; F is affine along it then.
  GridFunction yh;
  double s = 1.0;
  for (;; s *= 0.5) {
    REQUIRE(s > 1e-12);
    auto uh = u;
    for (std::size_t i = 0; i < u.size(); ++i) uh.values[i] += s * h.values[i];
    yh = solve_forward(p, uh).y;
    bool same = true;
    for (std::size_t i = 0; i < u.size(); ++i) same = same && (yh.values[i] > 0) == (y.values[i] > 0);
    if (same) break;
  }
  double err = 0.0, nrm = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double d = yh.values[i] - y.values[i];
    err = std::max(err, std::abs(d - s * gh.values[i]));
    nrm = std::max(nrm, std::abs(d));
  }
  CHECK(err <= 1e-8 * nrm);
}
