#include <doctest.h>

#include <bouligand/error.hpp>
#include <bouligand/fem.hpp>
#include <bouligand/random.hpp>
#include <bouligand/solver.hpp>
#include <bouligand/sparse.hpp>

#include <cmath>

using namespace bouligand;

TEST_CASE("triplets are summed and sorted") {
  auto S = SparseMatrix::from_triplets(2, {{1, 0, 1.0}, {0, 0, 2.0}, {1, 0, 2.0}, {0, 1, 0.0}});
  CHECK(S.nnz() == 2);
  CHECK(S.at(1, 0) == 3.0);
  CHECK(S.at(0, 1) == 0.0);
  CHECK_FALSE(S.is_symmetric());
  auto y = S.apply(std::vector<double>{1.0, 1.0});
  CHECK(y[0] == 2.0);
  CHECK(y[1] == 3.0);
}

TEST_CASE("diagonal matrix rejects negative entries") {
  CHECK_THROWS_AS(DiagonalMatrix({1.0, -1.0}), Error);
}

TEST_CASE("scalar solves") {
  auto fm = assemble(Mesh(3));
  std::vector<double> b{0.125};
  CHECK(solve_spd(fm.stiffness, b)[0] == doctest::Approx(0.03125).epsilon(1e-14));
  std::vector<double> shift{0.25};
  CHECK(solve_spd(fm.stiffness, shift, b)[0] == doctest::Approx(0.125 / 4.25).epsilon(1e-14));
  std::vector<double> zero{0.0};
  CHECK(solve_spd(fm.stiffness, zero)[0] == 0.0);
}

TEST_CASE("all preconditioners reach the requested residual") {
  Mesh mesh(33);
  auto fm = assemble(mesh);
  NormalStream rng(3);
  std::vector<double> b(fm.stiffness.dim()), shift(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    b[i] = rng.uniform(-1, 1);
    shift[i] = rng.uniform() < 0.5 ? mesh.h() * mesh.h() : 0.0;
  }
  for (auto pc : {Preconditioner::None, Preconditioner::Diagonal,
                  Preconditioner::IncompleteCholesky}) {
    SolveOptions o;
    o.preconditioner = pc;
    SolveStats st;
    auto x = solve_spd(fm.stiffness, shift, b, o, {}, &st);
    auto r = fm.stiffness.apply(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = r[i] + shift[i] * x[i] - b[i];
    CHECK(norm2(r) <= 1e-12 * norm2(b) * 1.0001);
    CHECK(st.iterations > 0);
  }
}

TEST_CASE("solver errors") {
  auto fm = assemble(Mesh(4));
  std::vector<double> b(3, 1.0);
  CHECK_THROWS_AS(solve_spd(fm.stiffness, b), Error);
  std::vector<double> nanb(4, NAN);
  CHECK_THROWS_AS(solve_spd(fm.stiffness, nanb), Error);
  SolveOptions o;
  o.max_iterations = 1;
  o.preconditioner = Preconditioner::None;
  std::vector<double> rhs{1.0, 2.0, -3.0, 0.5};
  CHECK_THROWS_AS(solve_spd(fm.stiffness, rhs, o), ConvergenceError);
  SolveOptions bad;
  bad.rel_tol = -1;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("normal stream is reproducible and roughly standard") {
  NormalStream a(42), b(42);
  double s = 0, s2 = 0;
  bool same = true;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double x = a.normal();
    same = same && x == b.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(same);
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.01);
}
