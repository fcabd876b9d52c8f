#include <doctest.h>

#include <bouligand/error.hpp>
#include <bouligand/fem.hpp>
#include <bouligand/mesh.hpp>

#include <cmath>
#include <sstream>

using namespace bouligand;

TEST_CASE("mesh geometry and indexing") {
  Mesh m(5);
  CHECK(m.h() == doctest::Approx(0.25));
  CHECK(m.m() == 3);
  CHECK(m.num_interior() == 9);
  CHECK(m.coord(4) == 1.0);
  for (std::size_t k = 0; k < m.num_interior(); ++k) {
    auto [i, j] = m.interior_grid(k);
    CHECK(m.interior_index(i, j) == k);
    CHECK_FALSE(m.is_boundary(i, j));
  }
  CHECK(m.is_boundary(0, 2));
  CHECK_THROWS_AS(Mesh(2), Error);
  try {
    Mesh bad(1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidMesh);
  }
}

TEST_CASE("n_h = 3 matrices are scalars") {
  auto fm = assemble(Mesh(3));
  CHECK(fm.stiffness.dim() == 1);
  CHECK(fm.stiffness.at(0, 0) == 4.0);
  CHECK(fm.mass.at(0, 0) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(fm.lumped[0] == doctest::Approx(0.25).epsilon(1e-15));
}

// Stencil oracle: interior rows of the Friedrichs-Keller P1 matrices.
TEST_CASE("interior stencils match the closed form") {
  for (int n_h : {4, 6, 9}) {
    Mesh mesh(n_h);
    auto fm = assemble(mesh);
    const double h = mesh.h();
    const int m = mesh.m();
    for (int j = 1; j <= m; ++j)
      for (int i = 1; i <= m; ++i) {
        auto k = mesh.interior_index(i, j);
        CHECK(fm.stiffness.at(k, k) == 4.0);
        CHECK(fm.mass.at(k, k) == doctest::Approx(h * h / 2).epsilon(1e-14));
        CHECK(fm.lumped[k] == doctest::Approx(h * h).epsilon(1e-14));
        auto nb = [&](int di, int dj, double a, double mm) {
          int ii = i + di, jj = j + dj;
          if (ii < 1 || jj < 1 || ii > m || jj > m) return;
          auto l = mesh.interior_index(ii, jj);
          CHECK(fm.stiffness.at(k, l) == a);
          CHECK(fm.mass.at(k, l) == doctest::Approx(mm).epsilon(1e-14));
        };
        nb(1, 0, -1, h * h / 12);
        nb(-1, 0, -1, h * h / 12);
        nb(0, 1, -1, h * h / 12);
        nb(0, -1, -1, h * h / 12);
        nb(1, 1, 0, h * h / 12);
        nb(-1, -1, 0, h * h / 12);
        nb(1, -1, 0, 0);
        nb(-1, 1, 0, 0);
      }
    CHECK(fm.stiffness.is_symmetric());
    CHECK(fm.mass.is_symmetric(1e-15));
  }
}

TEST_CASE("full assembly invariants") {
  Mesh mesh(7);
  auto fm = assemble_full(mesh);
  // A annihilates constants; sum M = |Omega|; lumped D has row sums of M.
  std::vector<double> ones(mesh.num_vertices(), 1.0);
  auto a1 = fm.stiffness.apply(ones);
  for (double v : a1) CHECK(std::abs(v) < 1e-13);
  auto m1 = fm.mass.apply(ones);
  double total = 0.0;
  for (std::size_t i = 0; i < m1.size(); ++i) {
    total += m1[i];
    CHECK(m1[i] == doctest::Approx(fm.lumped[i]).epsilon(1e-13));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  // x^T A x for x = x1 equals the Dirichlet energy of x1, which is 1.
  std::vector<double> x(mesh.num_vertices());
  for (int j = 0; j < mesh.n_h(); ++j)
    for (int i = 0; i < mesh.n_h(); ++i) x[mesh.vertex_index(i, j)] = mesh.coord(i);
  auto ax = fm.stiffness.apply(x);
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) e += x[i] * ax[i];
  CHECK(e == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("M-norm of an interpolant approaches the L2 norm") {
  // ||sin(pi x) sin(pi y)||_L2^2 = 1/4
  auto mesh = build_mesh(129);
  auto fm = assemble(*mesh);
  auto g = interpolate(mesh, [](double x, double y) {
    return std::sin(M_PI * x) * std::sin(M_PI * y);
  });
  CHECK(m_norm(fm.mass, g) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(m_inner(fm.mass, g, g) == doctest::Approx(m_norm(fm.mass, g) * m_norm(fm.mass, g)));
}

TEST_CASE("interpolate rejects non-finite values") {
  auto mesh = build_mesh(4);
  CHECK_THROWS_AS(interpolate(mesh, [](double, double) { return NAN; }), Error);
}

TEST_CASE("grid function csv round trip") {
  auto mesh = build_mesh(6);
  auto g = interpolate(mesh, [](double x, double y) { return std::exp(x) * std::cos(3 * y) / 7; },
                       Role::Data);
  std::stringstream ss;
  write_csv(ss, g);
  auto back = read_csv(ss);
  CHECK(back.mesh->n_h() == 6);
  CHECK(back.role == Role::Data);
  CHECK(back.values == g.values);
  std::stringstream bad("n_h=6,role=state\n1,2\n");
  CHECK_THROWS_AS(read_csv(bad), Error);
}
