#include "bouligand/fem.hpp"

#include <array>
#include <cmath>

#include "bouligand/error.hpp"

namespace bouligand {

namespace {

struct Vertex {
  int i, j;
};

// The two triangles of cell (i, j), split along the bottom-left to top-right
// diagonal.
std::array<std::array<Vertex, 3>, 2> cell_triangles(int i, int j) {
  return {{{{{i, j}, {i + 1, j}, {i + 1, j + 1}}}, {{{i, j}, {i + 1, j + 1}, {i, j + 1}}}}};
}

// P1 stiffness is invariant under uniform scaling in 2D, so it is evaluated on
// integer grid coordinates where every entry is a multiple of 1/2.
std::array<std::array<double, 3>, 3> local_stiffness(const std::array<Vertex, 3>& t) {
  std::array<double, 3> b{}, c{};
  for (int k = 0; k < 3; ++k) {
    const auto& p1 = t[(k + 1) % 3];
    const auto& p2 = t[(k + 2) % 3];
    b[k] = p1.j - p2.j;
    c[k] = p2.i - p1.i;
  }
  const double area2 = std::abs(static_cast<double>((t[1].i - t[0].i) * (t[2].j - t[0].j) -
                                                    (t[2].i - t[0].i) * (t[1].j - t[0].j)));
  std::array<std::array<double, 3>, 3> K{};
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) K[k][l] = (b[k] * b[l] + c[k] * c[l]) / (2.0 * area2);
  return K;
}

FemMatrices assemble_impl(const Mesh& mesh, bool interior_only) {
  const int n = mesh.n_h();
  const double h = mesh.h();
  const double area = 0.5 * h * h;

  auto unknown = [&](const Vertex& v) -> std::int32_t {
    if (!interior_only) return static_cast<std::int32_t>(mesh.vertex_index(v.i, v.j));
    if (mesh.is_boundary(v.i, v.j)) return -1;
    return static_cast<std::int32_t>(mesh.interior_index(v.i, v.j));
  };
  const std::size_t dim = interior_only ? mesh.num_interior() : mesh.num_vertices();

  std::vector<SparseMatrix::Triplet> stiff, mass;
  stiff.reserve(static_cast<std::size_t>(n - 1) * (n - 1) * 18);
  mass.reserve(stiff.capacity());
  std::vector<double> lumped(dim, 0.0);

  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      for (const auto& tri : cell_triangles(i, j)) {
        const auto K = local_stiffness(tri);
        std::array<std::int32_t, 3> dof{};
        for (int k = 0; k < 3; ++k) dof[k] = unknown(tri[k]);
        for (int k = 0; k < 3; ++k) {
          if (dof[k] < 0) continue;
          lumped[dof[k]] += area / 3.0;
          for (int l = 0; l < 3; ++l) {
            if (dof[l] < 0) continue;
            stiff.push_back({dof[k], dof[l], K[k][l]});
            mass.push_back({dof[k], dof[l], area / 12.0 * (k == l ? 2.0 : 1.0)});
          }
        }
      }
    }
  }

  FemMatrices out;
  out.stiffness = SparseMatrix::from_triplets(dim, std::move(stiff));
  out.mass = SparseMatrix::from_triplets(dim, std::move(mass));
  out.lumped = DiagonalMatrix(std::move(lumped));
  return out;
}

void check_size(const SparseMatrix& mass, std::size_t n) {
  if (mass.dim() != n)
    throw Error(ErrorCode::DimensionMismatch, "mass matrix of dimension " +
                                                  std::to_string(mass.dim()) +
                                                  " used with vector of size " + std::to_string(n));
}

}  // namespace

FemMatrices assemble(const Mesh& mesh) { return assemble_impl(mesh, true); }

FemMatrices assemble_full(const Mesh& mesh) { return assemble_impl(mesh, false); }

double m_inner(const SparseMatrix& mass, std::span<const double> v, std::span<const double> w) {
  check_size(mass, v.size());
  check_size(mass, w.size());
  return dot(v, mass.apply(w));
}

double m_norm(const SparseMatrix& mass, std::span<const double> v) {
  return std::sqrt(std::max(0.0, m_inner(mass, v, v)));
}

double m_inner(const SparseMatrix& mass, const GridFunction& v, const GridFunction& w) {
  return m_inner(mass, std::span<const double>(v.values), std::span<const double>(w.values));
}

double m_norm(const SparseMatrix& mass, const GridFunction& v) {
  return m_norm(mass, std::span<const double>(v.values));
}

}  // namespace bouligand
