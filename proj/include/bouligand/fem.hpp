#pragma once

#include "bouligand/mesh.hpp"
#include "bouligand/sparse.hpp"

namespace bouligand {

// P1 matrices on the interior unknowns (homogeneous Dirichlet by elimination).
struct FemMatrices {
  SparseMatrix stiffness;   // A
  SparseMatrix mass;        // M
  DiagonalMatrix lumped;    // D, D_ii = |supp phi_i| / 3
};

FemMatrices assemble(const Mesh& mesh);

// Same element loop over all n_h^2 vertices, boundary rows included. Used to
// check partition-of-unity and row-sum identities.
FemMatrices assemble_full(const Mesh& mesh);

// sqrt(v^T M v) and v^T M w. Throw Error(DimensionMismatch).
double m_norm(const SparseMatrix& mass, std::span<const double> v);
double m_inner(const SparseMatrix& mass, std::span<const double> v, std::span<const double> w);
double m_norm(const SparseMatrix& mass, const GridFunction& v);
double m_inner(const SparseMatrix& mass, const GridFunction& v, const GridFunction& w);

}  // namespace bouligand
