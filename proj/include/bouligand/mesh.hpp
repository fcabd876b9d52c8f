#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace bouligand {

// Uniform Friedrichs-Keller triangulation of (0,1)^2 with n_h x n_h vertices.
// Every grid cell is split along its bottom-left to top-right diagonal.
//
// Vertex (i, j) sits at (i*h, j*h), i along x1 and j along x2. Interior
// unknowns are numbered row-major: k = (j-1)*(n_h-2) + (i-1), so x1 runs
// fastest.
class Mesh {
 public:
  explicit Mesh(int n_h);

  int n_h() const noexcept { return n_h_; }
  double h() const noexcept { return h_; }
  // Interior points per side, n_h - 2.
  int m() const noexcept { return n_h_ - 2; }
  std::size_t num_interior() const noexcept { return static_cast<std::size_t>(m()) * m(); }
  std::size_t num_vertices() const noexcept { return static_cast<std::size_t>(n_h_) * n_h_; }

  double coord(int i) const noexcept { return static_cast<double>(i) / (n_h_ - 1); }

  std::size_t vertex_index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * n_h_ + i;
  }
  std::size_t interior_index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j - 1) * m() + (i - 1);
  }
  bool is_boundary(int i, int j) const noexcept {
    return i == 0 || j == 0 || i == n_h_ - 1 || j == n_h_ - 1;
  }
  // Grid indices (i, j) of interior unknown k.
  std::pair<int, int> interior_grid(std::size_t k) const noexcept {
    return {static_cast<int>(k % m()) + 1, static_cast<int>(k / m()) + 1};
  }

  bool operator==(const Mesh& other) const noexcept { return n_h_ == other.n_h_; }

 private:
  int n_h_;
  double h_;
};

// Throws Error(InvalidMesh) for n_h < 3.
std::shared_ptr<const Mesh> build_mesh(int n_h);

enum class Role { State, Source, Data };

const char* to_string(Role role) noexcept;
Role role_from_string(const std::string& s);

// Nodal values at interior vertices; boundary values are implicitly zero.
struct GridFunction {
  std::shared_ptr<const Mesh> mesh;
  std::vector<double> values;
  Role role = Role::State;

  GridFunction() = default;
  GridFunction(std::shared_ptr<const Mesh> mesh_, Role role_);
  GridFunction(std::shared_ptr<const Mesh> mesh_, std::vector<double> values_, Role role_);

  std::size_t size() const noexcept { return values.size(); }
};

using ScalarField = std::function<double(double, double)>;

// Evaluates f at every interior vertex. Throws Error(NonFinite) naming the
// first vertex where f is not finite.
GridFunction interpolate(std::shared_ptr<const Mesh> mesh, const ScalarField& f,
                         Role role = Role::Source);

// CSV: header `n_h=<int>,role=<state|source|data>`, then one value per line in
// interior order, written with 17 significant digits.
void write_csv(std::ostream& out, const GridFunction& g);
void write_csv(const std::string& path, const GridFunction& g);
GridFunction read_csv(std::istream& in);
GridFunction read_csv(const std::string& path);

}  // namespace bouligand
