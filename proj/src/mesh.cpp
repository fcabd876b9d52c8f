#include "bouligand/mesh.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "bouligand/error.hpp"

namespace bouligand {

Mesh::Mesh(int n_h) : n_h_(n_h), h_(0.0) {
  if (n_h < 3)
    throw Error(ErrorCode::InvalidMesh,
                "mesh needs n_h >= 3 vertices per side, got " + std::to_string(n_h));
  h_ = 1.0 / (n_h - 1);
}

std::shared_ptr<const Mesh> build_mesh(int n_h) { return std::make_shared<const Mesh>(n_h); }

const char* to_string(Role role) noexcept {
  switch (role) {
    case Role::State: return "state";
    case Role::Source: return "source";
    case Role::Data: return "data";
  }
  return "state";
}

Role role_from_string(const std::string& s) {
  if (s == "state") return Role::State;
  if (s == "source") return Role::Source;
  if (s == "data") return Role::Data;
  throw Error(ErrorCode::InvalidArgument, "unknown grid function role '" + s + "'");
}

GridFunction::GridFunction(std::shared_ptr<const Mesh> mesh_, Role role_)
    : mesh(std::move(mesh_)), values(mesh->num_interior(), 0.0), role(role_) {}

GridFunction::GridFunction(std::shared_ptr<const Mesh> mesh_, std::vector<double> values_,
                           Role role_)
    : mesh(std::move(mesh_)), values(std::move(values_)), role(role_) {
  if (values.size() != mesh->num_interior())
    throw Error(ErrorCode::DimensionMismatch,
                "grid function has " + std::to_string(values.size()) + " values, mesh has " +
                    std::to_string(mesh->num_interior()) + " interior nodes");
}

GridFunction interpolate(std::shared_ptr<const Mesh> mesh, const ScalarField& f, Role role) {
  GridFunction g(mesh, role);
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto [i, j] = mesh->interior_grid(k);
    const double x1 = mesh->coord(i), x2 = mesh->coord(j);
    const double v = f(x1, x2);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "field is not finite at node " << k << " (" << x1 << ", " << x2 << ")";
      throw Error(ErrorCode::NonFinite, msg.str());
    }
    g.values[k] = v;
  }
  return g;
}

void write_csv(std::ostream& out, const GridFunction& g) {
  out << "n_h=" << g.mesh->n_h() << ",role=" << to_string(g.role) << '\n';
  out << std::setprecision(17);
  for (double v : g.values) out << v << '\n';
}

void write_csv(const std::string& path, const GridFunction& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  write_csv(out, g);
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

GridFunction read_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorCode::Io, "grid function CSV is empty");
  if (!header.empty() && header.back() == '\r') header.pop_back();

  int n_h = -1;
  std::string role = "state";
  std::istringstream hs(header);
  std::string field;
  while (std::getline(hs, field, ',')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Io, "malformed header '" + header + "'");
    const std::string key = field.substr(0, eq), value = field.substr(eq + 1);
    if (key == "n_h") {
      try {
        n_h = std::stoi(value);
      } catch (const std::exception&) {
        throw Error(ErrorCode::Io, "malformed n_h in header '" + header + "'");
      }
    } else if (key == "role") {
      role = value;
    } else {
      throw Error(ErrorCode::Io, "unknown header key '" + key + "'");
    }
  }
  if (n_h < 0) throw Error(ErrorCode::Io, "header lacks n_h: '" + header + "'");

  auto mesh = build_mesh(n_h);
  GridFunction g(mesh, role_from_string(role));
  std::string line;
  std::size_t k = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (k >= g.size())
      throw Error(ErrorCode::Io, "too many values for n_h=" + std::to_string(n_h));
    char* end = nullptr;
    g.values[k] = std::strtod(line.c_str(), &end);
    if (end == line.c_str() || *end != '\0')
      throw Error(ErrorCode::Io, "malformed value '" + line + "' on data line " +
                                     std::to_string(k + 1));
    ++k;
  }
  if (k != g.size())
    throw Error(ErrorCode::Io, "expected " + std::to_string(g.size()) + " values, read " +
                                   std::to_string(k));
  return g;
}

GridFunction read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return read_csv(in);
}

}  // namespace bouligand
