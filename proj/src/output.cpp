#include "bssn/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bssn {

namespace {

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

}  // namespace

std::string format_convergence_csv(const std::vector<IterationRecord>& history) {
  std::string out = "j,J,delta,newton_iters,cg_iters\n";
  for (const IterationRecord& r : history) {
    out += std::to_string(r.j);
    out += ',';
    out += sci(r.J);
    out += ',';
    if (r.delta) out += sci(*r.delta);
    out += ',';
    out += std::to_string(r.newton_iters);
    out += ',';
    if (r.cg_iters) out += std::to_string(*r.cg_iters);
    out += '\n';
  }
  return out;
}

std::string format_vtk_field(const TriMesh& mesh, const NodalField& field, const std::string& name) {
  if (static_cast<std::size_t>(field.size()) != mesh.num_nodes()) {
    throw std::invalid_argument("field size does not match the mesh");
  }
  const std::size_t n = mesh.nodes_per_side();
  const std::size_t count = mesh.num_nodes();
  std::string out;
  out.reserve(count * 48);
  out += "# vtk DataFile Version 3.0\n";
  out += name + " on a uniform triangulation of the unit square, level " + std::to_string(mesh.level()) + "\n";
  out += "ASCII\nDATASET STRUCTURED_GRID\n";
  out += "DIMENSIONS " + std::to_string(n) + " " + std::to_string(n) + " 1\n";
  out += "POINTS " + std::to_string(count) + " double\n";
  char buf[96];
  for (const Point& p : mesh.nodes()) {
    std::snprintf(buf, sizeof buf, "%.15e %.15e 0\n", p.x1, p.x2);
    out += buf;
  }
  out += "POINT_DATA " + std::to_string(count) + "\n";
  out += "SCALARS " + name + " double 1\nLOOKUP_TABLE default\n";
  for (Eigen::Index i = 0; i < field.size(); ++i) {
    out += sci(field[i]);
    out += '\n';
  }
  return out;
}

std::string format_complementarity(const LevelSummary& s) {
  std::string out;
  auto kv = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  kv("level", std::to_string(s.level));
  kv("h", sci(s.h));
  kv("nodes", std::to_string(s.nodes));
  kv("outer_iterations", std::to_string(s.outer_iters));
  kv("J", sci(s.J));
  kv("optimality_residual_inf", sci(s.optimality_inf));
  kv("stop_reason", s.stop_reason);
  kv("tol_sigma", sci(s.tol_sigma));
  kv("measure_upper", sci(s.measures.upper));
  kv("measure_lower", sci(s.measures.lower));
  kv("measure_interior", sci(s.measures.interior));
  kv("measure_sigma", sci(s.measures.sigma));
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out.flush()) throw std::runtime_error("error while writing '" + path.string() + "'");
}

}  // namespace bssn
