#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <iostream>
#include <sstream>

#include "bssn/cli.hpp"
#include "bssn/config.hpp"
#include "bssn/verification.hpp"

namespace py = pybind11;
using namespace bssn;

namespace {

py::dict record_dict(const IterationRecord& r) {
  py::dict d;
  d["j"] = r.j;
  d["J"] = r.J;
  d["delta"] = r.delta ? py::cast(*r.delta) : py::none();
  d["newton_iters"] = r.newton_iters;
  d["cg_iters"] = r.cg_iters ? py::cast(*r.cg_iters) : py::none();
  return d;
}

py::list history_list(const std::vector<IterationRecord>& history) {
  py::list out;
  for (const IterationRecord& r : history) out.append(record_dict(r));
  return out;
}

py::dict order_dict(const OrderCheck& c) {
  py::dict d;
  d["direction"] = c.direction;
  d["skipped"] = c.skipped;
  d["note"] = c.note;
  d["exact"] = c.exact;
  d["steps"] = c.steps;
  d["errors"] = c.errors;
  d["order"] = c.order;
  return d;
}

py::dict symmetry_dict(const SymmetryCheck& c) {
  py::dict d;
  d["pair"] = py::make_tuple(c.first, c.second);
  d["skipped"] = c.skipped;
  d["relative"] = c.relative;
  return d;
}

// Solves one level; raises SolverError carrying the partial history on failure.
py::dict solve_one(const RunConfig& cfg, int level) {
  LevelOutcome oc;
  {
    py::gil_scoped_release release;
    oc = solve_level(cfg, level);
  }
  if (!oc.result) {
    py::object err = py::module_::import("bssn._bssn").attr("SolverError")(oc.error);
    err.attr("history") = history_list(oc.history);
    PyErr_SetObject(py::type::handle_of(err).ptr(), err.ptr());
    throw py::error_already_set();
  }
  const SsnResult& r = *oc.result;
  py::dict d;
  d["level"] = level;
  d["u"] = r.u;
  d["y"] = r.y;
  d["phi"] = r.phi;
  d["J"] = r.J;
  d["outer_iterations"] = r.outer_iters;
  d["optimality_residual"] = r.optimality_inf;
  d["stop_reason"] = r.stop_reason;
  d["history"] = history_list(r.history);
  d["seconds"] = oc.seconds;
  return d;
}

py::dict verify_config(const RunConfig& cfg) {
  DerivativeReport rep;
  {
    py::gil_scoped_release release;
    rep = check_derivatives(cfg);
  }
  py::dict d;
  d["passed"] = rep.passed();
  d["refined_gradient"] = rep.refined_gradient;
  py::list g;
  py::list h;
  py::list hs;
  py::list ms;
  for (const auto& c : rep.gradient) g.append(order_dict(c));
  for (const auto& c : rep.hessian) h.append(order_dict(c));
  for (const auto& c : rep.hessian_symmetry) hs.append(symmetry_dict(c));
  for (const auto& c : rep.mj_symmetry) ms.append(symmetry_dict(c));
  d["gradient"] = g;
  d["hessian"] = h;
  d["hessian_symmetry"] = hs;
  d["mj_symmetry"] = ms;
  d["report"] = format_report(rep);
  return d;
}

py::dict mesh_info_dict(int level) {
  const TriMesh mesh = TriMesh::uniform(level);
  py::dict d;
  d["level"] = mesh.level();
  d["cells_per_side"] = mesh.cells_per_side();
  d["h"] = mesh.h();
  d["nodes"] = mesh.num_nodes();
  d["triangles"] = mesh.num_triangles();
  d["boundary_edges"] = mesh.boundary_edges().size();
  d["lumped_mass_total"] = assemble_lumped_mass(mesh).diagonal().sum();
  return d;
}

Eigen::MatrixX2d mesh_nodes(int level) {
  const TriMesh mesh = TriMesh::uniform(level);
  Eigen::MatrixX2d out(static_cast<Eigen::Index>(mesh.num_nodes()), 2);
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    out(static_cast<Eigen::Index>(i), 0) = mesh.nodes()[i].x1;
    out(static_cast<Eigen::Index>(i), 1) = mesh.nodes()[i].x2;
  }
  return out;
}

int cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"bssn"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  int status;
  {
    py::gil_scoped_release release;
    status = cli_main(static_cast<int>(argv.size()), argv.data());
  }
  std::cout.flush();
  std::cerr.flush();
  return status;
}

}  // namespace

PYBIND11_MODULE(_bssn, m) {
  m.doc() = "Semismooth Newton solver for bilinear control of a semilinear elliptic problem";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<RunConfig>(m, "RunConfig")
      .def_property_readonly("source", [](const RunConfig& c) { return c.source.string(); })
      .def_property_readonly("kind",
                             [](const RunConfig& c) { return c.kind == ProblemKind::Benchmark ? "benchmark" : "custom"; })
      .def_property_readonly("nu", [](const RunConfig& c) { return c.problem.nu; })
      .def_property_readonly("bounds",
                             [](const RunConfig& c) { return py::make_tuple(c.problem.bounds.alpha, c.problem.bounds.beta); })
      .def_property(
          "levels", [](const RunConfig& c) { return c.levels; },
          [](RunConfig& c, const std::vector<int>& levels) {
            for (int l : levels) TriMesh::uniform(l);  // validates the range
            c.levels = levels;
          })
      .def_property(
          "output_directory", [](const RunConfig& c) { return c.output.directory.string(); },
          [](RunConfig& c, const std::filesystem::path& p) { c.output.directory = p; })
      .def_property(
          "verify_level", [](const RunConfig& c) { return c.verify.level; },
          [](RunConfig& c, int level) { c.verify.level = level; })
      .def_property(
          "verify_directions", [](const RunConfig& c) { return c.verify.directions; },
          [](RunConfig& c, int n) { c.verify.directions = n; })
      .def("__repr__", [](const RunConfig& c) {
        std::ostringstream s;
        s << "<RunConfig " << (c.kind == ProblemKind::Benchmark ? "benchmark" : "custom") << " levels=[";
        for (std::size_t i = 0; i < c.levels.size(); ++i) s << (i ? "," : "") << c.levels[i];
        s << "]>";
        return s.str();
      });

  m.def("parse_config", [](const std::filesystem::path& p) { return parse_config(p); }, py::arg("path"),
        "Read and validate a config file.");
  m.def("parse_config_text", &parse_config_text, py::arg("text"), py::arg("name") = "<string>",
        py::arg("base_dir") = std::filesystem::path("."), "Parse config text; relative paths resolve against base_dir.");
  m.def("solve", &solve_one, py::arg("config"), py::arg("level"),
        "Run the semismooth Newton loop on one mesh level. Returns u, y, phi as arrays plus the history.");
  m.def("verify", &verify_config, py::arg("config"), "Finite-difference checks of gradient and Hessian.");
  m.def("run", [](const RunConfig& cfg) {
        std::ostringstream log;
        int status;
        {
          py::gil_scoped_release release;
          status = run(cfg, log);
        }
        return py::make_tuple(status, log.str());
      }, py::arg("config"), "Solve every level and write the output files. Returns (exit_status, log).");
  m.def("mesh_info", &mesh_info_dict, py::arg("level"));
  m.def("mesh_nodes", &mesh_nodes, py::arg("level"), "Node coordinates, lexicographic with x1 fastest.");
  m.def("cli", &cli, py::arg("args"), "Command-line entry point; returns the exit status.");
}
