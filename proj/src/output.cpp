#include "fsi/output.hpp"

#include <iomanip>
#include <ostream>

#include "json.hpp"

#ifndef FSI_BUILD_ID
#define FSI_BUILD_ID "unknown"
#endif

namespace fsi {

void prepare_output_dir(const std::filesystem::path& dir, bool overwrite) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    if (!fs::is_directory(dir, ec)) throw OutputError("'" + dir.string() + "' is not a directory");
    if (!fs::is_empty(dir, ec)) {
      if (!overwrite)
        throw OutputError("output directory '" + dir.string() + "' is not empty (use --overwrite)");
      for (const auto& entry : fs::directory_iterator(dir)) fs::remove_all(entry.path());
    }
    return;
  }
  if (!fs::create_directories(dir, ec) || ec)
    throw OutputError("cannot create output directory '" + dir.string() + "'");
}

void write_vtk_state(std::ostream& os, const Discretization& disc, const State& s) {
  const Mesh& m = disc.mesh;
  const DofLayout& L = disc.layout;
  const DisplacementField disp = extend_displacement(disc.surface, s.displacement_now(), m);
  os << std::setprecision(12);
  os << "# vtk DataFile Version 3.0\nt = " << s.t << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << m.vertices.size() << " double\n";
  for (const auto& v : m.vertices) os << v.x << ' ' << v.y << " 0\n";
  os << "CELLS " << m.triangles.size() << ' ' << 4 * m.triangles.size() << '\n';
  for (const auto& t : m.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "CELL_TYPES " << m.triangles.size() << '\n';
  for (std::size_t i = 0; i < m.triangles.size(); ++i) os << "5\n";
  os << "POINT_DATA " << m.vertices.size() << "\nVECTORS velocity double\n";
  for (std::size_t g = 0; g < m.vertices.size(); ++g) {
    const int v = m.dof_vertex[g];
    os << s.u[L.vertex_dof(v, 0)] << ' ' << s.u[L.vertex_dof(v, 1)] << " 0\n";
  }
  os << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (std::size_t g = 0; g < m.vertices.size(); ++g) os << s.p[m.dof_vertex[g]] << '\n';
  os << "VECTORS displacement double\n";
  for (double d : disp.vertex_values) os << "0 " << d << " 0\n";
}

void write_energy_csv(std::ostream& os, std::span<const StepRecord> records) {
  os << "step,t,E,fluid_kinetic,structure_kinetic,elastic,bending,viscous,damping,numerical,"
        "work,ledger_residual,gcl,min_height,newton_iterations,t_assembly,t_factorization,t_solve\n";
  os << std::setprecision(10);
  for (const auto& r : records) {
    const auto& e = r.energy;
    const auto& l = r.ledger;
    os << r.step << ',' << r.t << ',' << e.total << ',' << e.fluid_kinetic << ','
       << e.structure_kinetic << ',' << e.elastic << ',' << e.bending << ',' << l.viscous << ','
       << l.damping << ',' << l.numerical << ',' << l.work << ',' << l.residual << ',' << r.gcl
       << ',' << r.min_height << ',' << r.newton_iterations << ',' << r.times.assembly << ','
       << r.times.factorization << ',' << r.times.solve << '\n';
  }
}

void write_gcl_csv(std::ostream& os, std::span<const StepRecord> records) {
  os << "step,t,gcl\n" << std::setprecision(10);
  for (const auto& r : records) os << r.step << ',' << r.t << ',' << r.gcl << '\n';
}

std::string build_id() { return FSI_BUILD_ID; }

void write_manifest(std::ostream& os, const RunManifest& m) {
  nlohmann::json j;
  j["config"] = format_config(m.config);
  j["output_dir"] = m.output_dir;
  j["seed"] = m.seed;
  j["build"] = build_id();
  j["timing"] = {{"assembly", m.times.assembly},
                 {"factorization", m.times.factorization},
                 {"solve", m.times.solve},
                 {"wall", m.wall_seconds}};
  os << j.dump(2) << '\n';
}

}  // namespace fsi
