#include "visco/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "visco/errors.hpp"

namespace visco {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidConfig("cannot open " + path.string() + " for writing");
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw InvalidConfig("write to " + path.string() + " failed");
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_diagnostics_csv(const std::filesystem::path& path, const EnergyReport& energy,
                           const std::vector<std::pair<double, double>>& min_det) {
  if (min_det.size() != energy.times.size()) throw DimensionMismatch("energy and min_det series differ in length");
  std::ofstream out = open_for_write(path);
  out << "time,kinetic,elastic,dissipated,residual,min_det\n";
  for (std::size_t k = 0; k < energy.times.size(); ++k) {
    out << format_double(energy.times[k]) << ',' << format_double(energy.kinetic[k]) << ','
        << format_double(energy.elastic[k]) << ',' << format_double(energy.dissipated_cumulative[k]) << ','
        << format_double(energy.balance_residual[k]) << ',' << format_double(min_det[k].second) << '\n';
  }
  check_written(out, path);
}

void write_vtk_snapshot(const std::filesystem::path& path, const Grid& grid, const FieldState& state) {
  const int n = grid.dim();
  const std::size_t side = static_cast<std::size_t>(grid.nodes_per_side());
  std::ofstream out = open_for_write(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "viscolab snapshot t=" << format_double(state.time) << '\n';
  out << "ASCII\nDATASET STRUCTURED_GRID\n";
  out << "DIMENSIONS " << side << ' ' << (n == 2 ? side : 1) << " 1\n";
  out << "POINTS " << grid.num_nodes() << " double\n";
  for (std::size_t node = 0; node < grid.num_nodes(); ++node) {
    const Vector x = grid.node_coord(node);
    out << format_double(x[0]) << ' ' << format_double(n == 2 ? x[1] : 0.0) << " 0\n";
  }
  out << "POINT_DATA " << grid.num_nodes() << '\n';
  auto vectors = [&](const char* name, const NodalField& f) {
    out << "VECTORS " << name << " double\n";
    for (std::size_t node = 0; node < grid.num_nodes(); ++node) {
      out << format_double(f[node * n]) << ' ' << format_double(n == 2 ? f[node * n + 1] : 0.0) << " 0\n";
    }
  };
  vectors("xi", state.xi);
  vectors("v", state.v);
  check_written(out, path);
}

VtkCheck validate_vtk(const std::filesystem::path& path) {
  VtkCheck res;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    res.message = "cannot open file";
    return res;
  }
  auto fail = [&](std::string msg) {
    res.ok = false;
    res.message = std::move(msg);
    return res;
  };

  std::string line;
  if (!std::getline(in, line) || line != "# vtk DataFile Version 3.0") return fail("bad version header");
  if (!std::getline(in, line) || line.size() > 256) return fail("missing or overlong title line");
  if (!std::getline(in, line) || line != "ASCII") return fail("expected ASCII");
  if (!std::getline(in, line) || line != "DATASET STRUCTURED_GRID") return fail("expected DATASET STRUCTURED_GRID");

  std::string word;
  long nx = 0, ny = 0, nz = 0;
  if (!(in >> word >> nx >> ny >> nz) || word != "DIMENSIONS" || nx < 1 || ny < 1 || nz < 1)
    return fail("bad DIMENSIONS line");
  const auto count = static_cast<std::size_t>(nx * ny * nz);

  std::size_t declared = 0;
  std::string type;
  if (!(in >> word >> declared >> type) || word != "POINTS" || declared != count) return fail("bad POINTS line");
  if (type != "double" && type != "float") return fail("unsupported POINTS type");
  auto read_triples = [&](std::size_t num) {
    double x = 0.0;
    for (std::size_t k = 0; k < 3 * num; ++k) {
      if (!(in >> x) || !std::isfinite(x)) return false;
    }
    return true;
  };
  if (!read_triples(count)) return fail("truncated or non-finite POINTS data");

  if (!(in >> word >> declared) || word != "POINT_DATA" || declared != count) return fail("bad POINT_DATA line");
  const char* expected[] = {"xi", "v"};
  for (const char* name : expected) {
    std::string arr;
    if (!(in >> word >> arr >> type) || word != "VECTORS" || arr != name) return fail(std::string("missing VECTORS ") + name);
    if (type != "double" && type != "float") return fail("unsupported VECTORS type");
    if (!read_triples(count)) return fail(std::string("truncated VECTORS ") + name);
  }
  if (in >> word) return fail("trailing content after VECTORS v");
  res.ok = true;
  res.points = count;
  return res;
}

void write_report(const std::filesystem::path& path, const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out = open_for_write(path);
  for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
  check_written(out, path);
}

}  // namespace visco
