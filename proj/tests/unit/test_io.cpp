#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "visco/errors.hpp"
#include "visco/io.hpp"

using namespace visco;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "viscolab_io_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(FormatDouble, RoundTripsAndUsesDot) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 1.0}) EXPECT_EQ(std::stod(format_double(x)), x);
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Csv, HeaderAndRows) {
  EnergyReport e;
  e.times = {0.0, 0.1};
  e.kinetic = {1.0, 0.5};
  e.elastic = {0.0, 0.25};
  e.dissipated_cumulative = {0.0, 0.2};
  e.balance_residual = {0.0, -0.05};
  const fs::path p = scratch("d.csv");
  write_diagnostics_csv(p, e, {{0.0, 1.0}, {0.1, 0.99}});
  EXPECT_EQ(slurp(p),
            "time,kinetic,elastic,dissipated,residual,min_det\n"
            "0,1,0,0,0,1\n"
            "0.10000000000000001,0.5,0.25,0.20000000000000001,-0.050000000000000003,0.98999999999999999\n");
  EXPECT_THROW(write_diagnostics_csv(p, e, {{0.0, 1.0}}), DimensionMismatch);
}

TEST(Vtk, WrittenFilesValidate) {
  for (int n = 1; n <= 2; ++n) {
    const Grid g = Grid::build(n, 5);
    FieldState s;
    s.time = 0.25;
    s.xi = g.reference_positions();
    s.v = NodalField(s.xi.size(), 0.5);
    const fs::path p = scratch("s" + std::to_string(n) + ".vtk");
    write_vtk_snapshot(p, g, s);
    const VtkCheck c = validate_vtk(p);
    EXPECT_TRUE(c.ok) << c.message;
    EXPECT_EQ(c.points, g.num_nodes());
    EXPECT_EQ(slurp(p).rfind("# vtk DataFile Version 3.0\n", 0), 0u);
  }
}

TEST(Vtk, ValidatorRejectsDamagedFiles) {
  const Grid g = Grid::build(2, 4);
  FieldState s{0.0, g.reference_positions(), NodalField(g.num_nodes() * 2, 0.0)};
  const fs::path good = scratch("good.vtk");
  write_vtk_snapshot(good, g, s);
  const std::string text = slurp(good);

  auto check = [&](const std::string& body) {
    const fs::path p = scratch("bad.vtk");
    std::ofstream(p) << body;
    return validate_vtk(p).ok;
  };
  EXPECT_FALSE(check("# vtk DataFile Version 2.0" + text.substr(text.find('\n'))));
  EXPECT_FALSE(check(text.substr(0, text.size() / 2)));
  std::string no_v = text.substr(0, text.find("VECTORS v "));
  EXPECT_FALSE(check(no_v));
  std::string wrong_count = text;
  wrong_count.replace(wrong_count.find("POINT_DATA 25"), 13, "POINT_DATA 24");
  EXPECT_FALSE(check(wrong_count));
  EXPECT_FALSE(validate_vtk(scratch("missing.vtk")).ok);
}

TEST(Report, KeyValueLines) {
  const fs::path p = scratch("r.txt");
  write_report(p, {{"a", "1"}, {"b", "two"}});
  EXPECT_EQ(slurp(p), "a = 1\nb = two\n");
}
