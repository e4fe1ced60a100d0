#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "visco/diagnostics.hpp"
#include "visco/grid.hpp"
#include "visco/solver.hpp"

namespace visco {

/// Locale-independent shortest-safe formatting (17 significant digits).
std::string format_double(double x);

/// time,kinetic,elastic,dissipated,residual,min_det
void write_diagnostics_csv(const std::filesystem::path& path, const EnergyReport& energy,
                           const std::vector<std::pair<double, double>>& min_det);

/// Legacy ASCII structured grid at the reference node positions with point vectors xi and v,
/// padded to three components.
void write_vtk_snapshot(const std::filesystem::path& path, const Grid& grid, const FieldState& state);

struct VtkCheck {
  bool ok = false;
  std::string message;
  std::size_t points = 0;
};

/// Header and structure validator for the files written by write_vtk_snapshot.
VtkCheck validate_vtk(const std::filesystem::path& path);

/// `key = value` lines in insertion order.
void write_report(const std::filesystem::path& path, const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace visco
