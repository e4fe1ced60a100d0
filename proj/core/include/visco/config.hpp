#pragma once

/**
 * @file config.hpp
 *
 * Flat `key = value` run configuration. One assignment per line, `#` starts a comment, blank
 * lines are ignored. Keys are lower case; every key may appear at most once and unknown keys
 * are rejected. See README.md for the key table and defaults.
 */

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "visco/constitutive.hpp"
#include "visco/solver.hpp"
#include "visco/tensor.hpp"

namespace visco {

enum class Command { Check, Korn, Simulate, Convergence };
enum class InitialPreset { Rest, Sinusoidal, Compression, Reflected };
/// Deliberately broken setups used as negative controls.
enum class Fixture { None, NegativeIdentity, BrokenStencil };

std::string to_string(Command c);
std::string to_string(InitialPreset p);
std::string to_string(Fixture f);

struct RunSpec {
  Command command = Command::Simulate;
  ConstitutiveModel model;
  int dim = 2;
  int cells = 32;
  SolverConfig solver = SolverConfig::defaults_for(2);

  InitialPreset initial = InitialPreset::Rest;
  double amplitude = 0.01;
  int mode = 1;
  double rate = 100.0;

  std::string output_dir = "out";
  std::uint64_t seed = 0;

  // korn
  Matrix f0 = Matrix::identity(2);
  Matrix q0 = Matrix(2);
  int resolution = 360;
  int refine_iters = 60;
  int directions = 360;
  int fourier_fields = 100;
  int fourier_modes = 8;

  // convergence: the spatial study runs `levels` grids from `cells` at dt = conv_fine_dt, the
  // temporal study `levels` steps from `dt` at conv_fine_cells
  int levels = 4;
  double conv_fine_dt = 1e-5;
  int conv_fine_cells = 256;

  Fixture fixture = Fixture::None;

  bool operator==(const RunSpec&) const = default;
};

/// Throws ParseError (grammar, unknown or duplicate key, malformed value, fewer than two
/// convergence levels) or RangeError (value outside its documented range; names the key).
RunSpec parse_config(std::string_view text);

/// Emits every key, so parse_config(serialize_config(s)) == s.
std::string serialize_config(const RunSpec& spec);

/// Initial deformation and velocity for the selected preset.
std::pair<VectorFunction, VectorFunction> initial_data(const RunSpec& spec);

}  // namespace visco
