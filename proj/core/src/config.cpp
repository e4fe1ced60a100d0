#include "visco/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "visco/errors.hpp"
#include "visco/io.hpp"

namespace visco {

namespace {

constexpr std::string_view kKeys[] = {
    "command",   "energy",       "q",           "viscosity",      "m",               "dim",
    "cells",     "dt",           "t_end",       "picard_tol",     "picard_max",      "det_floor",
    "linear_tol", "linear_max_iter", "p_norm",  "save_every",     "initial",         "amplitude",
    "mode",      "rate",         "output_dir",  "seed",           "f0",              "q0",
    "resolution", "refine_iters", "directions", "fourier_fields", "fourier_modes",   "levels",
    "conv_fine_dt", "conv_fine_cells", "fixture"};

struct Entry {
  std::string value;
  int line = 0;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool valid_key(const std::string& key) {
  return !key.empty() && std::all_of(key.begin(), key.end(), [](unsigned char c) {
    return std::islower(c) || std::isdigit(c) || c == '_';
  });
}

class Document {
 public:
  explicit Document(std::string_view text) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto end = std::min(text.find('\n', pos), text.size());
      std::string_view raw = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      const std::string line = trim(raw);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError(line_no, "expected `key = value`");
      const std::string key = lower(trim(std::string_view(line).substr(0, eq)));
      const std::string value = trim(std::string_view(line).substr(eq + 1));
      if (!valid_key(key)) throw ParseError(line_no, "malformed key");
      if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys))
        throw ParseError(line_no, "unknown key `" + key + "`");
      if (value.empty()) throw ParseError(line_no, "empty value for `" + key + "`");
      if (entries_.count(key)) throw ParseError(line_no, "duplicate key `" + key + "`");
      entries_[key] = Entry{value, line_no};
    }
  }

  const Entry* find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  template <class T>
  bool get(const std::string& key, T& out) const {
    const Entry* e = find(key);
    if (!e) return false;
    out = parse_number<T>(*e, key);
    return true;
  }

  template <class T>
  static T parse_number(const Entry& e, const std::string& key) {
    T x{};
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc() || res.ptr != last) throw ParseError(e.line, "malformed number for `" + key + "`");
    return x;
  }

 private:
  std::map<std::string, Entry> entries_;
};

template <class Map>
auto lookup(const Entry& e, const std::string& key, const Map& table) {
  const std::string v = lower(e.value);
  for (const auto& [name, value] : table)
    if (v == name) return value;
  throw ParseError(e.line, "unrecognised value `" + e.value + "` for `" + key + "`");
}

Matrix parse_matrix(const Entry& e, const std::string& key) {
  std::vector<std::vector<double>> rows;
  std::stringstream rs(e.value);
  std::string row;
  while (std::getline(rs, row, ';')) {
    std::vector<double> vals;
    std::stringstream cs(row);
    std::string cell;
    while (std::getline(cs, cell, ',')) vals.push_back(Document::parse_number<double>(Entry{trim(cell), e.line}, key));
    rows.push_back(std::move(vals));
  }
  const std::size_t n = rows.size();
  if (n < 1 || n > 3) throw ParseError(e.line, "`" + key + "` must have 1 to 3 rows");
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (r.size() != n) throw ParseError(e.line, "`" + key + "` must be square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Matrix::from_entries(flat);
}

std::string matrix_text(const Matrix& a) {
  std::string s;
  for (int i = 0; i < a.dim(); ++i) {
    if (i) s += "; ";
    for (int j = 0; j < a.dim(); ++j) {
      if (j) s += ", ";
      s += format_double(a(i, j));
    }
  }
  return s;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw RangeError("`" + key + "` " + what);
}

const std::pair<const char*, Command> kCommands[] = {
    {"check", Command::Check}, {"korn", Command::Korn}, {"simulate", Command::Simulate},
    {"convergence", Command::Convergence}};
const std::pair<const char*, EnergyModel::Kind> kEnergies[] = {
    {"w0", EnergyModel::Kind::W0}, {"w1", EnergyModel::Kind::W1}, {"w2", EnergyModel::Kind::W2}};
const std::pair<const char*, ViscosityModel::Kind> kViscosities[] = {
    {"zm", ViscosityModel::Kind::Zm},
    {"z0prime", ViscosityModel::Kind::Z0Prime},
    {"z0doubleprime", ViscosityModel::Kind::Z0DoublePrime}};
const std::pair<const char*, InitialPreset> kPresets[] = {
    {"rest", InitialPreset::Rest}, {"sinusoidal", InitialPreset::Sinusoidal},
    {"compression", InitialPreset::Compression}, {"reflected", InitialPreset::Reflected}};
const std::pair<const char*, Fixture> kFixtures[] = {
    {"none", Fixture::None}, {"negative_identity", Fixture::NegativeIdentity},
    {"broken_stencil", Fixture::BrokenStencil}};

template <class Table, class T>
std::string name_of(const Table& table, T value) {
  for (const auto& [name, v] : table)
    if (v == value) return name;
  return "?";
}

}  // namespace

std::string to_string(Command c) { return name_of(kCommands, c); }
std::string to_string(InitialPreset p) { return name_of(kPresets, p); }
std::string to_string(Fixture f) { return name_of(kFixtures, f); }

RunSpec parse_config(std::string_view text) {
  const Document doc(text);
  RunSpec spec;

  const Entry* cmd = doc.find("command");
  if (!cmd) throw ParseError(0, "missing required key `command`");
  spec.command = lookup(*cmd, "command", kCommands);
  const bool convergence = spec.command == Command::Convergence;

  if (const Entry* e = doc.find("energy")) spec.model.energy.kind = lookup(*e, "energy", kEnergies);
  doc.get("q", spec.model.energy.q);
  if (spec.model.energy.kind == EnergyModel::Kind::W0) spec.model.energy.q = 2.0;
  if (const Entry* e = doc.find("viscosity")) spec.model.viscosity.kind = lookup(*e, "viscosity", kViscosities);
  doc.get("m", spec.model.viscosity.m);
  if (spec.model.viscosity.kind != ViscosityModel::Kind::Zm) spec.model.viscosity.m = 0;

  spec.dim = convergence ? 1 : 2;
  doc.get("dim", spec.dim);
  const int max_dim = spec.command == Command::Korn ? 3 : 2;
  require(spec.dim >= 1 && spec.dim <= max_dim, "dim", "must be in [1, " + std::to_string(max_dim) + "]");

  SolverConfig& s = spec.solver;
  s = SolverConfig::defaults_for(spec.dim);
  s.p_norm = spec.dim + 3.0;
  if (convergence) {
    // 1D: four levels from 8 cells; 2D smoke case: three levels up to 32 cells
    spec.cells = 8;
    s.dt = spec.dim == 1 ? 0.01 : 0.1;
    s.t_end = spec.dim == 1 ? 0.5 : 0.8;
    spec.levels = spec.dim == 1 ? 4 : 3;
    spec.conv_fine_dt = spec.dim == 1 ? 1e-5 : 2e-4;
    spec.conv_fine_cells = spec.dim == 1 ? 256 : 32;
  }
  doc.get("cells", spec.cells);
  doc.get("dt", s.dt);
  doc.get("t_end", s.t_end);
  doc.get("picard_tol", s.picard_tol);
  doc.get("picard_max", s.picard_max);
  doc.get("det_floor", s.det_floor);
  doc.get("linear_tol", s.linear_tol);
  doc.get("linear_max_iter", s.linear_max_iter);
  doc.get("p_norm", s.p_norm);
  doc.get("save_every", s.save_every);

  if (const Entry* e = doc.find("initial")) spec.initial = lookup(*e, "initial", kPresets);
  doc.get("amplitude", spec.amplitude);
  doc.get("mode", spec.mode);
  doc.get("rate", spec.rate);
  if (const Entry* e = doc.find("output_dir")) spec.output_dir = e->value;
  doc.get("seed", spec.seed);

  spec.f0 = Matrix::identity(spec.dim);
  spec.q0 = Matrix(spec.dim);
  if (const Entry* e = doc.find("f0")) spec.f0 = parse_matrix(*e, "f0");
  if (const Entry* e = doc.find("q0")) spec.q0 = parse_matrix(*e, "q0");
  doc.get("resolution", spec.resolution);
  doc.get("refine_iters", spec.refine_iters);
  doc.get("directions", spec.directions);
  doc.get("fourier_fields", spec.fourier_fields);
  doc.get("fourier_modes", spec.fourier_modes);

  if (const Entry* e = doc.find("levels")) {
    spec.levels = Document::parse_number<int>(*e, "levels");
    if (spec.levels < 2) throw ParseError(e->line, "convergence study needs at least 2 levels");
  }
  doc.get("conv_fine_dt", spec.conv_fine_dt);
  doc.get("conv_fine_cells", spec.conv_fine_cells);
  if (const Entry* e = doc.find("fixture")) spec.fixture = lookup(*e, "fixture", kFixtures);

  auto finite_positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  require(spec.model.energy.kind == EnergyModel::Kind::W0 || (std::isfinite(spec.model.energy.q) && spec.model.energy.q > 1.0),
          "q", "must exceed 1");
  require(spec.model.viscosity.m >= 0 && spec.model.viscosity.m <= 10, "m", "must be in [0, 10]");
  require(spec.cells >= 4 && spec.cells <= 4096, "cells", "must be in [4, 4096]");
  require(finite_positive(s.dt), "dt", "must be positive");
  require(finite_positive(s.t_end) && s.dt <= s.t_end, "t_end", "must be positive and at least dt");
  require(std::isfinite(s.picard_tol) && s.picard_tol >= 0.0, "picard_tol", "must be nonnegative");
  require(s.picard_max >= 1 && s.picard_max <= 1000, "picard_max", "must be in [1, 1000]");
  require(finite_positive(s.det_floor) && s.det_floor < 1.0, "det_floor", "must be in (0, 1)");
  require(finite_positive(s.linear_tol) && s.linear_tol < 1.0, "linear_tol", "must be in (0, 1)");
  require(s.linear_max_iter >= 1, "linear_max_iter", "must be at least 1");
  require(std::isfinite(s.p_norm) && s.p_norm > spec.dim + 2, "p_norm",
          "must exceed dim + 2 = " + std::to_string(spec.dim + 2));
  require(s.save_every >= 1, "save_every", "must be at least 1");
  require(std::isfinite(spec.amplitude) && spec.amplitude >= 0.0, "amplitude", "must be finite and nonnegative");
  require(spec.mode >= 1 && spec.mode <= 64, "mode", "must be in [1, 64]");
  require(std::isfinite(spec.rate) && spec.rate >= 0.0, "rate", "must be finite and nonnegative");
  require(spec.f0.dim() == spec.dim && spec.f0.is_finite(), "f0", "must be a finite dim x dim matrix");
  require(spec.q0.dim() == spec.dim && spec.q0.is_finite(), "q0", "must be a finite dim x dim matrix");
  require(spec.resolution >= 8, "resolution", "must be at least 8");
  require(spec.refine_iters >= 0, "refine_iters", "must be nonnegative");
  require(spec.directions >= spec.dim + 1, "directions", "must be at least dim + 1");
  require(spec.fourier_fields >= 1, "fourier_fields", "must be at least 1");
  require(spec.fourier_modes >= 1 && spec.fourier_modes <= 64, "fourier_modes", "must be in [1, 64]");
  require(spec.levels <= 8, "levels", "must be at most 8");
  require(finite_positive(spec.conv_fine_dt), "conv_fine_dt", "must be positive");
  require(spec.conv_fine_cells >= 4 && spec.conv_fine_cells <= 4096, "conv_fine_cells", "must be in [4, 4096]");
  return spec;
}

std::string serialize_config(const RunSpec& spec) {
  std::ostringstream out;
  const SolverConfig& s = spec.solver;
  auto kv = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
  kv("command", to_string(spec.command));
  kv("energy", spec.model.energy.name());
  kv("q", format_double(spec.model.energy.q));
  kv("viscosity", name_of(kViscosities, spec.model.viscosity.kind));
  kv("m", std::to_string(spec.model.viscosity.m));
  kv("dim", std::to_string(spec.dim));
  kv("cells", std::to_string(spec.cells));
  kv("dt", format_double(s.dt));
  kv("t_end", format_double(s.t_end));
  kv("picard_tol", format_double(s.picard_tol));
  kv("picard_max", std::to_string(s.picard_max));
  kv("det_floor", format_double(s.det_floor));
  kv("linear_tol", format_double(s.linear_tol));
  kv("linear_max_iter", std::to_string(s.linear_max_iter));
  kv("p_norm", format_double(s.p_norm));
  kv("save_every", std::to_string(s.save_every));
  kv("initial", to_string(spec.initial));
  kv("amplitude", format_double(spec.amplitude));
  kv("mode", std::to_string(spec.mode));
  kv("rate", format_double(spec.rate));
  kv("output_dir", spec.output_dir);
  kv("seed", std::to_string(spec.seed));
  kv("f0", matrix_text(spec.f0));
  kv("q0", matrix_text(spec.q0));
  kv("resolution", std::to_string(spec.resolution));
  kv("refine_iters", std::to_string(spec.refine_iters));
  kv("directions", std::to_string(spec.directions));
  kv("fourier_fields", std::to_string(spec.fourier_fields));
  kv("fourier_modes", std::to_string(spec.fourier_modes));
  kv("levels", std::to_string(spec.levels));
  kv("conv_fine_dt", format_double(spec.conv_fine_dt));
  kv("conv_fine_cells", std::to_string(spec.conv_fine_cells));
  kv("fixture", to_string(spec.fixture));
  return out.str();
}

std::pair<VectorFunction, VectorFunction> initial_data(const RunSpec& spec) {
  using std::numbers::pi;
  const int n = spec.dim;
  VectorFunction identity = [](const Vector& x) { return x; };
  VectorFunction still = [n](const Vector&) { return Vector(n); };

  switch (spec.initial) {
    case InitialPreset::Rest:
      return {identity, still};
    case InitialPreset::Sinusoidal: {
      const double a = spec.amplitude, k = spec.mode * pi;
      return {identity, [=](const Vector& x) {
                if (n == 1) return Vector{a * std::sin(k * x[0])};
                const double s = a * std::sin(k * x[0]) * std::sin(k * x[1]);
                return Vector{s, s};
              }};
    }
    case InitialPreset::Compression: {
      // inward motion towards the centre with zero boundary velocity
      const double r = spec.rate / (2.0 * pi);
      return {identity, [=](const Vector& x) {
                if (n == 1) return Vector{r * std::sin(2.0 * pi * x[0])};
                return Vector{r * std::sin(2.0 * pi * x[0]) * std::sin(pi * x[1]),
                              r * std::sin(pi * x[0]) * std::sin(2.0 * pi * x[1])};
              }};
    }
    case InitialPreset::Reflected:
      // folds the region near x = 0 over itself, det grad xi0 < 0 there
      return {[=](const Vector& x) {
                Vector y = x;
                const double bump = n == 1 ? std::sin(pi * x[0]) : std::sin(pi * x[0]) * std::sin(pi * x[1]);
                y[0] -= 1.5 * bump / pi;
                return y;
              },
              still};
  }
  throw InvalidConfig("unknown initial preset");
}

}  // namespace visco
