#include "visco/wellposedness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

namespace visco {

namespace {

constexpr double kGolden = 0.6180339887498949;

struct InnerMin {
  double value;
  Vector a;
};

// min over unit a of <M(a (x) b) : a (x) b> for a fixed unit b
InnerMin inner_min(const FourthOrderTensor& m, const Vector& b) {
  const int n = m.dim();
  Matrix s(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) acc += m.at(i, j, k, l) * b[j] * b[l];
      s(i, k) = acc;
    }
  const SymmetricEigen eig = symmetric_eigen(sym(s));
  Vector a(n);
  for (int i = 0; i < n; ++i) a[i] = eig.vectors(i, 0);
  return {eig.values[0], a};
}

Vector direction_2d(double phi) { return Vector{std::cos(phi), std::sin(phi)}; }

Vector direction_3d(double theta, double phi) {
  return Vector{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

// Golden-section minimization of f on [lo, hi]; returns the best abscissa seen.
double golden_section(const std::function<double(double)>& f, double lo, double hi, int iters, int& evals) {
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  evals += 2;
  for (int it = 0; it < iters; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = f(x2);
    }
    ++evals;
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace

double rank_one_ratio(const FourthOrderTensor& m, const Vector& a, const Vector& b) {
  const Matrix ab = outer(a, b);
  return frob(m.apply(ab), ab) / (dot(a, a) * dot(b, b));
}

RankOneResult rank_one_min(const FourthOrderTensor& m, int angular_resolution, int refine_iters) {
  const int n = m.dim();
  const int res = std::max(angular_resolution, 8);
  RankOneResult out;

  if (n == 1) {
    out.a_star = Vector{1.0};
    out.b_star = Vector{1.0};
    out.samples = 1;
  } else if (n == 2) {
    const double step = std::numbers::pi / res;
    double best_phi = 0.0, best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < res; ++i) {
      const double phi = i * step;
      const double v = inner_min(m, direction_2d(phi)).value;
      if (v < best) {
        best = v;
        best_phi = phi;
      }
    }
    int evals = res;
    auto f = [&](double phi) { return inner_min(m, direction_2d(phi)).value; };
    const double phi = golden_section(f, best_phi - step, best_phi + step, refine_iters, evals);
    if (f(phi) < best) best_phi = phi;
    out.b_star = direction_2d(best_phi);
    out.a_star = inner_min(m, out.b_star).a;
    out.samples = evals + 1;
  } else {
    // theta in [0, pi] including poles, phi in [0, pi): covers the sphere modulo b -> -b
    const double dtheta = std::numbers::pi / (res - 1);
    const double dphi = std::numbers::pi / res;
    double best = std::numeric_limits<double>::infinity(), bt = 0.0, bp = 0.0;
    for (int i = 0; i < res; ++i)
      for (int j = 0; j < res; ++j) {
        const double v = inner_min(m, direction_3d(i * dtheta, j * dphi)).value;
        if (v < best) {
          best = v;
          bt = i * dtheta;
          bp = j * dphi;
        }
      }
    int evals = res * res;
    for (int cycle = 0; cycle < 4; ++cycle) {
      const double scale = std::ldexp(1.0, -cycle);
      auto ft = [&](double t) { return inner_min(m, direction_3d(t, bp)).value; };
      const double t = golden_section(ft, bt - scale * dtheta, bt + scale * dtheta, refine_iters, evals);
      if (const double v = ft(t); v < best) {
        best = v;
        bt = t;
      }
      auto fp = [&](double p) { return inner_min(m, direction_3d(bt, p)).value; };
      const double p = golden_section(fp, bp - scale * dphi, bp + scale * dphi, refine_iters, evals);
      if (const double v = fp(p); v < best) {
        best = v;
        bp = p;
      }
      evals += 2;
    }
    out.b_star = direction_3d(bt, bp);
    out.a_star = inner_min(m, out.b_star).a;
    out.samples = evals;
  }

  out.a_star *= 1.0 / norm(out.a_star);
  out.b_star *= 1.0 / norm(out.b_star);
  out.ratio_min = rank_one_ratio(m, out.a_star, out.b_star);
  out.gamma_est = out.ratio_min > 0.0 ? 1.0 / out.ratio_min : std::numeric_limits<double>::infinity();
  return out;
}

double closed_form_gamma(const ViscosityModel& model, const Matrix& f0, const Matrix& q0) {
  const double j = det(f0);
  if (!(j > 0.0)) throw DomainError("closed-form gamma requires det F0 > 0");
  const double f_sq = frob(f0, f0);
  switch (model.kind) {
    case ViscosityModel::Kind::Z0DoublePrime: {
      const Matrix finv_t = transpose(inverse(f0));
      return frob(finv_t, finv_t);
    }
    case ViscosityModel::Kind::Z0Prime: return f_sq / j;
    case ViscosityModel::Kind::Zm: {
      if (model.m == 0) return 0.5 * f_sq;
      if (model.m > 2) throw Unsupported("closed-form gamma known only for m <= 2");
      const Matrix a = sym(q0 * inverse(f0));
      if (std::abs(det(a)) <= kDegenerateQThreshold)
        throw DegenerateQ("det sym(Q0 F0^{-1}) vanishes; the closed form requires it to be invertible");
      const Matrix a_inv = inverse(a);
      const double a_inv_sq = frob(a_inv, a_inv);
      return 2.0 * f_sq * std::pow(a_inv_sq, model.m);
    }
  }
  throw Unsupported("unknown viscosity model");
}

Matrix acoustic_matrix(const FourthOrderTensor& m, const Vector& k) {
  const int n = m.dim();
  Matrix mk(n);
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < n; ++p) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        for (int q = 0; q < n; ++q) acc += m.at(i, j, p, q) * k[j] * k[q];
      mk(i, p) = acc;
    }
  return mk;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
  const int n = a.dim();
  Eigen::MatrixXd e(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e(i, j) = a(i, j);
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(e, false).eigenvalues();
  std::vector<std::complex<double>> roots(ev.data(), ev.data() + n);
  std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return roots;
}

std::vector<std::complex<double>> acoustic_spectrum(const FourthOrderTensor& m, const Vector& k) {
  return eigenvalues(acoustic_matrix(m, k));
}

std::vector<Vector> unit_directions(int dim, int count) {
  std::vector<Vector> dirs;
  dirs.reserve(count);
  if (dim == 1) {
    for (int i = 0; i < count; ++i) dirs.push_back(Vector{i % 2 == 0 ? 1.0 : -1.0});
  } else if (dim == 2) {
    for (int i = 0; i < count; ++i) dirs.push_back(direction_2d(2.0 * std::numbers::pi * i / count));
  } else {
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden_angle * i;
      dirs.push_back(Vector{r * std::cos(phi), r * std::sin(phi), z});
    }
  }
  return dirs;
}

SpectrumReport sector_scan(const FourthOrderTensor& m, int num_directions) {
  SpectrumReport rep;
  rep.min_real_part = std::numeric_limits<double>::infinity();
  for (const Vector& k : unit_directions(m.dim(), num_directions)) {
    for (const auto& sigma : acoustic_spectrum(m, k)) {
      rep.min_real_part = std::min(rep.min_real_part, sigma.real());
      rep.max_abs_arg = std::max(rep.max_abs_arg, std::abs(std::arg(sigma)));
    }
    ++rep.directions_scanned;
  }
  rep.elliptic = rep.min_real_part > 0.0 && rep.max_abs_arg < 0.5 * std::numbers::pi;
  return rep;
}

namespace {

Vector wave_vector(const std::vector<int>& k) {
  Vector v(static_cast<int>(k.size()));
  for (std::size_t i = 0; i < k.size(); ++i) v[static_cast<int>(i)] = k[i];
  return v;
}

double quadratic(const FourthOrderTensor& m, const Vector& a, const Vector& k) {
  const Matrix ak = outer(a, k);
  return frob(m.apply(ak), ak);
}

// integer vectors with |k|_inf <= max_modes whose first nonzero entry is positive
std::vector<std::vector<int>> half_space_modes(int dim, int max_modes) {
  std::vector<std::vector<int>> modes;
  std::vector<int> k(dim, -max_modes);
  while (true) {
    const auto first = std::find_if(k.begin(), k.end(), [](int c) { return c != 0; });
    if (first != k.end() && *first > 0) modes.push_back(k);
    int pos = dim - 1;
    while (pos >= 0 && k[pos] == max_modes) k[pos--] = -max_modes;
    if (pos < 0) break;
    ++k[pos];
  }
  return modes;
}

}  // namespace

double trig_field_ratio(const FourthOrderTensor& m, const TrigField& field) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < field.modes.size(); ++j) {
    const Vector k = wave_vector(field.modes[j]);
    const double k_sq = dot(k, k);
    num += quadratic(m, field.cos_coef[j], k) + quadratic(m, field.sin_coef[j], k);
    den += k_sq * (dot(field.cos_coef[j], field.cos_coef[j]) + dot(field.sin_coef[j], field.sin_coef[j]));
  }
  return num / den;
}

double fourier_korn_sample(const FourthOrderTensor& m, int num_fields, int max_modes, std::uint64_t seed) {
  const int n = m.dim();
  const auto modes = half_space_modes(n, std::max(max_modes, 1));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double worst = std::numeric_limits<double>::infinity();
  for (int f = 0; f < std::max(num_fields, 1); ++f) {
    const double keep = unit(rng);
    TrigField field;
    for (const auto& k : modes) {
      if (unit(rng) > keep) continue;
      Vector c(n), s(n);
      for (int i = 0; i < n; ++i) {
        c[i] = normal(rng);
        s[i] = normal(rng);
      }
      field.modes.push_back(k);
      field.cos_coef.push_back(c);
      field.sin_coef.push_back(s);
    }
    if (field.modes.empty()) {
      const auto& k = modes[static_cast<std::size_t>(unit(rng) * modes.size()) % modes.size()];
      Vector c(n), s(n);
      for (int i = 0; i < n; ++i) c[i] = normal(rng);
      field.modes.push_back(k);
      field.cos_coef.push_back(c);
      field.sin_coef.push_back(s);
    }
    worst = std::min(worst, trig_field_ratio(m, field));
  }
  return worst;
}

UniformGammaReport check_initial_data(const ViscosityModel& model, std::span<const Matrix> f0,
                                      std::span<const Matrix> q0, int resolution) {
  if (f0.empty() || f0.size() != q0.size()) throw DimensionMismatch("initial-data fields must be nonempty and equal size");
  UniformGammaReport rep;
  rep.gamma_sup = -std::numeric_limits<double>::infinity();
  rep.gamma_inf = std::numeric_limits<double>::infinity();
  for (std::size_t node = 0; node < f0.size(); ++node) {
    if (!(det(f0[node]) > 0.0))
      throw DomainError("node " + std::to_string(node) + ": det F0 = " + std::to_string(det(f0[node])) + " <= 0");
    FourthOrderTensor tangent;
    try {
      tangent = viscous_tangent_q(model, f0[node], q0[node]);
    } catch (const SingularMatrix& e) {
      throw SingularMatrix("node " + std::to_string(node) + ": " + e.what());
    }
    const double gamma = rank_one_min(tangent, resolution).gamma_est;
    if (gamma > rep.gamma_sup) {
      rep.gamma_sup = gamma;
      rep.worst_node = node;
    }
    rep.gamma_inf = std::min(rep.gamma_inf, gamma);
  }
  rep.pass = std::isfinite(rep.gamma_sup);
  return rep;
}

}  // namespace visco
