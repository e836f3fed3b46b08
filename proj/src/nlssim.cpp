#include "gmi/nlssim.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace gmi::nlssim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kI{0.0, 1.0};
}  // namespace

Field solve_cyclic_tridiagonal(const std::vector<Complex>& diag, Complex off,
                               const Field& rhs) {
  const std::size_t n = diag.size();
  if (n < 3) throw std::invalid_argument("solve_cyclic_tridiagonal: need n >= 3");
  if (rhs.size() != n) throw std::invalid_argument("solve_cyclic_tridiagonal: size mismatch");

  // A = T + u v^T with u = (gamma, 0, ..., 0, off)^T, v = (1, 0, ..., 0, off/gamma)^T,
  // where T is the open tridiagonal with d0 -> d0 - gamma and
  // d_{n-1} -> d_{n-1} - off^2/gamma.
  const Complex gamma = -diag[0];
  std::vector<Complex> d(diag);
  d[0] -= gamma;
  d[n - 1] -= off * off / gamma;

  auto thomas = [&](const Field& b) {
    Field c(n), x(n);
    std::vector<Complex> dd(d);
    x[0] = b[0];
    for (std::size_t i = 1; i < n; ++i) {
      const Complex w = off / dd[i - 1];
      dd[i] -= w * off;
      x[i] = b[i] - w * x[i - 1];
    }
    x[n - 1] /= dd[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - off * x[i + 1]) / dd[i];
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(x[i].real()) || !std::isfinite(x[i].imag()))
        throw std::runtime_error("solve_cyclic_tridiagonal: linear solve breakdown");
    }
    return x;
  };

  Field u(n, Complex{0.0, 0.0});
  u[0] = gamma;
  u[n - 1] = off;
  const Field y = thomas(rhs);
  const Field z = thomas(u);
  const Complex vy = y[0] + (off / gamma) * y[n - 1];
  const Complex vz = z[0] + (off / gamma) * z[n - 1];
  const Complex factor = vy / (1.0 + vz);
  Field x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - factor * z[i];
  return x;
}

double mass(std::span<const Complex> field, double dx) {
  double s = 0.0;
  for (const Complex& u : field) s += std::norm(u);
  return s * dx;
}

double energy(std::span<const Complex> field, double dx, double p, double q) {
  const std::size_t n = field.size();
  if (n == 0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex du = (field[(i + 1) % n] - field[i]) / dx;
    s += p * std::norm(du) - 0.5 * q * std::norm(field[i]) * std::norm(field[i]);
  }
  return s * dx;
}

WaveField solve(const SimConfig& cfg, int store_every) {
  if (cfg.N_x < 16) throw std::invalid_argument("solve: N_x must be >= 16");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("solve: dt must be positive");
  if (!(cfg.T >= cfg.dt)) throw std::invalid_argument("solve: T must be >= dt");
  if (cfg.initial_field.size() != static_cast<std::size_t>(cfg.N_x))
    throw std::invalid_argument("solve: initial field size mismatch");
  if (store_every < 1) throw std::invalid_argument("solve: store_every must be >= 1");

  const auto n = static_cast<std::size_t>(cfg.N_x);
  const double dx = cfg.L / cfg.N_x;
  const double dt = cfg.dt;
  const long n_steps = std::lround(cfg.T / dt);
  const Complex off = cfg.p / (dx * dx);
  const Complex lead = 2.0 * kI / dt;

  WaveField out;
  out.N_x = cfg.N_x;
  out.dx = dx;
  out.L = cfg.L;

  Field u = cfg.initial_field;
  std::vector<double> phi(n);  // phi^{n-1/2}
  for (std::size_t i = 0; i < n; ++i) phi[i] = std::norm(u[i]);

  std::vector<Complex> diag(n);
  Field rhs(n);

  auto record = [&](long step) {
    const double t = step * dt;
    out.invariant_trace.push_back(
        InvariantRow{t, mass(u, dx), energy(u, dx, cfg.p, cfg.q)});
    if (step % store_every == 0 || step == n_steps) {
      out.times.push_back(t);
      out.snapshots.push_back(u);
    }
  };
  record(0);

  for (long step = 1; step <= n_steps; ++step) {
    for (std::size_t i = 0; i < n; ++i) phi[i] = 2.0 * std::norm(u[i]) - phi[i];
    for (std::size_t i = 0; i < n; ++i) {
      diag[i] = lead - 2.0 * off + cfg.q * phi[i];
      rhs[i] = lead * u[i];
    }
    const Field w = solve_cyclic_tridiagonal(diag, off, rhs);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = 2.0 * w[i] - u[i];
      if (!std::isfinite(u[i].real()) || !std::isfinite(u[i].imag()))
        throw std::runtime_error("solve: non-finite field value at step " +
                                 std::to_string(step));
    }
    record(step);
  }
  return out;
}

LinearMIReport linear_mi_analysis(double p, double q, double A, double L,
                                  long n_max) {
  if (A <= 0.0) throw std::invalid_argument("linear_mi_analysis: A must be positive");
  if (n_max < 1) throw std::invalid_argument("linear_mi_analysis: n_max must be >= 1");
  if (!(p > 0.0 && q > 0.0 && L > 0.0))
    throw std::invalid_argument("linear_mi_analysis: p, q, L must be positive");

  LinearMIReport rep;
  rep.L_c = kTwoPi * std::sqrt(p) / (A * std::sqrt(2.0 * q));
  for (long nn = -n_max; nn <= n_max; ++nn) {
    const double kn = kTwoPi * static_cast<double>(nn) / L;
    const double w2 = kn * kn * (p * p * kn * kn - 2.0 * p * q * A * A) /
                      (kTwoPi * kTwoPi);
    rep.mode_table.emplace_back(nn, w2);
    if (nn != 0 && w2 < 0.0) rep.unstable_modes.push_back(nn);
  }
  return rep;
}

double water_wave_Lc(double lambda0, double A, double g) {
  if (!(lambda0 > 0.0 && A > 0.0 && g > 0.0))
    throw std::invalid_argument("water_wave_Lc: lambda0, A, g must be positive");
  return lambda0 * lambda0 / (4.0 * std::numbers::pi * std::sqrt(2.0) * A);
}

std::vector<Field> extract_inhomogeneity_planewave(const WaveField& field,
                                                   double A, double q) {
  if (A == 0.0)
    throw std::invalid_argument("extract_inhomogeneity_planewave: A must be nonzero");
  std::vector<Field> out;
  out.reserve(field.snapshots.size());
  for (std::size_t s = 0; s < field.snapshots.size(); ++s) {
    const double t = field.times[s];
    const Complex bg = A * std::polar(1.0, q * A * A * t);
    const Complex unwind = std::polar(1.0 / A, -q * A * A * t);
    Field d(field.snapshots[s].size());
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = (field.snapshots[s][i] - bg) * unwind;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Field> extract_inhomogeneity_general(const WaveField& v,
                                                 const WaveField& u) {
  if (v.N_x != u.N_x || v.snapshots.size() != u.snapshots.size())
    throw std::invalid_argument("extract_inhomogeneity_general: grid/snapshot mismatch");
  for (std::size_t s = 0; s < v.times.size(); ++s)
    if (std::abs(v.times[s] - u.times[s]) > 1e-12)
      throw std::invalid_argument("extract_inhomogeneity_general: snapshot time mismatch");
  std::vector<Field> out;
  out.reserve(v.snapshots.size());
  for (std::size_t s = 0; s < v.snapshots.size(); ++s) {
    Field d(v.snapshots[s].size());
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = v.snapshots[s][i] - u.snapshots[s][i];
    out.push_back(std::move(d));
  }
  return out;
}

double max_abs(const std::vector<Field>& snapshots) {
  double m = 0.0;
  for (const Field& f : snapshots)
    for (const Complex& z : f) m = std::max(m, std::abs(z));
  return m;
}

void write_field_binary(const WaveField& field, const std::string& path_prefix) {
  std::ofstream bin(path_prefix + ".f64", std::ios::binary);
  if (!bin) throw std::runtime_error("write_field_binary: cannot open " + path_prefix + ".f64");
  for (const Field& snap : field.snapshots)
    for (const Complex& z : snap) {
      const double re = z.real(), im = z.imag();
      bin.write(reinterpret_cast<const char*>(&re), sizeof re);
      bin.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
  nlohmann::json side;
  side["N_x"] = field.N_x;
  side["dx"] = field.dx;
  side["L"] = field.L;
  side["times"] = field.times;
  side["layout"] = "time-major little-endian float64 (re,im) pairs";
  std::ofstream js(path_prefix + ".json");
  js << side.dump(2) << '\n';
}

void write_modulus_csv(const std::vector<Field>& snapshots,
                       const std::vector<double>& times, double L,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_modulus_csv: cannot open " + path);
  out << "t,x,abs\n";
  out.precision(12);
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    const std::size_t n = snapshots[s].size();
    for (std::size_t i = 0; i < n; ++i)
      out << times[s] << ',' << (-L / 2.0 + i * L / static_cast<double>(n)) << ','
          << std::abs(snapshots[s][i]) << '\n';
  }
}

void write_invariants_csv(const WaveField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_invariants_csv: cannot open " + path);
  out << "t,mass,energy\n";
  out.precision(17);
  for (const InvariantRow& row : field.invariant_trace)
    out << row.t << ',' << row.mass << ',' << row.energy << '\n';
}

}  // namespace gmi::nlssim
