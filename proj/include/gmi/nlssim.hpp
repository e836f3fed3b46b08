#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace gmi::nlssim {

using Complex = std::complex<double>;
using Field = std::vector<Complex>;

// Periodic cubic NLS i u_t + p u_xx + q |u|^2 u = 0 on [-L/2, L/2).
// Grid x_i = -L/2 + i * L / N_x.
struct SimConfig {
  double p = 1.0;
  double q = 1.0;
  double L = 1.0;
  int N_x = 0;
  double dt = 0.0;
  double T = 0.0;
  Field initial_field;
};

struct InvariantRow {
  double t;
  double mass;
  double energy;
};

struct WaveField {
  std::vector<double> times;
  std::vector<Field> snapshots;
  std::vector<InvariantRow> invariant_trace;
  int N_x = 0;
  double dx = 0.0;
  double L = 0.0;
};

// Relaxation scheme: auxiliary density phi at half steps with
// phi^{n+1/2} + phi^{n-1/2} = 2|u^n|^2 and a Crank-Nicolson update
// i (u^{n+1} - u^n)/dt + p D2 (u^{n+1}+u^n)/2 + q phi^{n+1/2} (u^{n+1}+u^n)/2 = 0,
// one cyclic tridiagonal solve per step. Conserves discrete mass to round-off.
WaveField solve(const SimConfig& cfg, int store_every);

double mass(std::span<const Complex> field, double dx);
// Forward-difference discrete Hamiltonian sum_i [p |D+ u_i|^2 - (q/2)|u_i|^4] dx.
double energy(std::span<const Complex> field, double dx, double p, double q);

struct LinearMIReport {
  std::vector<std::pair<long, double>> mode_table;  // (n, omega_n^2)
  double L_c = 0.0;
  std::vector<long> unstable_modes;  // n != 0 with omega_n^2 < 0
};

// Discrete plane-wave MI modes on the torus:
// (2 pi omega_n)^2 = (2 pi n / L)^2 [p^2 (2 pi n / L)^2 - 2 p q A^2],
// L_c = 2 pi sqrt(p) / (A sqrt(2 q)).
LinearMIReport linear_mi_analysis(double p, double q, double A, double L, long n_max);

// Deep-water bifurcation length L_c = lambda0^2 / (4 pi sqrt(2) A);
// g cancels out of the water-wave coefficients.
double water_wave_Lc(double lambda0, double A, double g);

// delta(x,t) = (u - A e^{i q A^2 t}) (1/A) e^{-i q A^2 t}, per snapshot.
std::vector<Field> extract_inhomogeneity_planewave(const WaveField& field,
                                                   double A, double q);

// delta = v - u on matching grids and snapshot times.
std::vector<Field> extract_inhomogeneity_general(const WaveField& v,
                                                 const WaveField& u);

double max_abs(const std::vector<Field>& snapshots);

// Cyclic (periodic) tridiagonal solve with constant off-diagonal, via
// Thomas elimination plus a Sherman-Morrison corner correction.
Field solve_cyclic_tridiagonal(const std::vector<Complex>& diag, Complex off,
                               const Field& rhs);

// Raw little-endian float64 (re, im) pairs, time-major, plus a JSON sidecar.
void write_field_binary(const WaveField& field, const std::string& path_prefix);
// CSV heatmap rows (t, x, value) of |snapshot| or |delta|.
void write_modulus_csv(const std::vector<Field>& snapshots,
                       const std::vector<double>& times, double L,
                       const std::string& path);
void write_invariants_csv(const WaveField& field, const std::string& path);

}  // namespace gmi::nlssim
