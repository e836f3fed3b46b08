#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "gmi/spectrum.hpp"

namespace gmi::seastate {

struct Mode {
  double amplitude;   // A_j = sqrt(dk * S(k_j))
  double wavenumber;  // k_j = j * m / L, cycles per unit length
  double phase;       // in [0, 1)
};

struct Realization {
  std::vector<Mode> modes;  // strictly increasing wavenumbers
  double domain_length = 0.0;
  std::uint64_t seed = 0;
};

struct Ensemble {
  std::vector<Realization> realizations;
  std::uint64_t base_seed = 0;
};

// Random-phase realization: deterministic amplitudes from S, phases i.i.d.
// uniform on [0,1) from the seeded generator. Same seed gives a
// bit-identical realization.
Realization generate(const spectrum::PowerSpectrum& S, double L, int m,
                     std::uint64_t seed);

// Member seeds are derived from base_seed (splitmix64) and pairwise distinct.
Ensemble make_ensemble(const spectrum::PowerSpectrum& S, double L, int m,
                       int count, std::uint64_t base_seed);

// u0(x) = sum_j A_j e^{2*pi*i*(k_j*x + phi_j)}
std::complex<double> evaluate(const Realization& r, double x);

// Values at x_i = -L/2 + i*L/N_x. Refuses N_x below the aliasing limit
// 2*m*M so that every mode is resolved.
std::vector<std::complex<double>> sample_on_grid(const Realization& r, int N_x);

struct AcfEstimate {
  std::complex<double> value;
  double std_error;  // Monte Carlo standard error of the mean
};

// Mean over realizations and over a grid of base points of
// u(x) * conj(u(x - lag)). Converges to autocorrelation(D, lag).
AcfEstimate ensemble_autocorrelation(const Ensemble& e, double lag,
                                     int n_base_points = 64);

// Same estimator anchored at a single base point x (homogeneity checks).
AcfEstimate ensemble_autocorrelation_at(const Ensemble& e, double lag, double x);

// CSV export: header then one row (j, A_j, k_j, phi_j) per mode.
void write_realization_csv(const Realization& r, const std::string& path);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace gmi::seastate
