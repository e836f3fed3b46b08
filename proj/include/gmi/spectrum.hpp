#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace gmi::spectrum {

// Continuous nonnegative spectral density S(k) with compact support
// [0, k_max]. Wavenumbers are in cycles per unit length throughout
// (Fourier convention e^{2*pi*i*k*x}); radian input has to be converted
// by the caller.
struct PowerSpectrum {
  std::function<double(double)> density;  // evaluated only inside [0, k_max]
  double k_max = 0.0;
  std::string label;

  double operator()(double k) const {
    if (k < 0.0 || k > k_max || !density) return 0.0;
    return density(k);
  }
};

// Fourier coefficients P_n of the autocorrelation of the periodized
// random-phase process on a torus of length L. Nonzero only at
// n = m*j, j = 1..M, where P_{m*j} = (m/L) * S(j*m/L).
struct DiscreteSpectrum {
  std::vector<double> coefficients;  // index n in [0, m*M]
  double domain_length = 0.0;        // L
  int spacing_multiplier = 1;        // m
  int mode_count = 0;                // M

  double P(long n) const {
    if (n < 0 || n >= static_cast<long>(coefficients.size())) return 0.0;
    return coefficients[static_cast<std::size_t>(n)];
  }
  double total_variance() const;
};

PowerSpectrum zero_spectrum();

// Gaussian bump of given integral (variance), truncated to
// [0, center + 8*width]; the truncated tail is below 1e-14 relative.
PowerSpectrum gaussian_spectrum(double variance, double center, double width);

// Standard JONSWAP frequency spectrum mapped to wavenumber space via the
// deep-water dispersion relation w^2 = g*k_rad, k_rad = 2*pi*k.
// S_k(k) = S_w(w(k)) * dw/dk. Truncated where the density falls below
// 1e-12 of its peak unless k_max_override > 0 is given.
PowerSpectrum jonswap_spectrum(double alpha, double gamma, double peak_wavenumber,
                               double g = 9.81, double k_max_override = 0.0);

// Two-column CSV (k, S) with one header line; piecewise-linear between
// samples, zero outside the tabulated range.
PowerSpectrum tabulated_spectrum(const std::string& csv_path);
PowerSpectrum tabulated_spectrum(std::vector<double> k, std::vector<double> S,
                                 std::string label = "tabulated");

// P_n = (m/L) * S(n/L) at n = m*j, j = 1..M, zero otherwise,
// with M = floor(k_max * L / m).
DiscreteSpectrum discretize(const PowerSpectrum& S, double L, int m);

// Gamma(x) = sum_n P_n e^{2*pi*i*x*n/L}. Gamma(0) is the field variance.
std::complex<double> autocorrelation(const DiscreteSpectrum& D, double x);

}  // namespace gmi::spectrum
