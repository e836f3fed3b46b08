#include "gmi/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gmi::spectrum {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double DiscreteSpectrum::total_variance() const {
  double s = 0.0;
  for (double v : coefficients) s += v;
  return s;
}

PowerSpectrum zero_spectrum() {
  return PowerSpectrum{[](double) { return 0.0; }, 0.0, "zero"};
}

PowerSpectrum gaussian_spectrum(double variance, double center, double width) {
  if (width <= 0.0) throw std::invalid_argument("gaussian_spectrum: width must be positive");
  if (center <= 0.0) throw std::invalid_argument("gaussian_spectrum: center must be positive");
  if (variance < 0.0) throw std::invalid_argument("gaussian_spectrum: variance must be nonnegative");
  const double amp = variance / (width * std::sqrt(std::numbers::pi));
  const double k_max = center + 8.0 * width;
  auto f = [amp, center, width](double k) {
    const double z = (k - center) / width;
    return amp * std::exp(-z * z);
  };
  std::ostringstream lbl;
  lbl << "gaussian(var=" << variance << ",center=" << center << ",width=" << width << ")";
  return PowerSpectrum{std::move(f), variance == 0.0 ? 0.0 : k_max, lbl.str()};
}

PowerSpectrum jonswap_spectrum(double alpha, double gamma, double peak_wavenumber,
                               double g, double k_max_override) {
  if (alpha < 0.0) throw std::invalid_argument("jonswap_spectrum: alpha must be nonnegative");
  if (gamma < 1.0) throw std::invalid_argument("jonswap_spectrum: gamma must be >= 1");
  if (peak_wavenumber <= 0.0) throw std::invalid_argument("jonswap_spectrum: peak wavenumber must be positive");
  if (g <= 0.0) throw std::invalid_argument("jonswap_spectrum: g must be positive");

  const double wp = std::sqrt(g * kTwoPi * peak_wavenumber);
  auto density = [alpha, gamma, g, wp](double k) {
    const double k_rad = kTwoPi * k;
    if (k_rad <= 0.0) return 0.0;
    const double w = std::sqrt(g * k_rad);
    const double sigma = (w <= wp) ? 0.07 : 0.09;
    const double r = std::exp(-0.5 * ((w - wp) / (sigma * wp)) * ((w - wp) / (sigma * wp)));
    const double sw = alpha * g * g * std::pow(w, -5.0) *
                      std::exp(-1.25 * std::pow(wp / w, 4.0)) * std::pow(gamma, r);
    // S_k(k) = S_w(w) * dw/dk_rad * dk_rad/dk
    const double jac = (g / (2.0 * w)) * kTwoPi;
    return sw * jac;
  };

  double k_max = k_max_override;
  if (k_max <= 0.0) {
    if (alpha == 0.0) {
      k_max = 0.0;
    } else {
      const double peak = density(peak_wavenumber);
      const double cut = 1e-12 * peak;
      double k = peak_wavenumber;
      while (density(k) > cut && k < 1e9 * peak_wavenumber) k *= 1.05;
      k_max = k;
    }
  }
  std::ostringstream lbl;
  lbl << "jonswap(alpha=" << alpha << ",gamma=" << gamma << ",kp=" << peak_wavenumber
      << ",k_max=" << k_max << ")";
  return PowerSpectrum{std::move(density), alpha == 0.0 && k_max_override <= 0.0 ? 0.0 : k_max,
                       lbl.str()};
}

PowerSpectrum tabulated_spectrum(std::vector<double> k, std::vector<double> S,
                                 std::string label) {
  if (k.size() != S.size() || k.empty())
    throw std::invalid_argument("tabulated_spectrum: need equally many k and S samples");
  for (std::size_t i = 1; i < k.size(); ++i)
    if (k[i] <= k[i - 1])
      throw std::invalid_argument("tabulated_spectrum: k column must be strictly increasing");
  for (double v : S)
    if (v < 0.0) throw std::invalid_argument("tabulated_spectrum: S must be nonnegative");

  // End of the positive support: the interpolant can be nonzero up to the
  // first sample after the last positive one.
  double k_max = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i)
    if (S[i] > 0.0) k_max = (i + 1 < k.size()) ? k[i + 1] : k[i];

  auto f = [k = std::move(k), S = std::move(S)](double x) {
    if (x < k.front() || x > k.back()) return 0.0;
    auto it = std::upper_bound(k.begin(), k.end(), x);
    if (it == k.begin()) return S.front();
    if (it == k.end()) return S.back();
    const std::size_t i = static_cast<std::size_t>(it - k.begin());
    const double t = (x - k[i - 1]) / (k[i] - k[i - 1]);
    return (1.0 - t) * S[i - 1] + t * S[i];
  };
  return PowerSpectrum{std::move(f), k_max, std::move(label)};
}

PowerSpectrum tabulated_spectrum(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::invalid_argument("tabulated_spectrum: cannot open " + csv_path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("tabulated_spectrum: empty file");
  std::vector<double> k, S;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double kk, ss;
    if (!(row >> kk >> ss))
      throw std::invalid_argument("tabulated_spectrum: malformed row: " + line);
    k.push_back(kk);
    S.push_back(ss);
  }
  return tabulated_spectrum(std::move(k), std::move(S), "csv:" + csv_path);
}

DiscreteSpectrum discretize(const PowerSpectrum& S, double L, int m) {
  if (L <= 0.0) throw std::invalid_argument("discretize: L must be positive");
  if (m < 1) throw std::invalid_argument("discretize: m must be a positive integer");
  const int M = static_cast<int>(std::floor(S.k_max * L / m + 1e-9));
  DiscreteSpectrum D;
  D.domain_length = L;
  D.spacing_multiplier = m;
  D.mode_count = M;
  D.coefficients.assign(static_cast<std::size_t>(m) * M + 1, 0.0);
  const double dk = static_cast<double>(m) / L;
  for (int j = 1; j <= M; ++j) {
    const long n = static_cast<long>(m) * j;
    D.coefficients[static_cast<std::size_t>(n)] = dk * S(static_cast<double>(n) / L);
  }
  return D;
}

std::complex<double> autocorrelation(const DiscreteSpectrum& D, double x) {
  std::complex<double> acc = 0.0;
  const double L = D.domain_length;
  for (int j = 1; j <= D.mode_count; ++j) {
    const long n = static_cast<long>(D.spacing_multiplier) * j;
    const double P = D.P(n);
    if (P == 0.0) continue;
    acc += P * std::polar(1.0, kTwoPi * x * static_cast<double>(n) / L);
  }
  return acc;
}

}  // namespace gmi::spectrum
