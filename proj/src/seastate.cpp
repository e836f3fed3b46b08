#include "gmi/seastate.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

namespace gmi::seastate {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 53-bit uniform in [0,1), independent of library distribution internals.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Realization generate(const spectrum::PowerSpectrum& S, double L, int m,
                     std::uint64_t seed) {
  if (L <= 0.0) throw std::invalid_argument("generate: L must be positive");
  if (m < 1) throw std::invalid_argument("generate: m must be a positive integer");
  const int M = static_cast<int>(std::floor(S.k_max * L / m + 1e-9));
  if (S.k_max > 0.0 && M < 1)
    throw std::invalid_argument("generate: domain too short for any mode (M < 1)");

  Realization r;
  r.domain_length = L;
  r.seed = seed;
  const double dk = static_cast<double>(m) / L;
  std::mt19937_64 rng(seed);
  r.modes.reserve(static_cast<std::size_t>(M));
  for (int j = 1; j <= M; ++j) {
    const double kj = j * dk;
    Mode mode;
    mode.amplitude = std::sqrt(dk * S(kj));
    mode.wavenumber = kj;
    mode.phase = uniform01(rng);
    r.modes.push_back(mode);
  }
  return r;
}

Ensemble make_ensemble(const spectrum::PowerSpectrum& S, double L, int m,
                       int count, std::uint64_t base_seed) {
  if (count < 1) throw std::invalid_argument("make_ensemble: count must be positive");
  Ensemble e;
  e.base_seed = base_seed;
  e.realizations.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    e.realizations.push_back(
        generate(S, L, m, splitmix64(base_seed + static_cast<std::uint64_t>(i))));
  return e;
}

std::complex<double> evaluate(const Realization& r, double x) {
  std::complex<double> acc = 0.0;
  for (const Mode& mode : r.modes)
    acc += mode.amplitude * std::polar(1.0, kTwoPi * (mode.wavenumber * x + mode.phase));
  return acc;
}

std::vector<std::complex<double>> sample_on_grid(const Realization& r, int N_x) {
  if (N_x < 2) throw std::invalid_argument("sample_on_grid: N_x must be >= 2");
  long max_bin = 0;
  for (const Mode& mode : r.modes) {
    const long bin = std::lround(mode.wavenumber * r.domain_length);
    if (bin > max_bin) max_bin = bin;
  }
  if (N_x < 2 * max_bin)
    throw std::invalid_argument("sample_on_grid: N_x below the aliasing limit 2*m*M");

  const double L = r.domain_length;
  const double dx = L / N_x;
  std::vector<std::complex<double>> field(static_cast<std::size_t>(N_x));
  // One complex rotation per mode per point; phases are exact at x = -L/2
  // and advanced multiplicatively across the grid.
  std::vector<std::complex<double>> cur(r.modes.size()), step(r.modes.size());
  for (std::size_t j = 0; j < r.modes.size(); ++j) {
    const Mode& mode = r.modes[j];
    cur[j] = mode.amplitude *
             std::polar(1.0, kTwoPi * (mode.wavenumber * (-L / 2.0) + mode.phase));
    step[j] = std::polar(1.0, kTwoPi * mode.wavenumber * dx);
  }
  for (int i = 0; i < N_x; ++i) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < cur.size(); ++j) {
      acc += cur[j];
      cur[j] *= step[j];
    }
    field[static_cast<std::size_t>(i)] = acc;
  }
  return field;
}

namespace {
AcfEstimate reduce_mean(const std::vector<std::complex<double>>& per_member) {
  std::complex<double> mean = 0.0;
  for (const auto& v : per_member) mean += v;
  mean /= static_cast<double>(per_member.size());
  double var = 0.0;
  for (const auto& v : per_member) var += std::norm(v - mean);
  const auto n = static_cast<double>(per_member.size());
  const double se = (per_member.size() > 1) ? std::sqrt(var / (n * (n - 1.0))) : 0.0;
  return AcfEstimate{mean, se};
}
}  // namespace

AcfEstimate ensemble_autocorrelation(const Ensemble& e, double lag, int n_base_points) {
  if (e.realizations.empty())
    throw std::invalid_argument("ensemble_autocorrelation: empty ensemble");
  if (n_base_points < 1)
    throw std::invalid_argument("ensemble_autocorrelation: need at least one base point");
  const double L = e.realizations.front().domain_length;
  std::vector<std::complex<double>> per_member;
  per_member.reserve(e.realizations.size());
  for (const Realization& r : e.realizations) {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < n_base_points; ++i) {
      const double x = -L / 2.0 + i * (L / n_base_points);
      acc += evaluate(r, x) * std::conj(evaluate(r, x - lag));
    }
    per_member.push_back(acc / static_cast<double>(n_base_points));
  }
  return reduce_mean(per_member);
}

AcfEstimate ensemble_autocorrelation_at(const Ensemble& e, double lag, double x) {
  if (e.realizations.empty())
    throw std::invalid_argument("ensemble_autocorrelation_at: empty ensemble");
  std::vector<std::complex<double>> per_member;
  per_member.reserve(e.realizations.size());
  for (const Realization& r : e.realizations)
    per_member.push_back(evaluate(r, x) * std::conj(evaluate(r, x - lag)));
  return reduce_mean(per_member);
}

void write_realization_csv(const Realization& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_realization_csv: cannot open " + path);
  out << "j,A_j,k_j,phi_j\n";
  out.precision(17);
  for (std::size_t j = 0; j < r.modes.size(); ++j)
    out << (j + 1) << ',' << r.modes[j].amplitude << ',' << r.modes[j].wavenumber
        << ',' << r.modes[j].phase << '\n';
}

}  // namespace gmi::seastate
