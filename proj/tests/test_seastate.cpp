#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "gmi/seastate.hpp"
#include "gmi/spectrum.hpp"
#include "test_util.hpp"

using namespace gmi;
using Complex = std::complex<double>;

namespace {
spectrum::PowerSpectrum single_bin_spectrum(double L, double value) {
  // Only k = 1/L falls inside the support.
  return spectrum::tabulated_spectrum({0.5 / L, 1.0 / L, 1.4 / L},
                                      {value, value, value}, "single-bin");
}
}  // namespace

TEST_CASE("generate: zero spectrum evaluates to the zero field") {
  const auto r = seastate::generate(spectrum::zero_spectrum(), 50.0, 1, 7);
  CHECK(r.modes.empty());
  CHECK(seastate::evaluate(r, 3.7) == Complex{0.0, 0.0});
}

TEST_CASE("generate: amplitudes and wavenumbers follow the discretization") {
  const auto S = spectrum::gaussian_spectrum(1.0, 1.0, 0.1);
  const double L = 100.0;
  const auto r = seastate::generate(S, L, 1, 11);
  const auto D = spectrum::discretize(S, L, 1);
  REQUIRE(static_cast<int>(r.modes.size()) == D.mode_count);
  for (std::size_t j = 0; j < r.modes.size(); ++j) {
    const long n = static_cast<long>(j) + 1;
    CHECK(r.modes[j].wavenumber == doctest::Approx(n / L).epsilon(1e-15));
    CHECK(r.modes[j].amplitude ==
          doctest::Approx(std::sqrt(D.P(n))).epsilon(1e-13));
    CHECK(r.modes[j].phase >= 0.0);
    CHECK(r.modes[j].phase < 1.0);
    if (j > 0) CHECK(r.modes[j].wavenumber > r.modes[j - 1].wavenumber);
  }
}

TEST_CASE("generate: same seed gives a bit-identical realization") {
  const auto S = spectrum::gaussian_spectrum(1.0, 1.0, 0.1);
  const auto a = seastate::generate(S, 60.0, 1, 123456);
  const auto b = seastate::generate(S, 60.0, 1, 123456);
  REQUIRE(a.modes.size() == b.modes.size());
  for (std::size_t j = 0; j < a.modes.size(); ++j) {
    CHECK(a.modes[j].phase == b.modes[j].phase);
    CHECK(a.modes[j].amplitude == b.modes[j].amplitude);
  }
}

TEST_CASE("generate: domain too short for any mode") {
  const auto S = spectrum::gaussian_spectrum(1.0, 1.0, 0.1);
  CHECK_THROWS_AS(seastate::generate(S, 0.2, 1, 1), std::invalid_argument);
}

TEST_CASE("evaluate: single mode and periodicity") {
  const double L = 30.0;
  const auto r = seastate::generate(single_bin_spectrum(L, 0.5 * L), L, 1, 3);
  REQUIRE(r.modes.size() == 1);
  const double A = r.modes[0].amplitude;
  for (double x : {0.0, 1.1, -7.3}) {
    CHECK(std::abs(std::abs(seastate::evaluate(r, x)) - A) < 1e-13);
    CHECK(std::abs(seastate::evaluate(r, x + L) - seastate::evaluate(r, x)) <
          1e-12 * (1.0 + A));
  }
  const Complex expected =
      A * std::polar(1.0, 2.0 * std::numbers::pi *
                              (r.modes[0].wavenumber * 2.5 + r.modes[0].phase));
  CHECK(std::abs(seastate::evaluate(r, 2.5) - expected) < 1e-14);
}

TEST_CASE("sample_on_grid: matches direct evaluation (DFT-style oracle)") {
  const auto S = spectrum::gaussian_spectrum(1.0, 1.0, 0.1);
  const double L = 40.0;
  const auto r = seastate::generate(S, L, 1, 99);
  const int N_x = 256;
  const auto field = seastate::sample_on_grid(r, N_x);
  double amp_sum = 0.0;
  for (const auto& m : r.modes) amp_sum += m.amplitude;
  for (int i = 0; i < N_x; ++i) {
    const double x = -L / 2.0 + i * L / N_x;
    CHECK(std::abs(field[static_cast<std::size_t>(i)] - seastate::evaluate(r, x)) <
          1e-12 * amp_sum);
  }
}

TEST_CASE("sample_on_grid: refuses aliasing and satisfies Parseval") {
  const auto S = spectrum::gaussian_spectrum(1.0, 1.0, 0.1);
  const double L = 40.0;
  const auto r = seastate::generate(S, L, 1, 99);
  const long mM = static_cast<long>(r.modes.size());
  CHECK_THROWS_AS(seastate::sample_on_grid(r, static_cast<int>(2 * mM - 2)),
                  std::invalid_argument);

  const int N_x = static_cast<int>(2 * mM + 8);
  const auto field = seastate::sample_on_grid(r, N_x);
  double mean_power = 0.0;
  for (const auto& u : field) mean_power += std::norm(u);
  mean_power /= N_x;
  double expected = 0.0;
  for (const auto& m : r.modes) expected += m.amplitude * m.amplitude;
  CHECK(mean_power == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("ensemble: distinct derived seeds, deterministic estimator") {
  const auto S = spectrum::gaussian_spectrum(1.0, 1.0, 0.1);
  const auto e = seastate::make_ensemble(S, 50.0, 1, 32, 2024);
  for (std::size_t i = 0; i < e.realizations.size(); ++i)
    for (std::size_t j = i + 1; j < e.realizations.size(); ++j)
      CHECK(e.realizations[i].seed != e.realizations[j].seed);

  const auto a = seastate::ensemble_autocorrelation(e, 0.7);
  const auto b = seastate::ensemble_autocorrelation(e, 0.7);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("ensemble_autocorrelation: single-bin spectrum has zero variance at lag 0") {
  const double L = 30.0;
  const auto e = seastate::make_ensemble(single_bin_spectrum(L, 0.5 * L), L, 1, 64, 5);
  const double A2 = e.realizations[0].modes[0].amplitude *
                    e.realizations[0].modes[0].amplitude;
  const auto est = seastate::ensemble_autocorrelation(e, 0.0);
  CHECK(std::abs(est.value - Complex{A2, 0.0}) < 1e-12 * A2);
  CHECK(est.std_error < 1e-12 * A2);
}

TEST_CASE("ensemble_autocorrelation: lag 0 matches the discrete variance (MC)") {
  const auto S = spectrum::gaussian_spectrum(1.0, 1.0, 0.1);
  const double L = 50.0;
  const auto D = spectrum::discretize(S, L, 1);
  const auto e = seastate::make_ensemble(S, L, 1, 800, 77);
  const auto est = seastate::ensemble_autocorrelation(e, 0.0, 32);
  const double target = D.total_variance();
  CHECK(std::abs(est.value.real() - target) < 3.0 * est.std_error + 1e-12);
}

TEST_CASE("ensemble_autocorrelation: nonzero lag matches the autocorrelation (MC)") {
  const auto S = spectrum::gaussian_spectrum(1.0, 1.0, 0.1);
  const double L = 50.0;
  const auto D = spectrum::discretize(S, L, 1);
  const auto e = seastate::make_ensemble(S, L, 1, 800, 99);
  const double lag = 0.35;
  const auto est = seastate::ensemble_autocorrelation(e, lag, 32);
  const auto target = spectrum::autocorrelation(D, lag);
  CHECK(std::abs(est.value - target) < 4.0 * est.std_error + 1e-12);
}

TEST_CASE("homogeneity: two base points agree within Monte Carlo error") {
  const auto S = spectrum::gaussian_spectrum(1.0, 1.0, 0.1);
  const auto e = seastate::make_ensemble(S, 50.0, 1, 1500, 31415);
  const auto a = seastate::ensemble_autocorrelation_at(e, 0.0, -3.0);
  const auto b = seastate::ensemble_autocorrelation_at(e, 0.0, 8.5);
  const double sigma = std::hypot(a.std_error, b.std_error);
  CHECK(std::abs(a.value - b.value) < 3.5 * sigma);
}

TEST_CASE("mean field vanishes in Monte Carlo") {
  const auto S = spectrum::gaussian_spectrum(1.0, 1.0, 0.1);
  const auto e = seastate::make_ensemble(S, 50.0, 1, 1000, 8);
  Complex mean = 0.0;
  double var = 0.0;
  for (const auto& r : e.realizations) mean += seastate::evaluate(r, 1.0);
  mean /= static_cast<double>(e.realizations.size());
  for (const auto& r : e.realizations) var += std::norm(seastate::evaluate(r, 1.0) - mean);
  const double se = std::sqrt(var) / static_cast<double>(e.realizations.size());
  CHECK(std::abs(mean) < 3.5 * se);
}

TEST_CASE("empty ensemble is rejected") {
  seastate::Ensemble e;
  CHECK_THROWS_AS(seastate::ensemble_autocorrelation(e, 0.0), std::invalid_argument);
}
