#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <numbers>

#include "gmi/spectrum.hpp"
#include "test_util.hpp"

using namespace gmi::spectrum;

TEST_CASE("gaussian spectrum: zero variance is the zero spectrum") {
  const auto S = gaussian_spectrum(0.0, 1.0, 0.1);
  CHECK(S(0.5) == 0.0);
  CHECK(S(1.0) == 0.0);
  CHECK(S.k_max == 0.0);
}

TEST_CASE("gaussian spectrum: integral and peak value") {
  const auto S = gaussian_spectrum(1.0, 1.0, 0.1);
  const double integral = testutil::quad([&](double k) { return S(k); }, 0.0, S.k_max);
  CHECK(std::abs(integral - 1.0) < 1e-12);
  CHECK(S(1.0) == doctest::Approx(1.0 / (0.1 * std::sqrt(std::numbers::pi))).epsilon(1e-13));
}

TEST_CASE("gaussian spectrum: parameter validation") {
  CHECK_THROWS_AS(gaussian_spectrum(1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_spectrum(1.0, 1.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_spectrum(-1.0, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("jonswap: alpha scales linearly, gamma narrows the peak") {
  const auto S1 = jonswap_spectrum(0.01, 3.3, 1.0);
  const auto S2 = jonswap_spectrum(0.02, 3.3, 1.0);
  for (double k : {0.5, 0.9, 1.0, 1.5, 3.0})
    CHECK(S2(k) == doctest::Approx(2.0 * S1(k)).epsilon(1e-12));

  // spectral bandwidth = sqrt of the second central moment of S / integral
  auto bandwidth = [](const PowerSpectrum& S) {
    const double m0 = testutil::quad([&](double k) { return S(k); }, 0.0, S.k_max, 1e-11);
    const double m1 = testutil::quad([&](double k) { return k * S(k); }, 0.0, S.k_max, 1e-11);
    const double mean = m1 / m0;
    const double m2 = testutil::quad(
        [&](double k) { return (k - mean) * (k - mean) * S(k); }, 0.0, S.k_max, 1e-11);
    return std::sqrt(m2 / m0);
  };
  const auto narrow = jonswap_spectrum(0.01, 7.0, 1.0);
  CHECK(bandwidth(narrow) < bandwidth(S1));

  CHECK_THROWS_AS(jonswap_spectrum(0.01, 0.5, 1.0), std::invalid_argument);
  const auto S0 = jonswap_spectrum(0.0, 3.3, 1.0);
  CHECK(S0(1.0) == 0.0);
}

TEST_CASE("jonswap: unimodal and peaked near the requested wavenumber") {
  const auto S = jonswap_spectrum(0.01, 3.3, 1.0);
  double best_k = 0.0, best = 0.0;
  for (double k = 0.05; k < 4.0; k += 0.001)
    if (S(k) > best) {
      best = S(k);
      best_k = k;
    }
  CHECK(best_k == doctest::Approx(1.0).epsilon(0.25));
}

TEST_CASE("discretize: zero spectrum gives all-zero coefficients") {
  const auto D = discretize(zero_spectrum(), 100.0, 1);
  CHECK(D.mode_count == 0);
  CHECK(D.total_variance() == 0.0);
}

TEST_CASE("discretize: m=1 sum converges to the integral at rate 1/L") {
  const auto S = gaussian_spectrum(1.0, 1.0, 0.1);
  const double integral = testutil::quad([&](double k) { return S(k); }, 0.0, S.k_max);
  double prev_err = 0.0;
  int i = 0;
  for (double L : {100.0, 200.0, 400.0}) {
    const auto D = discretize(S, L, 1);
    const double err = std::abs(D.total_variance() - integral);
    if (i++ > 0 && err > 1e-14) {
      const double ratio = prev_err / err;
      CHECK(ratio > 1.7);
      CHECK(ratio < 2.3);
    }
    prev_err = err;
  }
}

TEST_CASE("discretize: m=2 zeroes every odd coefficient") {
  const auto S = gaussian_spectrum(1.0, 1.0, 0.1);
  const auto D = discretize(S, 100.0, 2);
  for (long n = 1; n <= 2 * D.mode_count; n += 2) CHECK(D.P(n) == 0.0);
  CHECK(D.P(2 * (D.mode_count / 2)) >= 0.0);
  bool any = false;
  for (long n = 2; n <= 2 * D.mode_count; n += 2) any = any || D.P(n) > 0.0;
  CHECK(any);
}

TEST_CASE("discretize: invalid parameters") {
  const auto S = gaussian_spectrum(1.0, 1.0, 0.1);
  CHECK_THROWS_AS(discretize(S, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(discretize(S, -5.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(discretize(S, 10.0, 0), std::invalid_argument);
}

TEST_CASE("autocorrelation: variance identity, one-mode case, periodicity") {
  const auto S = gaussian_spectrum(2.0, 1.0, 0.1);
  const auto D = discretize(S, 50.0, 1);

  const auto g0 = autocorrelation(D, 0.0);
  CHECK(g0.imag() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g0.real() == doctest::Approx(D.total_variance()).epsilon(1e-14));

  DiscreteSpectrum single;
  single.domain_length = 50.0;
  single.spacing_multiplier = 1;
  single.mode_count = 5;
  single.coefficients.assign(6, 0.0);
  single.coefficients[5] = 0.7;
  for (double x : {0.0, 1.3, 7.7}) {
    const auto g = autocorrelation(single, x);
    CHECK(std::abs(g) == doctest::Approx(0.7).epsilon(1e-14));
    const auto expected = 0.7 * std::polar(1.0, 2.0 * std::numbers::pi * 5.0 * x / 50.0);
    CHECK(std::abs(g - expected) < 1e-14);
  }

  const auto gL = autocorrelation(D, 50.0);
  CHECK(std::abs(gL - g0) < 1e-10 * std::abs(g0));
}

TEST_CASE("autocorrelation: Hermitian in the lag for random lags") {
  const auto D = discretize(gaussian_spectrum(1.0, 1.0, 0.1), 80.0, 1);
  testutil::Rng rng(42);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-40.0, 40.0);
    const auto a = autocorrelation(D, -x);
    const auto b = std::conj(autocorrelation(D, x));
    CHECK(std::abs(a - b) < 1e-12 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("tabulated spectrum: CSV round trip and interpolation") {
  const char* path = "test_spectrum_table.csv";
  {
    std::ofstream out(path);
    out << "k,S\n0.5,0.0\n1.0,2.0\n1.5,1.0\n2.0,0.0\n";
  }
  const auto S = tabulated_spectrum(path);
  CHECK(S(1.0) == doctest::Approx(2.0));
  CHECK(S(1.25) == doctest::Approx(1.5));
  CHECK(S(0.25) == 0.0);
  CHECK(S(3.0) == 0.0);
  CHECK(S(1.75) == doctest::Approx(0.5));
  CHECK(S.k_max == doctest::Approx(2.0));
  std::remove(path);
}
