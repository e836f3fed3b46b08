#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gmi/experiments.hpp"
#include "gmi/spectrum.hpp"

using namespace gmi;

TEST_CASE("inhomogeneity profiles: values, symmetry, validation") {
  namespace ex = experiments;
  CHECK(ex::inhomogeneity_profile(1, 0.0) == doctest::Approx(0.03).epsilon(1e-15));
  CHECK(ex::inhomogeneity_profile(2, 0.0) == doctest::Approx(0.03).epsilon(1e-15));
  CHECK(ex::inhomogeneity_profile(3, 0.0) == doctest::Approx(0.03).epsilon(1e-15));
  CHECK(ex::inhomogeneity_profile(4, 0.0) == doctest::Approx(0.03).epsilon(1e-15));
  CHECK(ex::inhomogeneity_profile(5, 0.0) == 0.0);
  CHECK(ex::inhomogeneity_profile(5, 0.5) ==
        doctest::Approx(0.06 * 0.5 * std::exp(-0.0625)).epsilon(1e-14));

  // j = 1..4 even, j = 5 odd
  for (double x : {0.2, 0.9, 1.7}) {
    for (int j = 1; j <= 4; ++j)
      CHECK(ex::inhomogeneity_profile(j, -x) ==
            doctest::Approx(ex::inhomogeneity_profile(j, x)).epsilon(1e-14));
    CHECK(ex::inhomogeneity_profile(5, -x) ==
          doctest::Approx(-ex::inhomogeneity_profile(5, x)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(ex::inhomogeneity_profile(0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(ex::inhomogeneity_profile(6, 0.1), std::invalid_argument);
}

TEST_CASE("table1 cell: subcritical cell stays bounded at coarse resolution") {
  experiments::Table1Options opt;
  opt.dt = 0.01;
  opt.dx = 0.02;
  opt.T = 2.0;
  opt.store_every = 50;
  const auto cell = experiments::run_table1_cell(2, 0.98, opt);
  CHECK(cell.j == 2);
  CHECK(cell.N == doctest::Approx(0.98));
  CHECK(cell.L == doctest::Approx(0.98 * 2.0 * std::numbers::pi / std::sqrt(2.0)));
  CHECK(cell.max_delta > 0.0);
  CHECK(cell.max_delta < 0.3);
}

TEST_CASE("gmi run: short horizon is finite and the perturbation stays local in norm") {
  experiments::GmiOptions opt;
  opt.dt = 0.01;
  opt.dx = 0.05;
  opt.T = 0.5;
  opt.store_every = 10;
  const auto res = experiments::run_gmi(1, opt);
  CHECK(res.N == 1);
  CHECK(res.L == doctest::Approx(4.4518));
  CHECK(res.background.snapshots.size() == res.perturbed.snapshots.size());
  CHECK(res.sup_delta > 0.0);
  CHECK(res.sup_delta < 1.0);
  CHECK(std::isfinite(res.sup_delta));
  CHECK_THROWS_AS(experiments::run_gmi(0, opt), std::invalid_argument);
}

TEST_CASE("stability pipeline: zero spectrum and zero nonlinearity are stable") {
  experiments::PipelineOptions opt;
  opt.xi_max = 6;
  const auto a = experiments::run_stability_pipeline(spectrum::zero_spectrum(), 40.0, 1.0, 1.0, opt);
  CHECK_FALSE(a.contour_verdict.unstable);
  CHECK_FALSE(a.oracle_verdict.unstable);
  CHECK(a.methods_agree);

  const auto S = spectrum::gaussian_spectrum(1.0, 1.0, 0.1);
  const auto b = experiments::run_stability_pipeline(S, 40.0, 1.0, 0.0, opt);
  CHECK_FALSE(b.contour_verdict.unstable);
  CHECK_FALSE(b.oracle_verdict.unstable);
  CHECK(b.methods_agree);
  CHECK_FALSE(b.convergence.empty());
}

TEST_CASE("stability pipeline: intense narrow spectrum flagged unstable by both methods") {
  const auto S = spectrum::gaussian_spectrum(1.0, 1.0, 0.05);
  experiments::PipelineOptions opt;
  const auto r = experiments::run_stability_pipeline(S, 30.0, 1.0, 1.0, opt);
  CHECK(r.contour_verdict.unstable);
  CHECK(r.oracle_verdict.unstable);
  CHECK(r.methods_agree);
}

TEST_CASE("run record: reproducible hash, distinct for distinct configs") {
  namespace ex = experiments;
  const std::string cfg = R"({"experiment":"demo","seed":7})";
  const auto a = ex::make_record(cfg, "{}", 1.25);
  const auto b = ex::make_record(cfg, R"({"out":3})", 9.0);
  CHECK(a.config_hash == b.config_hash);
  CHECK(a.config_hash.size() == 16);
  const auto c = ex::make_record(R"({"experiment":"demo","seed":8})", "{}", 1.0);
  CHECK(c.config_hash != a.config_hash);
  CHECK(a.version == std::string(ex::kToolkitVersion));

  const char* path = "test_record.json";
  ex::write_record(a, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find(a.config_hash) != std::string::npos);
  CHECK(ss.str().find("toolkit_version") != std::string::npos);
  std::remove(path);
}
