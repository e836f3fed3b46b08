#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gmi/alber.hpp"
#include "gmi/nlssim.hpp"
#include "gmi/spectrum.hpp"

namespace gmi::experiments {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Initial inhomogeneity profiles delta_j(x), j = 1..5, at unit amplitude.
double inhomogeneity_profile(int j, double x);

struct Table1Options {
  double dt = 4e-3;
  double dx = 4e-3;
  double T = 10.0;
  int store_every = 25;
};

struct Table1Cell {
  int j;
  double N;
  double L;
  double max_delta;
};

// Plane-wave MI experiment (p = q = A = 1, L = N * L_c): returns the
// maximum modulus of the extracted inhomogeneity over the stored snapshots.
Table1Cell run_table1_cell(int j, double N, const Table1Options& opt = {});

// The full 20-cell matrix, cells run in parallel with `workers` threads;
// the returned order is deterministic (row-major in j then N).
std::vector<Table1Cell> run_table1(const Table1Options& opt = {}, int workers = 0);

struct GmiOptions {
  double dt = 4e-3;
  double dx = 4e-3;
  double T = 10.3;
  int store_every = 25;
};

struct GmiResult {
  int N;
  double L;
  double sup_delta;
  nlssim::WaveField background;   // u
  nlssim::WaveField perturbed;    // v
  std::vector<nlssim::Field> delta;
};

// Three-mode background on L = N * L_0 (L_0 = 4.4518) plus a localized
// perturbation 0.07 sech(15x) cos(5x); delta = v - u.
GmiResult run_gmi(int N, const GmiOptions& opt = {});

struct PipelineOptions {
  int m = 1;
  long xi_max = 0;          // 0: derived from the delta-spectrum band estimate
  alber::ContourSpec contour;
  double refine_tol = 1e-8;
  std::vector<double> convergence_X;       // empty: derived
  alber::Complex convergence_omega{0.5, 0.0};
  std::vector<double> convergence_L_factors{0.5, 1.0, 2.0, 4.0};
};

struct PipelineResult {
  alber::StabilityVerdict contour_verdict;
  alber::StabilityVerdict oracle_verdict;
  std::vector<alber::ConvergenceRow> convergence;
  bool methods_agree = false;
};

// discretize -> contour verdict -> eigenvalue-oracle cross-check ->
// Riemann convergence against h_inf. Disagreement is flagged, not resolved.
// p, q in the periodized-kernel convention (see alber::KernelParams).
PipelineResult run_stability_pipeline(const spectrum::PowerSpectrum& S, double L,
                                      double p, double q,
                                      const PipelineOptions& opt = {});

// Append-only provenance record; the hash covers the canonical config dump.
struct RunRecord {
  std::string config_json;
  std::string outputs_json;
  double wall_seconds = 0.0;
  std::string config_hash;
  std::string version = kToolkitVersion;
};

std::string fnv1a_hash(const std::string& bytes);
RunRecord make_record(const std::string& config_json, const std::string& outputs_json,
                      double wall_seconds);
void write_record(const RunRecord& record, const std::string& path);

}  // namespace gmi::experiments
