#include "gmi/experiments.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace gmi::experiments {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kL0 = 4.4518;  // reference length of the three-mode study

int even_grid_size(double L, double dx_target) {
  int n = static_cast<int>(std::lround(L / dx_target));
  if (n % 2 != 0) ++n;
  return std::max(n, 16);
}

nlssim::Field grid_map(double L, int N_x,
                       const std::function<nlssim::Complex(double)>& f) {
  nlssim::Field field(static_cast<std::size_t>(N_x));
  const double dx = L / N_x;
  for (int i = 0; i < N_x; ++i)
    field[static_cast<std::size_t>(i)] = f(-L / 2.0 + i * dx);
  return field;
}
}  // namespace

double inhomogeneity_profile(int j, double x) {
  switch (j) {
    case 1: return 0.03 / std::cosh(15.0 * x) * std::cos(5.0 * x);
    case 2: return 0.03 / std::cosh(15.0 * x);
    case 3: return 0.03 * std::exp(-3.0 * x * x);
    case 4: return 0.03 * std::exp(-x * x * x * x);
    case 5: return 0.06 * x * std::exp(-x * x * x * x);
    default:
      throw std::invalid_argument("inhomogeneity_profile: j must be in 1..5");
  }
}

Table1Cell run_table1_cell(int j, double N, const Table1Options& opt) {
  const double A = 1.0, p = 1.0, q = 1.0;
  const double L_c = kTwoPi / std::sqrt(2.0);
  const double L = N * L_c;

  nlssim::SimConfig cfg;
  cfg.p = p;
  cfg.q = q;
  cfg.L = L;
  cfg.N_x = even_grid_size(L, opt.dx);
  cfg.dt = opt.dt;
  cfg.T = opt.T;
  cfg.initial_field = grid_map(L, cfg.N_x, [&](double x) {
    return nlssim::Complex{A * (1.0 + inhomogeneity_profile(j, x)), 0.0};
  });

  const nlssim::WaveField wf = nlssim::solve(cfg, opt.store_every);
  const auto delta = nlssim::extract_inhomogeneity_planewave(wf, A, q);
  return Table1Cell{j, N, L, nlssim::max_abs(delta)};
}

std::vector<Table1Cell> run_table1(const Table1Options& opt, int workers) {
  const std::vector<double> Ns{0.98, 1.3, 3.0, 10.0};
  std::vector<std::pair<int, double>> cells;
  for (int j = 1; j <= 5; ++j)
    for (double N : Ns) cells.emplace_back(j, N);

  if (workers <= 0)
    workers = std::max(1u, std::thread::hardware_concurrency());

  std::vector<Table1Cell> out(cells.size());
  std::size_t next = 0;
  while (next < cells.size()) {
    std::vector<std::pair<std::size_t, std::future<Table1Cell>>> batch;
    for (int w = 0; w < workers && next < cells.size(); ++w, ++next)
      batch.emplace_back(next, std::async(std::launch::async, [&, idx = next] {
        return run_table1_cell(cells[idx].first, cells[idx].second, opt);
      }));
    for (auto& [idx, fut] : batch) out[idx] = fut.get();
  }
  return out;
}

GmiResult run_gmi(int N, const GmiOptions& opt) {
  if (N < 1) throw std::invalid_argument("run_gmi: N must be a positive integer");
  const double L = N * kL0;

  nlssim::SimConfig cfg;
  cfg.p = 1.0;
  cfg.q = 1.0;
  cfg.L = L;
  cfg.N_x = even_grid_size(L, opt.dx);
  cfg.dt = opt.dt;
  cfg.T = opt.T;

  auto background0 = [&](double x) {
    return 0.018 * std::polar(1.0, -kTwoPi * x / kL0) + 0.899 +
           0.1252 * std::polar(1.0, kTwoPi * x / kL0);
  };
  cfg.initial_field = grid_map(L, cfg.N_x, background0);
  nlssim::WaveField u = nlssim::solve(cfg, opt.store_every);

  cfg.initial_field = grid_map(L, cfg.N_x, [&](double x) {
    return background0(x) + 0.07 / std::cosh(15.0 * x) * std::cos(5.0 * x);
  });
  nlssim::WaveField v = nlssim::solve(cfg, opt.store_every);

  GmiResult res;
  res.N = N;
  res.L = L;
  res.delta = nlssim::extract_inhomogeneity_general(v, u);
  res.sup_delta = nlssim::max_abs(res.delta);
  res.background = std::move(u);
  res.perturbed = std::move(v);
  return res;
}

PipelineResult run_stability_pipeline(const spectrum::PowerSpectrum& S, double L,
                                      double p, double q,
                                      const PipelineOptions& opt) {
  const alber::KernelParams kp{p, q};
  const auto D = spectrum::discretize(S, L, opt.m);

  long xi_max = opt.xi_max;
  const double variance = D.total_variance();
  const double X_band =
      (variance > 0.0 && p > 0.0) ? std::sqrt(variance * q / p) / std::numbers::pi : 0.0;
  if (xi_max <= 0)
    xi_max = std::max<long>(8, static_cast<long>(std::ceil(1.5 * X_band * L)));

  PipelineResult res;
  res.contour_verdict = alber::detect_instability_contour(
      kp, D, -xi_max, xi_max, opt.contour, opt.refine_tol);
  const long K_trunc = 2 * static_cast<long>(D.spacing_multiplier) * D.mode_count;
  res.oracle_verdict = alber::eigenvalue_oracle(kp, D, K_trunc, -xi_max, xi_max);
  res.methods_agree =
      (res.contour_verdict.unstable == res.oracle_verdict.unstable) &&
      !res.contour_verdict.indeterminate;

  std::vector<double> Xs = opt.convergence_X;
  if (Xs.empty()) {
    if (X_band > 0.0)
      Xs = {0.5 * X_band, X_band};
    else
      Xs = {1.0 / std::numbers::pi};
  }
  for (double X : Xs) {
    std::vector<double> Ls;
    for (double f : opt.convergence_L_factors) Ls.push_back(f * L);
    const auto rows = alber::riemann_convergence_study(S, X, opt.convergence_omega,
                                                       kp, Ls, opt.m);
    res.convergence.insert(res.convergence.end(), rows.begin(), rows.end());
  }
  return res;
}

std::string fnv1a_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunRecord make_record(const std::string& config_json,
                      const std::string& outputs_json, double wall_seconds) {
  RunRecord r;
  r.config_json = config_json;
  r.outputs_json = outputs_json;
  r.wall_seconds = wall_seconds;
  r.config_hash = fnv1a_hash(config_json);
  return r;
}

void write_record(const RunRecord& record, const std::string& path) {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(record.config_json);
  j["outputs"] = nlohmann::json::parse(record.outputs_json);
  j["wall_seconds"] = record.wall_seconds;
  j["config_hash"] = record.config_hash;
  j["toolkit_version"] = record.version;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_record: cannot open " + path);
  out << j.dump(2) << '\n';
}

}  // namespace gmi::experiments
