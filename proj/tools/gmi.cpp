// gmi — stability toolkit for periodized stochastic sea states.
//
// Subcommands: spectrum, realize, stability, converge, simulate, table1, gmi.
// Configuration comes from an optional JSON file (--config); command-line
// flags override file values. Every run writes a provenance record under
// <out-root>/<experiment>/<config-hash>/record.json.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical abort,
// 4 indeterminate stability verdict.

#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gmi/alber.hpp"
#include "gmi/experiments.hpp"
#include "gmi/nlssim.hpp"
#include "gmi/seastate.hpp"
#include "gmi/spectrum.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gmi;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIndeterminate = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kKnownSections{
    "spectrum", "domain", "stability", "simulation", "experiment", "output", "seed"};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config root must be a JSON object");
  for (const auto& [key, _] : cfg.items()) {
    bool known = false;
    for (const auto& s : kKnownSections) known = known || key == s;
    if (!known) throw ConfigError("unknown config section: \"" + key + "\"");
  }
  return cfg;
}

spectrum::PowerSpectrum build_spectrum(const json& s) {
  const std::string type = s.value("type", "gaussian");
  if (type == "zero") return spectrum::zero_spectrum();
  if (type == "gaussian")
    return spectrum::gaussian_spectrum(s.value("variance", 1.0), s.value("center", 1.0),
                                       s.value("width", 0.1));
  if (type == "jonswap")
    return spectrum::jonswap_spectrum(s.value("alpha", 0.01), s.value("gamma", 3.3),
                                      s.value("peak_wavenumber", 1.0), s.value("g", 9.81),
                                      s.value("k_max", 0.0));
  if (type == "tabulated") {
    if (!s.contains("path")) throw ConfigError("tabulated spectrum needs \"path\"");
    return spectrum::tabulated_spectrum(s.at("path").get<std::string>());
  }
  throw ConfigError("unknown spectrum type: \"" + type + "\"");
}

struct RunContext {
  json config;       // canonical, fully-resolved configuration
  fs::path out_dir;  // <out-root>/<experiment>/<hash>
  bool dry_run = false;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

RunContext begin_run(const std::string& experiment, json config,
                     const std::string& out_root, bool dry_run) {
  config["experiment"] = experiment;
  RunContext ctx;
  ctx.config = std::move(config);
  const std::string hash = experiments::fnv1a_hash(ctx.config.dump());
  ctx.out_dir = fs::path(out_root) / experiment / hash;
  ctx.dry_run = dry_run;
  if (dry_run) {
    std::cout << "dry-run: would write to " << ctx.out_dir.string() << "\n"
              << ctx.config.dump(2) << std::endl;
  } else {
    fs::create_directories(ctx.out_dir);
  }
  return ctx;
}

void finish_run(const RunContext& ctx, const json& outputs) {
  if (ctx.dry_run) return;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
  const auto rec = experiments::make_record(ctx.config.dump(), outputs.dump(), wall);
  experiments::write_record(rec, (ctx.out_dir / "record.json").string());
  std::cout << "record: " << (ctx.out_dir / "record.json").string() << std::endl;
}

json spectrum_section(const json& cfg) {
  json s = cfg.value("spectrum", json::object());
  if (!s.is_object()) throw ConfigError("\"spectrum\" must be an object");
  return s;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const json& cfg, const std::string& out_root, bool dry_run) {
  const json s = spectrum_section(cfg);
  const json dom = cfg.value("domain", json::object());
  const double L = dom.value("L", 100.0);
  const int m = dom.value("m", 1);

  json full{{"spectrum", s}, {"domain", {{"L", L}, {"m", m}}}};
  auto ctx = begin_run("spectrum", full, out_root, dry_run);

  const auto S = build_spectrum(s);
  const auto D = spectrum::discretize(S, L, m);
  std::cout << "spectrum: " << S.label << "\n"
            << "k_max = " << S.k_max << ", modes = " << D.mode_count
            << ", total variance = " << D.total_variance() << std::endl;

  if (!ctx.dry_run) {
    std::ofstream out(ctx.out_dir / "coefficients.csv");
    out << "n,k,P\n";
    for (int j = 1; j <= D.mode_count; ++j) {
      const long n = static_cast<long>(m) * j;
      out << n << ',' << static_cast<double>(n) / L << ',' << D.P(n) << '\n';
    }
    std::ofstream acf(ctx.out_dir / "autocorrelation.csv");
    acf << "x,re,im\n";
    for (int i = 0; i <= 200; ++i) {
      const double x = -L / 2.0 + i * L / 200.0;
      const auto g = spectrum::autocorrelation(D, x);
      acf << x << ',' << g.real() << ',' << g.imag() << '\n';
    }
  }
  finish_run(ctx, json{{"mode_count", D.mode_count},
                       {"total_variance", D.total_variance()},
                       {"k_max", S.k_max}});
  return kExitOk;
}

// ----------------------------------------------------------------- realize

int cmd_realize(const json& cfg, const std::string& out_root, bool dry_run) {
  const json s = spectrum_section(cfg);
  const json dom = cfg.value("domain", json::object());
  const double L = dom.value("L", 100.0);
  const int m = dom.value("m", 1);
  const int count = cfg.value("experiment", json::object()).value("count", 1);
  const std::uint64_t seed = cfg.value("seed", 1234u);

  json full{{"spectrum", s},
            {"domain", {{"L", L}, {"m", m}}},
            {"experiment", {{"count", count}}},
            {"seed", seed}};
  auto ctx = begin_run("realize", full, out_root, dry_run);

  const auto S = build_spectrum(s);
  const auto e = seastate::make_ensemble(S, L, m, count, seed);
  if (!ctx.dry_run)
    for (int i = 0; i < count; ++i)
      seastate::write_realization_csv(
          e.realizations[static_cast<std::size_t>(i)],
          (ctx.out_dir / ("realization_" + std::to_string(i) + ".csv")).string());

  const auto acf0 = seastate::ensemble_autocorrelation(e, 0.0);
  const auto D = spectrum::discretize(S, L, m);
  std::cout << "realizations: " << count << ", modes each: "
            << e.realizations.front().modes.size() << "\n"
            << "lag-0 estimate = " << acf0.value.real() << " (target "
            << D.total_variance() << ", se " << acf0.std_error << ")" << std::endl;
  finish_run(ctx, json{{"count", count},
                       {"acf0_estimate", acf0.value.real()},
                       {"acf0_std_error", acf0.std_error},
                       {"acf0_target", D.total_variance()}});
  return kExitOk;
}

// --------------------------------------------------------------- stability

int cmd_stability(const json& cfg, const std::string& out_root, bool dry_run) {
  const json s = spectrum_section(cfg);
  const json dom = cfg.value("domain", json::object());
  const json st = cfg.value("stability", json::object());
  const double L = dom.value("L", 100.0);
  const int m = dom.value("m", 1);
  const double p = st.value("p", 1.0);
  const double q = st.value("q", 1.0);

  experiments::PipelineOptions opt;
  opt.m = m;
  opt.xi_max = st.value("xi_max", 0l);
  opt.contour.epsilon = st.value("epsilon", opt.contour.epsilon);
  opt.contour.n_line = st.value("n_line", opt.contour.n_line);
  opt.contour.n_arc = st.value("n_arc", opt.contour.n_arc);

  json full{{"spectrum", s},
            {"domain", {{"L", L}, {"m", m}}},
            {"stability",
             {{"p", p},
              {"q", q},
              {"xi_max", opt.xi_max},
              {"epsilon", opt.contour.epsilon},
              {"n_line", opt.contour.n_line},
              {"n_arc", opt.contour.n_arc}}}};
  auto ctx = begin_run("stability", full, out_root, dry_run);
  if (ctx.dry_run) return kExitOk;

  const auto S = build_spectrum(s);
  const auto res = experiments::run_stability_pipeline(S, L, p, q, opt);

  std::cout << alber::verdict_to_json(res.contour_verdict) << std::endl;
  std::cout << "oracle agrees: " << (res.methods_agree ? "yes" : "NO") << std::endl;

  json outputs{{"contour", json::parse(alber::verdict_to_json(res.contour_verdict))},
               {"oracle", json::parse(alber::verdict_to_json(res.oracle_verdict))},
               {"methods_agree", res.methods_agree}};
  json conv = json::array();
  for (const auto& row : res.convergence)
    conv.push_back({{"L", row.L}, {"xi", row.xi}, {"error", row.error}});
  outputs["convergence"] = conv;
  finish_run(ctx, outputs);

  if (res.contour_verdict.indeterminate) return kExitIndeterminate;
  return kExitOk;
}

// ---------------------------------------------------------------- converge

int cmd_converge(const json& cfg, const std::string& out_root, bool dry_run) {
  const json s = spectrum_section(cfg);
  const json st = cfg.value("stability", json::object());
  const json ex = cfg.value("experiment", json::object());
  const double p = st.value("p", 1.0);
  const double q = st.value("q", 1.0);
  const double X = ex.value("X", 0.2);
  const double om_re = ex.value("omega_re", 0.5);
  const double om_im = ex.value("omega_im", 0.0);
  std::vector<double> Ls = ex.value("L_list", std::vector<double>{50.0, 100.0, 200.0, 400.0});
  const int m = ex.value("m", 1);
  if (om_re <= 0.0) throw ConfigError("converge: omega_re must be positive");

  json full{{"spectrum", s},
            {"stability", {{"p", p}, {"q", q}}},
            {"experiment",
             {{"X", X}, {"omega_re", om_re}, {"omega_im", om_im}, {"L_list", Ls}, {"m", m}}}};
  auto ctx = begin_run("converge", full, out_root, dry_run);
  if (ctx.dry_run) return kExitOk;

  const auto S = build_spectrum(s);
  const auto rows = alber::riemann_convergence_study(S, X, {om_re, om_im},
                                                     alber::KernelParams{p, q}, Ls, m);
  std::cout << "L,xi,error\n";
  json jrows = json::array();
  std::ofstream out(ctx.out_dir / "convergence.csv");
  out << "L,xi,h_L_re,h_L_im,h_inf_re,h_inf_im,error\n";
  for (const auto& r : rows) {
    std::cout << r.L << ',' << r.xi << ',' << r.error << '\n';
    out << r.L << ',' << r.xi << ',' << r.h_L.real() << ',' << r.h_L.imag() << ','
        << r.h_inf.real() << ',' << r.h_inf.imag() << ',' << r.error << '\n';
    jrows.push_back({{"L", r.L}, {"xi", r.xi}, {"error", r.error}});
  }
  std::cout.flush();
  finish_run(ctx, json{{"rows", jrows}});
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const json& cfg, const std::string& out_root, bool dry_run) {
  const json sim = cfg.value("simulation", json::object());
  const double p = sim.value("p", 1.0);
  const double q = sim.value("q", 1.0);
  const double L = sim.value("L", 10.0);
  const double dt = sim.value("dt", 4e-3);
  const double dx = sim.value("dx", 4e-3);
  const double T = sim.value("T", 1.0);
  const int store_every = sim.value("store_every", 25);
  const std::string initial = sim.value("initial", "plane_wave");
  const double A = sim.value("A", 1.0);
  const int profile = sim.value("profile", 0);  // 0: none, 1..5: delta_j
  const std::uint64_t seed = cfg.value("seed", 1234u);

  json full{{"simulation",
             {{"p", p},
              {"q", q},
              {"L", L},
              {"dt", dt},
              {"dx", dx},
              {"T", T},
              {"store_every", store_every},
              {"initial", initial},
              {"A", A},
              {"profile", profile}}},
            {"seed", seed}};
  if (initial == "random_sea") full["spectrum"] = spectrum_section(cfg);
  auto ctx = begin_run("simulate", full, out_root, dry_run);
  if (ctx.dry_run) return kExitOk;

  nlssim::SimConfig sc;
  sc.p = p;
  sc.q = q;
  sc.L = L;
  sc.N_x = std::max(16, static_cast<int>(std::lround(L / dx)));
  if (sc.N_x % 2 != 0) ++sc.N_x;
  sc.dt = dt;
  sc.T = T;

  if (initial == "plane_wave") {
    sc.initial_field.resize(static_cast<std::size_t>(sc.N_x));
    for (int i = 0; i < sc.N_x; ++i) {
      const double x = -L / 2.0 + i * L / sc.N_x;
      const double bump = profile > 0 ? experiments::inhomogeneity_profile(profile, x) : 0.0;
      sc.initial_field[static_cast<std::size_t>(i)] = {A * (1.0 + bump), 0.0};
    }
  } else if (initial == "random_sea") {
    const auto S = build_spectrum(spectrum_section(cfg));
    const auto r = seastate::generate(S, L, 1, seed);
    sc.initial_field = seastate::sample_on_grid(r, sc.N_x);
  } else {
    throw ConfigError("simulate: unknown initial condition \"" + initial + "\"");
  }

  const auto field = nlssim::solve(sc, store_every);
  nlssim::write_invariants_csv(field, (ctx.out_dir / "invariants.csv").string());
  nlssim::write_modulus_csv(field.snapshots, field.times, L,
                            (ctx.out_dir / "modulus.csv").string());
  nlssim::write_field_binary(field, (ctx.out_dir / "field").string());

  const double m0 = field.invariant_trace.front().mass;
  const double drift = std::abs(field.invariant_trace.back().mass - m0);
  std::cout << "steps: " << field.invariant_trace.size() - 1
            << ", snapshots: " << field.snapshots.size()
            << ", mass drift: " << drift << std::endl;
  finish_run(ctx, json{{"snapshots", field.snapshots.size()},
                       {"mass_initial", m0},
                       {"mass_drift", drift},
                       {"max_abs", nlssim::max_abs(field.snapshots)}});
  return kExitOk;
}

// ------------------------------------------------------------------ table1

int cmd_table1(const json& cfg, const std::string& out_root, bool dry_run, int workers) {
  const json ex = cfg.value("experiment", json::object());
  experiments::Table1Options opt;
  opt.dt = ex.value("dt", opt.dt);
  opt.dx = ex.value("dx", opt.dx);
  opt.T = ex.value("T", opt.T);
  opt.store_every = ex.value("store_every", opt.store_every);

  json full{{"experiment",
             {{"dt", opt.dt}, {"dx", opt.dx}, {"T", opt.T}, {"store_every", opt.store_every}}}};
  auto ctx = begin_run("table1", full, out_root, dry_run);
  if (ctx.dry_run) return kExitOk;

  const auto cells = experiments::run_table1(opt, workers);
  std::cout << "j,N,L,max_delta\n";
  json jcells = json::array();
  std::ofstream out(ctx.out_dir / "table1.csv");
  out << "j,N,L,max_delta\n";
  for (const auto& c : cells) {
    std::cout << c.j << ',' << c.N << ',' << c.L << ',' << c.max_delta << '\n';
    out << c.j << ',' << c.N << ',' << c.L << ',' << c.max_delta << '\n';
    jcells.push_back({{"j", c.j}, {"N", c.N}, {"L", c.L}, {"max_delta", c.max_delta}});
  }
  std::cout.flush();
  finish_run(ctx, json{{"cells", jcells}});
  return kExitOk;
}

// --------------------------------------------------------------------- gmi

int cmd_gmi(const json& cfg, const std::string& out_root, bool dry_run) {
  const json ex = cfg.value("experiment", json::object());
  const int N = ex.value("N", 1);
  experiments::GmiOptions opt;
  opt.dt = ex.value("dt", opt.dt);
  opt.dx = ex.value("dx", opt.dx);
  opt.T = ex.value("T", opt.T);
  opt.store_every = ex.value("store_every", opt.store_every);

  json full{{"experiment",
             {{"N", N},
              {"dt", opt.dt},
              {"dx", opt.dx},
              {"T", opt.T},
              {"store_every", opt.store_every}}}};
  auto ctx = begin_run("gmi", full, out_root, dry_run);
  if (ctx.dry_run) return kExitOk;

  const auto res = experiments::run_gmi(N, opt);
  std::cout << "N = " << res.N << ", L = " << res.L
            << ", sup|delta| = " << res.sup_delta << std::endl;
  nlssim::write_modulus_csv(res.delta, res.background.times, res.L,
                            (ctx.out_dir / "delta_modulus.csv").string());
  nlssim::write_invariants_csv(res.background, (ctx.out_dir / "background_invariants.csv").string());
  finish_run(ctx, json{{"N", res.N}, {"L", res.L}, {"sup_delta", res.sup_delta}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gmi: modulation-instability analysis of stochastic sea states"};
  app.require_subcommand(1);
  app.set_version_flag("--version", experiments::kToolkitVersion);

  std::string config_path;
  std::string out_root = "runs";
  bool dry_run = false;
  int workers = 0;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out-root", out_root, "output root directory");
  app.add_flag("--dry-run", dry_run, "print the resolved config and exit");
  app.add_option("--workers", workers, "worker threads (0 = hardware)");

  auto* sp = app.add_subcommand("spectrum", "discretize a spectrum and dump coefficients");
  auto* re = app.add_subcommand("realize", "generate random-phase sea-state realizations");
  auto* st = app.add_subcommand("stability", "contour + oracle instability verdict");
  auto* cv = app.add_subcommand("converge", "periodized kernel vs infinite-line kernel");
  auto* si = app.add_subcommand("simulate", "relaxation NLS run");
  auto* t1 = app.add_subcommand("table1", "plane-wave perturbation matrix");
  auto* gm = app.add_subcommand("gmi", "three-mode background perturbation study");

  // Frequently-used overrides as flags; anything else via --config.
  double L = 0.0, q = 0.0, X = 0.0, T = -1.0, dt = 0.0, variance = -1.0;
  int N = 0, count = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  for (auto* sub : {sp, re, st, cv, si}) sub->add_option("--L", L, "domain length");
  for (auto* sub : {st, cv, si}) sub->add_option("--q", q, "nonlinearity coefficient");
  for (auto* sub : {sp, re, st, cv}) sub->add_option("--variance", variance, "spectrum variance");
  cv->add_option("--X", X, "continuum wavenumber offset");
  for (auto* sub : {si, t1, gm}) {
    sub->add_option("--T", T, "final time");
    sub->add_option("--dt", dt, "time step");
  }
  gm->add_option("--N", N, "domain length multiplier");
  re->add_option("--count", count, "ensemble size");
  for (auto* sub : {re, si})
    sub->add_option("--seed", seed, "base seed")->each([&](const std::string&) { seed_set = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    json cfg = load_config(config_path);
    // fold flag overrides into the config
    json& dom = cfg["domain"];
    if (!dom.is_object()) dom = json::object();
    if (L > 0.0) dom["L"] = L;
    json& stj = cfg["stability"];
    if (!stj.is_object()) stj = json::object();
    if (q != 0.0) stj["q"] = q;
    json& spj = cfg["spectrum"];
    if (!spj.is_object()) spj = json::object();
    if (variance >= 0.0) spj["variance"] = variance;
    json& exj = cfg["experiment"];
    if (!exj.is_object()) exj = json::object();
    if (X != 0.0) exj["X"] = X;
    if (N > 0) exj["N"] = N;
    if (count > 0) exj["count"] = count;
    if (T >= 0.0) exj["T"] = T;
    if (dt > 0.0) exj["dt"] = dt;
    json& simj = cfg["simulation"];
    if (!simj.is_object()) simj = json::object();
    if (q != 0.0) simj["q"] = q;
    if (L > 0.0) simj["L"] = L;
    if (T >= 0.0) simj["T"] = T;
    if (dt > 0.0) simj["dt"] = dt;
    if (seed_set) cfg["seed"] = seed;

    if (sp->parsed()) return cmd_spectrum(cfg, out_root, dry_run);
    if (re->parsed()) return cmd_realize(cfg, out_root, dry_run);
    if (st->parsed()) return cmd_stability(cfg, out_root, dry_run);
    if (cv->parsed()) return cmd_converge(cfg, out_root, dry_run);
    if (si->parsed()) return cmd_simulate(cfg, out_root, dry_run);
    if (t1->parsed()) return cmd_table1(cfg, out_root, dry_run, workers);
    if (gm->parsed()) return cmd_gmi(cfg, out_root, dry_run);
    std::cerr << "no subcommand given" << std::endl;
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical abort: " << e.what() << std::endl;
    return kExitNumerical;
  }
}
