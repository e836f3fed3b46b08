#include "gmi/alber.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace gmi::alber {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

void require_right_half_plane(Complex omega, const char* who) {
  if (!(omega.real() > 0.0))
    throw std::domain_error(std::string(who) +
                            ": omega must have positive real part");
}

}  // namespace

Complex h_tilde_L(long xi, Complex omega, const KernelParams& kp,
                  const spectrum::DiscreteSpectrum& D) {
  require_right_half_plane(omega, "h_tilde_L");
  if (xi == 0) return 0.0;
  const double L = D.domain_length;
  const double c0 = 2.0 * kPi * kPi * kp.p * static_cast<double>(xi) / (L * L);
  Complex acc = 0.0;
  for (int j = 1; j <= D.mode_count; ++j) {
    const long n = static_cast<long>(D.spacing_multiplier) * j;
    const double P = D.P(n);
    if (P == 0.0) continue;
    // P_n enters once as P_{k-xi} at k = n + xi and once as -P_k at k = n.
    acc += P * (1.0 / (omega + kI * (c0 * static_cast<double>(2 * n + xi))) -
                1.0 / (omega + kI * (c0 * static_cast<double>(2 * n - xi))));
  }
  return kI * kp.q * acc;
}

Complex h_tilde_L_domega(long xi, Complex omega, const KernelParams& kp,
                         const spectrum::DiscreteSpectrum& D) {
  require_right_half_plane(omega, "h_tilde_L_domega");
  if (xi == 0) return 0.0;
  const double L = D.domain_length;
  const double c0 = 2.0 * kPi * kPi * kp.p * static_cast<double>(xi) / (L * L);
  Complex acc = 0.0;
  for (int j = 1; j <= D.mode_count; ++j) {
    const long n = static_cast<long>(D.spacing_multiplier) * j;
    const double P = D.P(n);
    if (P == 0.0) continue;
    const Complex da = omega + kI * (c0 * static_cast<double>(2 * n + xi));
    const Complex db = omega + kI * (c0 * static_cast<double>(2 * n - xi));
    acc += P * (1.0 / (db * db) - 1.0 / (da * da));
  }
  return kI * kp.q * acc;
}

namespace {

// Adaptive Simpson on a complex-valued integrand.
Complex simpson_panel(const std::function<Complex(double)>& f, double a,
                      double b, Complex fa, Complex fm, Complex fb, Complex whole,
                      double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const Complex flm = f(lm), frm = f(rm);
  const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const Complex sum = left + right;
  if (depth <= 0 || std::abs(sum - whole) < 15.0 * tol)
    return sum + (sum - whole) / 15.0;
  return simpson_panel(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_panel(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

Complex integrate(const std::function<Complex(double)>& f, double a, double b,
                  double abs_tol, int initial_panels = 64) {
  if (!(b > a)) return 0.0;
  Complex total = 0.0;
  const double h = (b - a) / initial_panels;
  const double panel_tol = abs_tol / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    const double x0 = a + i * h, x1 = a + (i + 1) * h, xm = 0.5 * (x0 + x1);
    const Complex f0 = f(x0), fm = f(xm), f1 = f(x1);
    const Complex whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    total += simpson_panel(f, x0, x1, f0, fm, f1, whole, panel_tol, 40);
  }
  return total;
}

}  // namespace

Complex h_infinity(double X, Complex omega, const KernelParams& kp,
                   const spectrum::PowerSpectrum& S, double abs_tol) {
  require_right_half_plane(omega, "h_infinity");
  if (X == 0.0 || S.k_max <= 0.0) return 0.0;
  const double c = 4.0 * kPi * kPi * kp.p * X;
  // Substitute u = k -+ X/2 in the two terms; both then run over supp S.
  auto term_plus = [&](double u) -> Complex {
    return S(u) / (omega + kI * (c * (u + X / 2.0)));
  };
  auto term_minus = [&](double u) -> Complex {
    return S(u) / (omega + kI * (c * (u - X / 2.0)));
  };
  const Complex ip = integrate(term_plus, 0.0, S.k_max, abs_tol / 2.0);
  const Complex im = integrate(term_minus, 0.0, S.k_max, abs_tol / 2.0);
  return kI * kp.q * (ip - im);
}

std::vector<ConvergenceRow> riemann_convergence_study(
    const spectrum::PowerSpectrum& S, double X, Complex omega,
    const KernelParams& kp, const std::vector<double>& L_list, int m) {
  require_right_half_plane(omega, "riemann_convergence_study");
  const Complex hi = h_infinity(X, omega, kp, S);
  std::vector<ConvergenceRow> rows;
  rows.reserve(L_list.size());
  for (double L : L_list) {
    if (L <= 0.0) throw std::invalid_argument("riemann_convergence_study: L must be positive");
    const long xi = std::llround(X * L);
    const auto D = spectrum::discretize(S, L, m);
    const Complex hl = h_tilde_L(xi, omega, kp, D);
    rows.push_back(ConvergenceRow{L, xi, hl, hi, std::abs(hl - hi)});
  }
  return rows;
}

namespace {

struct Contour {
  double epsilon;
  double theta0;  // arccos(epsilon^2)
  double half_height;

  // Counterclockwise boundary of D: line top -> bottom at t in [0, 1/2],
  // then the arc from -theta0 back up to +theta0.
  Complex at(double t) const {
    if (t <= 0.5) {
      const double s = half_height * (1.0 - 4.0 * t);
      return Complex{epsilon, s};
    }
    const double theta = -theta0 + (t - 0.5) * 4.0 * theta0;
    return (1.0 / epsilon) * Complex{std::cos(theta), std::sin(theta)};
  }
};

Contour make_contour(double epsilon) {
  Contour c;
  c.epsilon = epsilon;
  c.theta0 = std::acos(epsilon * epsilon);
  c.half_height = std::sqrt(1.0 / (epsilon * epsilon) - epsilon * epsilon);
  return c;
}

struct WindingResult {
  int winding = 0;
  bool resolved = true;
  double min_dist = std::numeric_limits<double>::infinity();
  Complex argmin_omega;
};

// Sum of phase increments of h - 1 along the contour; segments with a phase
// jump above pi/2 are bisected in the contour parameter.
WindingResult winding_number(long xi, const KernelParams& kp,
                             const spectrum::DiscreteSpectrum& D,
                             const Contour& contour, int n_line, int n_arc) {
  WindingResult res;
  auto g = [&](double t) { return h_tilde_L(xi, contour.at(t), kp, D) - 1.0; };

  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(n_line + n_arc + 1));
  for (int i = 0; i < n_line; ++i) ts.push_back(0.5 * i / n_line);
  for (int i = 0; i <= n_arc; ++i) ts.push_back(0.5 + 0.5 * i / n_arc);

  double total = 0.0;
  Complex g_prev = g(ts.front());
  auto note = [&](double t, Complex gv) {
    const double d = std::abs(gv);
    if (d < res.min_dist) {
      res.min_dist = d;
      res.argmin_omega = contour.at(t);
    }
  };
  note(ts.front(), g_prev);

  // Explicit stack of (t0, g0, t1, g1) segments pending phase accumulation.
  struct Seg { double t0, t1; Complex g0, g1; int depth; };
  for (std::size_t i = 1; i < ts.size(); ++i) {
    std::vector<Seg> stack{Seg{ts[i - 1], ts[i], g_prev, g(ts[i]), 0}};
    g_prev = stack.back().g1;
    note(ts[i], g_prev);
    while (!stack.empty()) {
      Seg s = stack.back();
      stack.pop_back();
      const double dphi = std::arg(s.g1 / s.g0);
      if (std::abs(dphi) <= kPi / 2.0) {
        total += dphi;
        continue;
      }
      if (s.depth >= 48) {
        res.resolved = false;
        continue;
      }
      const double tm = 0.5 * (s.t0 + s.t1);
      const Complex gm = g(tm);
      note(tm, gm);
      stack.push_back(Seg{tm, s.t1, gm, s.g1, s.depth + 1});
      stack.push_back(Seg{s.t0, tm, s.g0, gm, s.depth + 1});
    }
  }
  const double w = total / (2.0 * kPi);
  res.winding = static_cast<int>(std::lround(w));
  if (std::abs(w - res.winding) > 0.25) res.resolved = false;
  return res;
}

// Damped Newton on h(xi, omega) - 1 = 0 at fixed xi.
bool newton_refine(long xi, const KernelParams& kp,
                   const spectrum::DiscreteSpectrum& D, Complex& omega,
                   double refine_tol) {
  const double re_floor = 1e-14;
  Complex w = omega;
  double best = std::abs(h_tilde_L(xi, w, kp, D) - 1.0);
  for (int it = 0; it < 200 && best > refine_tol; ++it) {
    const Complex g = h_tilde_L(xi, w, kp, D) - 1.0;
    const Complex dg = h_tilde_L_domega(xi, w, kp, D);
    if (dg == Complex{0.0, 0.0}) return false;
    Complex step = -g / dg;
    bool advanced = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      Complex trial = w + step;
      if (trial.real() < re_floor) trial.real(re_floor);
      const double val = std::abs(h_tilde_L(xi, trial, kp, D) - 1.0);
      if (val < best) {
        w = trial;
        best = val;
        advanced = true;
        break;
      }
      step *= 0.5;
    }
    if (!advanced) break;
  }
  omega = w;
  return best <= refine_tol;
}

// Seed the refinement by a coarse interior minimum of |h - 1|; the zero is
// somewhere inside D, not necessarily near the boundary argmin.
Complex interior_seed(long xi, const KernelParams& kp,
                      const spectrum::DiscreteSpectrum& D, double epsilon) {
  const double L = D.domain_length;
  const double c0 = 2.0 * kPi * kPi * kp.p * static_cast<double>(xi) / (L * L);
  double c_min = 0.0, c_max = 0.0;
  for (int j = 1; j <= D.mode_count; ++j) {
    const long n = static_cast<long>(D.spacing_multiplier) * j;
    if (D.P(n) == 0.0) continue;
    for (long k2 : {2 * n + xi, 2 * n - xi}) {
      const double c = c0 * static_cast<double>(k2);
      c_min = std::min(c_min, c);
      c_max = std::max(c_max, c);
    }
  }
  const double bound = 2.0 * kp.q * D.total_variance();  // |h|<=bound/Re(omega)
  const double re_hi = std::max(2.0 * bound, 4.0 * epsilon);
  const double im_lo = -c_max - bound, im_hi = -c_min + bound;
  const int n_re = 48, n_im = 96;
  double best = std::numeric_limits<double>::infinity();
  Complex seed{epsilon, 0.0};
  for (int a = 0; a < n_re; ++a) {
    const double re = epsilon / 4.0 + (re_hi - epsilon / 4.0) * a / (n_re - 1);
    for (int b = 0; b < n_im; ++b) {
      const double im = im_lo + (im_hi - im_lo) * b / (n_im - 1);
      const double d = std::abs(h_tilde_L(xi, Complex{re, im}, kp, D) - 1.0);
      if (d < best) {
        best = d;
        seed = Complex{re, im};
      }
    }
  }
  return seed;
}

}  // namespace

std::vector<Complex> contour_image(long xi, const KernelParams& kp,
                                   const spectrum::DiscreteSpectrum& D,
                                   const ContourSpec& spec) {
  const Contour c = make_contour(spec.epsilon);
  std::vector<Complex> img;
  const int n = spec.n_line + spec.n_arc;
  img.reserve(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i)
    img.push_back(h_tilde_L(xi, c.at(static_cast<double>(i) / n), kp, D));
  return img;
}

StabilityVerdict detect_instability_contour(const KernelParams& kp,
                                            const spectrum::DiscreteSpectrum& D,
                                            long xi_min, long xi_max,
                                            ContourSpec spec, double refine_tol) {
  if (xi_min > xi_max)
    throw std::invalid_argument("detect_instability_contour: empty xi range");
  if (spec.n_line < 16 || spec.n_arc < 16)
    throw std::invalid_argument("detect_instability_contour: need >= 16 samples per segment");
  if (!(spec.epsilon > 0.0 && spec.epsilon < 1.0))
    throw std::invalid_argument("detect_instability_contour: epsilon must be in (0,1)");

  StabilityVerdict verdict;
  verdict.method = Method::argument_principle;

  for (long xi = xi_min; xi <= xi_max; ++xi) {
    if (xi == 0) {
      verdict.winding_numbers[0] = 0;
      continue;
    }
    // Shrink epsilon until |h| < 1/2 everywhere on the arc.
    double eps = spec.epsilon;
    Contour contour = make_contour(eps);
    for (int tries = 0; tries < 12; ++tries) {
      double arc_max = 0.0;
      for (int i = 0; i <= spec.n_arc; ++i) {
        const double t = 0.5 + 0.5 * i / spec.n_arc;
        arc_max = std::max(arc_max, std::abs(h_tilde_L(xi, contour.at(t), kp, D)));
      }
      if (arc_max < 0.5) break;
      eps *= 0.5;
      contour = make_contour(eps);
    }

    const WindingResult w = winding_number(xi, kp, D, contour, spec.n_line, spec.n_arc);
    verdict.winding_numbers[xi] = w.winding;
    if (!w.resolved || w.min_dist < 1e-6) {
      verdict.indeterminate = true;
      continue;
    }
    if (w.winding >= 1) {
      verdict.unstable = true;
      Complex omega = interior_seed(xi, kp, D, eps);
      if (newton_refine(xi, kp, D, omega, refine_tol) && omega.real() > 0.0) {
        verdict.witnesses.push_back(
            Witness{xi, omega, std::abs(h_tilde_L(xi, omega, kp, D) - 1.0)});
      } else {
        // Winding says a zero exists but the local solve did not land.
        verdict.indeterminate = true;
      }
    }
  }
  return verdict;
}

StabilityVerdict detect_instability_gridscan(const KernelParams& kp,
                                             const spectrum::DiscreteSpectrum& D,
                                             long xi_min, long xi_max,
                                             double re_min, double re_max,
                                             double im_min, double im_max,
                                             int n_re, int n_im,
                                             double refine_tol) {
  if (xi_min > xi_max)
    throw std::invalid_argument("detect_instability_gridscan: empty xi range");
  if (!(re_min > 0.0) || !(re_max > re_min) || !(im_max > im_min))
    throw std::invalid_argument("detect_instability_gridscan: bad omega rectangle");
  if (n_re < 2 || n_im < 2)
    throw std::invalid_argument("detect_instability_gridscan: grid resolution too small");

  StabilityVerdict verdict;
  verdict.method = Method::grid_scan;
  for (long xi = xi_min; xi <= xi_max; ++xi) {
    if (xi == 0) continue;
    double best = std::numeric_limits<double>::infinity();
    Complex seed;
    for (int a = 0; a < n_re; ++a) {
      const double re = re_min + (re_max - re_min) * a / (n_re - 1);
      for (int b = 0; b < n_im; ++b) {
        const double im = im_min + (im_max - im_min) * b / (n_im - 1);
        const double d = std::abs(h_tilde_L(xi, Complex{re, im}, kp, D) - 1.0);
        if (d < best) {
          best = d;
          seed = Complex{re, im};
        }
      }
    }
    if (best < 0.1) {
      Complex omega = seed;
      const bool ok = newton_refine(xi, kp, D, omega, refine_tol);
      const double res = std::abs(h_tilde_L(xi, omega, kp, D) - 1.0);
      verdict.witnesses.push_back(Witness{xi, omega, res});
      if (ok && omega.real() > 1e-12) verdict.unstable = true;
    }
  }
  return verdict;
}

StabilityVerdict eigenvalue_oracle(const KernelParams& kp,
                                   const spectrum::DiscreteSpectrum& D,
                                   long K_trunc, long xi_min, long xi_max) {
  const long support_top = static_cast<long>(D.spacing_multiplier) * D.mode_count;
  if (K_trunc < 2 * support_top)
    throw std::invalid_argument(
        "eigenvalue_oracle: K_trunc below support coverage (need >= 2*m*M)");
  if (xi_min == 0 && xi_max == 0) {
    xi_min = -K_trunc;
    xi_max = K_trunc;
  }

  StabilityVerdict verdict;
  verdict.method = Method::eigenvalue_oracle;
  const double L = D.domain_length;

  for (long xi = xi_min; xi <= xi_max; ++xi) {
    if (xi == 0) continue;
    // Coupled modes of the xi-block: k where P_k or P_{k-xi} is nonzero.
    std::set<long> kset;
    for (int j = 1; j <= D.mode_count; ++j) {
      const long n = static_cast<long>(D.spacing_multiplier) * j;
      if (D.P(n) == 0.0) continue;
      kset.insert(n);
      kset.insert(n + xi);
    }
    std::vector<long> ks;
    for (long k : kset)
      if (std::llabs(k) <= K_trunc && std::llabs(xi - k) <= K_trunc &&
          D.P(k - xi) != D.P(k))
        ks.push_back(k);
    if (ks.empty()) continue;

    const auto n = static_cast<Eigen::Index>(ks.size());
    Eigen::MatrixXcd C(n, n);
    double scale = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
      const long k = ks[static_cast<std::size_t>(a)];
      const double c = 2.0 * kPi * kPi * kp.p * static_cast<double>(xi) *
                       static_cast<double>(2 * k - xi) / (L * L);
      const Complex v = kI * kp.q * (D.P(k - xi) - D.P(k));
      for (Eigen::Index b = 0; b < n; ++b) C(a, b) = v;
      C(a, a) += Complex{0.0, -c};
      scale = std::max({scale, std::abs(c), std::abs(v)});
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("eigenvalue_oracle: eigensolver failed");
    Eigen::Index imax = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (es.eigenvalues()(i).real() > es.eigenvalues()(imax).real()) imax = i;
    const Complex lam = es.eigenvalues()(imax);
    if (lam.real() > 1e-8 * scale) {
      verdict.unstable = true;
      const Eigen::VectorXcd x = es.eigenvectors().col(imax);
      const double res = (C * x - lam * x).norm() / x.norm();
      verdict.witnesses.push_back(Witness{xi, lam, res});
    }
  }
  return verdict;
}

std::vector<Complex> reconstruct_r(long k, long l,
                                   const std::vector<Complex>& f_history,
                                   double dt, const KernelParams& kp,
                                   const spectrum::DiscreteSpectrum& D,
                                   Complex r0) {
  if (dt <= 0.0) throw std::invalid_argument("reconstruct_r: dt must be positive");
  const double L = D.domain_length;
  const double theta = 2.0 * kPi * kPi * kp.p *
                       static_cast<double>(k + l) * static_cast<double>(k - l) /
                       (L * L);
  const Complex coupling = kI * kp.q * (D.P(-l) - D.P(k));
  const Complex decay = std::polar(1.0, -theta * dt);

  std::vector<Complex> r;
  r.reserve(f_history.size());
  Complex duhamel = 0.0;  // int_0^{t_n} e^{-i theta (t_n - tau)} f(tau) dtau
  Complex free_phase = 1.0;
  for (std::size_t n = 0; n < f_history.size(); ++n) {
    if (n > 0) {
      duhamel = decay * duhamel + 0.5 * dt * (decay * f_history[n - 1] + f_history[n]);
      free_phase *= decay;
    }
    r.push_back(free_phase * r0 + coupling * duhamel);
  }
  return r;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::argument_principle: return "argument_principle";
    case Method::grid_scan: return "grid_scan";
    case Method::eigenvalue_oracle: return "eigenvalue_oracle";
  }
  return "unknown";
}

std::string verdict_to_json(const StabilityVerdict& v) {
  nlohmann::json j;
  j["method"] = method_name(v.method);
  j["unstable"] = v.unstable;
  j["indeterminate"] = v.indeterminate;
  j["witnesses"] = nlohmann::json::array();
  for (const Witness& w : v.witnesses)
    j["witnesses"].push_back({{"xi", w.xi},
                              {"omega_re", w.omega.real()},
                              {"omega_im", w.omega.imag()},
                              {"residual", w.residual}});
  nlohmann::json windings = nlohmann::json::object();
  for (const auto& [xi, n] : v.winding_numbers) windings[std::to_string(xi)] = n;
  j["winding_numbers"] = windings;
  return j.dump(2);
}

}  // namespace gmi::alber
