#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "gmi/spectrum.hpp"

namespace gmi::alber {

using Complex = std::complex<double>;

// Dispersion/nonlinearity coefficients in the convention of the periodized
// moment analysis, i.e. the NLS written as i u_t + (p/2) u_xx + (q/2)|u|^2 u.
// Callers working in the i u_t + p u_xx + q |u|^2 u convention must double
// both coefficients at the boundary.
struct KernelParams {
  double p = 1.0;
  double q = 1.0;
};

// D-shaped contour in the right half-plane: the straight segment
// Re(omega) = epsilon closed by an arc of radius 1/epsilon.
struct ContourSpec {
  double epsilon = 0.02;
  int n_line = 801;
  int n_arc = 257;
};

enum class Method { argument_principle, grid_scan, eigenvalue_oracle };

struct Witness {
  long xi = 0;
  Complex omega;    // Re(omega) > 0: growth rate and oscillation frequency
  double residual;  // |h - 1| at the witness (eigen residual for the oracle)
};

struct StabilityVerdict {
  bool unstable = false;
  bool indeterminate = false;  // marginal: the image curve grazes the point 1
  std::vector<Witness> witnesses;
  std::map<long, int> winding_numbers;
  Method method = Method::argument_principle;
};

// Periodized stability kernel
//   h_L(xi, omega) = i q sum_k (P_{k-xi} - P_k) / (omega + i p 2 pi^2 xi (2k - xi) / L^2).
// The sum is truncated exactly to the compact support of the coefficients.
Complex h_tilde_L(long xi, Complex omega, const KernelParams& kp,
                  const spectrum::DiscreteSpectrum& D);

// d/d(omega) of h_tilde_L, used by the Newton refinement.
Complex h_tilde_L_domega(long xi, Complex omega, const KernelParams& kp,
                         const spectrum::DiscreteSpectrum& D);

// Infinite-line kernel
//   h_inf(X, omega) = i q int [S(k - X/2) - S(k + X/2)] / (omega + 4 pi^2 i p k X) dk
// by adaptive quadrature over the compact support, absolute tolerance abs_tol.
Complex h_infinity(double X, Complex omega, const KernelParams& kp,
                   const spectrum::PowerSpectrum& S, double abs_tol = 1e-10);

struct ConvergenceRow {
  double L;
  long xi;
  Complex h_L;
  Complex h_inf;
  double error;  // |h_L - h_inf|
};

// |h_L(round(X*L), omega) - h_inf(X, omega)| along a ladder of lengths.
std::vector<ConvergenceRow> riemann_convergence_study(
    const spectrum::PowerSpectrum& S, double X, Complex omega,
    const KernelParams& kp, const std::vector<double>& L_list, int m = 1);

// Argument-principle detector: for each xi in [xi_min, xi_max] computes the
// winding number of h(xi, Gamma) around the point 1; winding >= 1 means a
// solution of h = 1 inside D, i.e. instability. Witnesses are refined by
// damped Newton on h - 1 at fixed xi down to refine_tol.
StabilityVerdict detect_instability_contour(const KernelParams& kp,
                                            const spectrum::DiscreteSpectrum& D,
                                            long xi_min, long xi_max,
                                            ContourSpec contour = {},
                                            double refine_tol = 1e-10);

// Advisory grid scan: candidates are grid minima of |h - 1| below 0.1 in the
// rectangle [re_min, re_max] x [im_min, im_max], then Newton-refined.
StabilityVerdict detect_instability_gridscan(const KernelParams& kp,
                                             const spectrum::DiscreteSpectrum& D,
                                             long xi_min, long xi_max,
                                             double re_min, double re_max,
                                             double im_min, double im_max,
                                             int n_re, int n_im,
                                             double refine_tol = 1e-8);

// Truncated-operator oracle. The linearized moment system
//   dr_{k,l}/dt = -i (2 pi^2 p / L^2)(k^2 - l^2) r_{k,l} + i q (P_{-l} - P_k) sum_K r_{K,k+l-K}
// preserves xi = k + l, so the operator block-diagonalizes over xi; modes
// with zero coupling coefficient contribute purely imaginary eigenvalues and
// are dropped from each block (exact block-triangular reduction). Unstable
// iff some block eigenvalue has real part above 1e-8 times the entry scale.
StabilityVerdict eigenvalue_oracle(const KernelParams& kp,
                                   const spectrum::DiscreteSpectrum& D,
                                   long K_trunc, long xi_min = 0, long xi_max = 0);

// Duhamel reconstruction of a single coefficient r_{k,l}(t) from the driver
// history f(k+l, t), sampled at uniform step dt, by trapezoidal convolution.
std::vector<Complex> reconstruct_r(long k, long l,
                                   const std::vector<Complex>& f_history,
                                   double dt, const KernelParams& kp,
                                   const spectrum::DiscreteSpectrum& D,
                                   Complex r0);

// Image-curve samples h(xi, Gamma) for external Nyquist-style plots.
std::vector<Complex> contour_image(long xi, const KernelParams& kp,
                                   const spectrum::DiscreteSpectrum& D,
                                   const ContourSpec& contour);

std::string method_name(Method m);
std::string verdict_to_json(const StabilityVerdict& v);

}  // namespace gmi::alber
