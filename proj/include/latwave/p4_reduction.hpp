#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "latwave/amplitude.hpp"
#include "latwave/oscillatory.hpp"
#include "latwave/polynomial.hpp"

namespace latwave {

// The corank-4 core in rotated coordinates:
//   f(w) = 4(w1+w3)^3 - w1^3 - w3^3 - 3 w1 w2^2 - 3 w3 w4^2,
// reached from (sum xi)^3 - sum xi^3 by xi1+xi2 = 2w1, xi1-xi2 = 2w2,
// xi3+xi4 = 2w3, xi3-xi4 = 2w4, so that P4~(xi(w)) = 2 f(w) and dxi = 4 dw.
inline PolynomialPhase p4_rotated_phase() {
  PolynomialPhase f(4);
  f.add_term({3, 0, 0, 0}, Rational(3));
  f.add_term({2, 0, 1, 0}, Rational(12));
  f.add_term({1, 0, 2, 0}, Rational(12));
  f.add_term({0, 0, 3, 0}, Rational(3));
  f.add_term({1, 2, 0, 0}, Rational(-3));
  f.add_term({0, 0, 1, 2}, Rational(-3));
  return f;
}

struct P4Sample {
  double lambda = 0.0;
  std::complex<double> value;  // estimate of int e^{i lambda P4~} psi dxi
  double err_quad = 0.0;       // halved-resolution difference
  double err_method = 0.0;     // stationary-phase collapse term
  double err_total() const { return err_quad + err_method; }
};

struct P4Params {
  double r0 = 0.25;              // product-bump radius in the w coordinates
  double r_max = 2000.0;         // truncation of the hyperbolic sector
  double rel_tol = 1e-4;         // adaptive tolerance, relative to the scale
  double method_constant = 3.0;  // calibrated against the direct 4-d oracle
};

namespace detail {

// int_0^X e^{i A s^3} g(s) ds by Gauss-Legendre panels holding `cycles_per_panel`
// phase cycles each; GL-7 keeps a resolved cycle at machine accuracy.
template <class G>
std::complex<double> cubic_phase_integral(double A, double X, G&& g,
                                          double cycles_per_panel = 1.0) {
  static constexpr std::array<double, 7> gl_x = {
      -0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
      0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
  static constexpr std::array<double, 7> gl_w = {
      0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694,
      0.3818300505051189, 0.2797053914892767, 0.1294849661688697};

  std::complex<double> acc{0.0, 0.0};
  auto panel = [&](double lo, double hi) {
    std::complex<double> s{0.0, 0.0};
    double mid = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
    for (int i = 0; i < 7; ++i) {
      double x = mid + rad * gl_x[static_cast<size_t>(i)];
      double ph = A * x * x * x;
      s += gl_w[static_cast<size_t>(i)] * g(x) * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return s * rad;
  };

  double a = std::fabs(A);
  double step = 2.0 * kPi * cycles_per_panel;
  if (a * X * X * X < step) {
    for (int k = 0; k < 4; ++k) acc += panel(X * k / 4.0, X * (k + 1) / 4.0);
    return acc;
  }
  double prev = 0.0;
  for (long k = 1;; ++k) {
    double s = std::cbrt(step * static_cast<double>(k) / a);
    if (s >= X) {
      acc += panel(prev, X);
      break;
    }
    acc += panel(prev, s);
    prev = s;
  }
  return acc;
}

// adaptive Simpson for smooth complex integrands
inline std::complex<double> simpson_adaptive(const std::function<std::complex<double>(double)>& f,
                                             double a, double b, double tol, int depth,
                                             std::complex<double> fa, std::complex<double> fm,
                                             std::complex<double> fb) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  std::complex<double> flm = f(lm), frm = f(rm);
  std::complex<double> s1 = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  std::complex<double> s2 = (b - a) / 12.0 * (fa + 4.0 * flm + 2.0 * fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(s2 - s1) < 15.0 * tol) return s2 + (s2 - s1) / 15.0;
  return simpson_adaptive(f, a, m, tol / 2, depth - 1, fa, flm, fm) +
         simpson_adaptive(f, m, b, tol / 2, depth - 1, fm, frm, fb);
}

inline std::complex<double> integrate_smooth(const std::function<std::complex<double>(double)>& f,
                                             double a, double b, double tol) {
  std::complex<double> fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson_adaptive(f, a, b, tol, 36, fa, fm, fb);
}

// Both-positive quadrant in (s1, theta) coordinates:
//   Q++ = 2 int_0^{pi/2} int_0^{2 r0} e^{3 i mu s^3 (1 + sin^2(th)/4)} B ds dth,
// with B = b(w+/r0) b(w-/r0), w+- = s (1 +- cos th)/2. The s-endpoint is
// C-infinity flat, so the only asymptotic contribution is the s = 0 corner.
inline std::complex<double> q_plus_plus(double mu, const P4Params& par, double refine) {
  const double r0 = par.r0;
  const int n_theta = static_cast<int>(64 * refine);
  std::complex<double> acc{0.0, 0.0};
  for (int k = 0; k < n_theta; ++k) {
    double th = (k + 0.5) * (kPi / 2.0) / n_theta;
    double ct = std::cos(th), st = std::sin(th);
    double mu_t = 3.0 * mu * (1.0 + 0.25 * st * st);
    auto B = [&](double s) {
      return plateau_profile(s * (1.0 + ct) / (2.0 * r0)) *
             plateau_profile(s * (1.0 - ct) / (2.0 * r0));
    };
    acc += cubic_phase_integral(mu_t, 2.0 * r0, B, 1.0 / refine);
  }
  return 2.0 * acc * (kPi / 2.0) / static_cast<double>(n_theta);
}

// Mixed-sign quadrant in hyperbolic coordinates:
//   Q+- = 2 int_R dr/sqrt(r^2+4) int_0^{umax} e^{3 i mu u^3 r(r^2-1)} B du,
// B = b(u R+/r0) b(u R-/r0), R+- = (sqrt(r^2+4) +- r)/2. The r-integrand is
// smooth and non-oscillatory (the u-endpoint is flat), with narrow
// transition zones near r = 0, +-1 that the adaptive rule picks up.
inline std::complex<double> q_plus_minus(double mu, const P4Params& par, double refine) {
  const double r0 = par.r0;
  auto inner = [&](double r) -> std::complex<double> {
    double root = std::sqrt(r * r + 4.0);
    double Rp = 0.5 * (root + r), Rm = 0.5 * (root - r);
    double umax = r0 / std::max(Rp, Rm);
    double c = 3.0 * mu * r * (r * r - 1.0);
    auto B = [&](double u) {
      return plateau_profile(u * Rp / r0) * plateau_profile(u * Rm / r0);
    };
    return cubic_phase_integral(c, umax, B, 1.0 / refine) / root;
  };

  // absolute tolerance against the O(mu^{-1/3}) head of the integral
  double scale = std::pow(3.0 * mu, -1.0 / 3.0);
  double tol = (par.rel_tol / (refine * refine)) * scale;
  static constexpr std::array<double, 9> cuts = {-3.0, -1.5, -1.0, -0.5, 0.0,
                                                 0.5,  1.0,  1.5,  3.0};
  std::complex<double> acc{0.0, 0.0};
  std::function<std::complex<double>(double)> f = inner;
  acc += integrate_smooth(f, -par.r_max, cuts.front(), tol);
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    acc += integrate_smooth(f, cuts[i], cuts[i + 1], tol);
  acc += integrate_smooth(f, cuts.back(), par.r_max, tol);
  return 2.0 * acc;
}

// K(mu) = int_{R^4} e^{i mu f(w)} prod_j b(w_j/r0) dw after collapsing the
// two quadratic directions: (pi/3mu) [2 Im Q++ + 2 Re Q+-], the Fresnel
// factors e^{-i(sgn w1 + sgn w3) pi/4} folded into the Im/Re parts. Exact up
// to O(mu^{-3/2} log^2 mu) from the |w| ~ 1/mu strips.
inline std::complex<double> reduced_K(double mu, const P4Params& par, double refine) {
  std::complex<double> qpp = q_plus_plus(mu, par, refine);
  std::complex<double> qpm = q_plus_minus(mu, par, refine);
  double val = (kPi / (3.0 * mu)) * (2.0 * qpp.imag() + 2.0 * qpm.real());
  return {val, 0.0};
}

}  // namespace detail

// Large-lambda evaluation of int_{R^4} e^{i lambda P4~(xi)} psi(xi) dxi with
// psi the product bump of radius r0 in the rotated coordinates.
inline P4Sample reduce_P4_appendix(double lambda, const P4Params& par = {}) {
  if (lambda < 10.0) throw std::invalid_argument("reduction needs lambda >= 10");
  double mu = 2.0 * lambda;
  P4Sample out;
  out.lambda = lambda;
  std::complex<double> k1 = detail::reduced_K(mu, par, 1.0);
  std::complex<double> k0 = detail::reduced_K(mu, par, 0.5);  // coarser pass
  out.value = 4.0 * k1;
  out.err_quad = 4.0 * std::abs(k1 - k0);
  out.err_method =
      par.method_constant * std::pow(mu, -1.5) * std::pow(std::log(mu + 2.0), 2.0);
  return out;
}

// Direct 4-d oracle for the same integral (identical amplitude), used by the
// overlap validation. Affordable through lambda ~ 60 at r0 = 1/4.
inline JSample p4_direct(double lambda, const P4Params& par = {}, OscGrid grid = {}) {
  PolynomialPhase f = p4_rotated_phase();
  AmplitudeSpec amp = AmplitudeSpec::product(4, par.r0);
  JSample js = eval_J(2.0 * lambda, f, amp, grid);
  js.value *= 4.0;
  js.err_est *= 4.0;
  return js;
}

}  // namespace latwave
