#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace latwave {

inline constexpr double kPi = std::numbers::pi;

// Reduces a coordinate into [-pi, pi] with round-half-to-even on the winding
// number, so the reduction is deterministic across platforms.
inline double reduce_to_torus(double x) {
  double k = std::nearbyint(x / (2.0 * kPi));  // FE_TONEAREST = half-to-even
  double r = x - 2.0 * kPi * k;
  if (r > kPi) r -= 2.0 * kPi;
  if (r < -kPi) r += 2.0 * kPi;
  return r;
}

inline std::vector<double> reduce_to_torus(std::vector<double> xi) {
  for (double& x : xi) x = reduce_to_torus(x);
  return xi;
}

// Lattice dispersion relation w(xi) = (sum_j (2 - 2 cos xi_j) + m^2)^(1/2).
// m = 0 is the wave equation, m > 0 the Klein-Gordon variant.
struct DispersionRelation {
  int d = 5;
  double mass = 0.0;

  DispersionRelation() = default;
  DispersionRelation(int dim, double m) : d(dim), mass(m) {
    if (dim < 1 || dim > 6) throw std::invalid_argument("dimension out of range");
    if (m < 0) throw std::invalid_argument("mass must be >= 0");
  }

  void check_arity(const std::vector<double>& xi) const {
    if (static_cast<int>(xi.size()) != d) throw std::invalid_argument("xi arity");
  }

  // omega^2; terms summed in sorted order so the value is bitwise invariant
  // under signed permutations of xi.
  double omega_sq(const std::vector<double>& xi) const {
    check_arity(xi);
    std::array<double, 6> terms{};
    for (int j = 0; j < d; ++j)
      terms[static_cast<size_t>(j)] = 2.0 - 2.0 * std::cos(std::fabs(xi[static_cast<size_t>(j)]));
    std::sort(terms.begin(), terms.begin() + d);
    double s = mass * mass;
    for (int j = 0; j < d; ++j) s += terms[static_cast<size_t>(j)];
    return s;
  }

  double omega(const std::vector<double>& xi) const { return std::sqrt(omega_sq(xi)); }

  bool at_singular_point(const std::vector<double>& xi) const {
    if (mass > 0) return false;
    for (double x : xi)
      if (x != 0.0) return false;
    return true;
  }

  std::vector<double> grad_omega(const std::vector<double>& xi) const {
    check_arity(xi);
    if (at_singular_point(xi)) throw std::domain_error("grad omega singular at xi = 0, m = 0");
    double w = omega(xi);
    std::vector<double> g(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) g[static_cast<size_t>(j)] = std::sin(xi[static_cast<size_t>(j)]) / w;
    return g;
  }

  // Hess w = diag(cos xi_j)/w - s s^T / w^3 with s_j = sin xi_j.
  Eigen::MatrixXd hess_omega(const std::vector<double>& xi) const {
    check_arity(xi);
    if (at_singular_point(xi)) throw std::domain_error("hess omega singular at xi = 0, m = 0");
    double w = omega(xi);
    Eigen::MatrixXd h(d, d);
    for (int i = 0; i < d; ++i) {
      double si = std::sin(xi[static_cast<size_t>(i)]);
      for (int j = 0; j < d; ++j) {
        double sj = std::sin(xi[static_cast<size_t>(j)]);
        h(i, j) = -si * sj / (w * w * w);
        if (i == j) h(i, j) += std::cos(xi[static_cast<size_t>(i)]) / w;
      }
    }
    return h;
  }

  // phi(v, xi) = v.xi - w(xi); Hess_xi phi = -Hess w independently of v.
  double phi(const std::vector<double>& v, const std::vector<double>& xi) const {
    check_arity(xi);
    if (v.size() != xi.size()) throw std::invalid_argument("v arity");
    double s = 0.0;
    for (size_t j = 0; j < xi.size(); ++j) s += v[j] * xi[j];
    return s - omega(xi);
  }

  Eigen::VectorXd hess_omega_eigenvalues(const std::vector<double>& xi) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess_omega(xi), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  // Number of eigenvalues of Hess w with |lambda| <= tol * max(1, spectral radius).
  int hess_phi_corank(const std::vector<double>& xi, double tol = 1e-8) const {
    if (tol <= 0) throw std::invalid_argument("tol must be > 0");
    Eigen::VectorXd ev = hess_omega_eigenvalues(xi);
    double radius = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    double cut = tol * std::max(1.0, radius);
    int k = 0;
    for (int i = 0; i < ev.size(); ++i)
      if (std::abs(ev(i)) <= cut) ++k;
    return k;
  }
};

struct PhasePoint {
  std::vector<double> v;
  std::vector<double> xi;  // stored reduced into [-pi, pi]^d

  PhasePoint(std::vector<double> vel, std::vector<double> point)
      : v(std::move(vel)), xi(reduce_to_torus(std::move(point))) {
    if (v.size() != xi.size()) throw std::invalid_argument("arity mismatch");
  }
};

}  // namespace latwave
