#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "latwave/dispersion.hpp"

namespace latwave {

// One degenerate critical point of phi(v, .): xi with v = grad w(xi), so
// grad_xi phi(v, xi) = 0 by construction.
struct CriticalRecord {
  std::vector<double> xi;
  std::vector<double> v;
  int corank = 0;
  double v_norm = 0.0;
  double min_nonkernel_eig = 0.0;  // smallest |eigenvalue| outside the kernel
};

inline std::vector<double> velocity_of(const DispersionRelation& rel,
                                       const std::vector<double>& xi) {
  return rel.grad_omega(xi);
}

struct SigmaScanResult {
  std::vector<CriticalRecord> records;
  // structural verification against the expected pi/2 pattern
  bool structure_verified = false;
  int expected_half_pi_components = 0;  // k+1, checked for k in {2,3,4}
  long scanned = 0;
};

// Scans the first orthant [0,pi]^d on the lattice {j pi / (2R)} (pi/2 is hit
// exactly at j = R) and returns the points of Hessian corank k. For d=5 and
// k in {2,3,4} every returned point must carry exactly k+1 components equal
// to pi/2; k=5 must come back empty.
inline SigmaScanResult scan_sigma(const DispersionRelation& rel, int k, int resolution,
                                  double tol = 1e-8) {
  if (k < 0 || k > rel.d) throw std::invalid_argument("corank out of range");
  if (resolution < 2) throw std::invalid_argument("resolution too coarse");
  int npts = 2 * resolution + 1;
  double h = kPi / (2.0 * resolution);

  SigmaScanResult out;
  std::vector<int> idx(static_cast<size_t>(rel.d), 0);
  std::vector<double> xi(static_cast<size_t>(rel.d), 0.0);
  long total = 1;
  for (int j = 0; j < rel.d; ++j) total *= npts;

  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    bool origin = true;
    for (int j = 0; j < rel.d; ++j) {
      idx[static_cast<size_t>(j)] = static_cast<int>(rem % npts);
      rem /= npts;
      int i = idx[static_cast<size_t>(j)];
      xi[static_cast<size_t>(j)] = (i == resolution) ? kPi / 2.0 : i * h;
      if (i != 0) origin = false;
    }
    if (origin && rel.mass == 0.0) continue;
    ++out.scanned;
    if (rel.hess_phi_corank(xi, tol) != k) continue;

    CriticalRecord rec;
    rec.xi = xi;
    rec.v = rel.grad_omega(xi);
    rec.corank = k;
    double s = 0.0;
    for (double vj : rec.v) s += vj * vj;
    rec.v_norm = std::sqrt(s);
    Eigen::VectorXd ev = rel.hess_omega_eigenvalues(xi);
    std::vector<double> mags(static_cast<size_t>(ev.size()));
    for (int i = 0; i < ev.size(); ++i) mags[static_cast<size_t>(i)] = std::abs(ev(i));
    std::sort(mags.begin(), mags.end());
    rec.min_nonkernel_eig = (k < ev.size()) ? mags[static_cast<size_t>(k)] : 0.0;
    out.records.push_back(std::move(rec));
  }

  // lexicographic merge order regardless of scan parallelism
  std::sort(out.records.begin(), out.records.end(),
            [](const CriticalRecord& a, const CriticalRecord& b) { return a.xi < b.xi; });

  if (rel.d == 5 && k >= 2 && k <= 4) {
    out.expected_half_pi_components = k + 1;
    out.structure_verified = true;
    for (const auto& rec : out.records) {
      int at_half_pi = 0;
      for (double x : rec.xi)
        if (std::abs(x - kPi / 2.0) <= tol) ++at_half_pi;
      if (at_half_pi != k + 1) out.structure_verified = false;
    }
    if (out.records.empty()) out.structure_verified = false;
  }
  if (k == 5) out.structure_verified = out.records.empty();
  return out;
}

struct OmegaImageStats {
  double max_v_norm = 0.0;
  double min_cross_distance = -1.0;  // min distance between the two record sets
};

// Measured quantities standing in for the (non-numeric) radius constants:
// max |v| over one corank class and the separation between two classes.
inline OmegaImageStats omega_image_stats(const std::vector<CriticalRecord>& a,
                                         const std::vector<CriticalRecord>& b = {}) {
  if (a.empty()) throw std::invalid_argument("empty record set");
  OmegaImageStats st;
  for (const auto& r : a) st.max_v_norm = std::max(st.max_v_norm, r.v_norm);
  if (!b.empty()) {
    double best = -1.0;
    for (const auto& ra : a)
      for (const auto& rb : b) {
        double s = 0.0;
        for (size_t j = 0; j < ra.v.size(); ++j) {
          double dj = ra.v[j] - rb.v[j];
          s += dj * dj;
        }
        double dist = std::sqrt(s);
        if (best < 0 || dist < best) best = dist;
      }
    st.min_cross_distance = best;
  }
  return st;
}

}  // namespace latwave
