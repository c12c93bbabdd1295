#pragma once

// Test-only oracles, independent of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "latwave/newton_polyhedron.hpp"
#include "latwave/rational.hpp"

namespace oracles {

// Cyclic Jacobi eigenvalues of a symmetric matrix (independent of Eigen).
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-26) break;
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) {
        if (std::fabs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Central differences for gradients.
inline std::vector<double> central_difference_grad(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (size_t j = 0; j < x.size(); ++j) {
    double x0 = x[j];
    x[j] = x0 + h;
    double fp = f(x);
    x[j] = x0 - h;
    double fm = f(x);
    x[j] = x0;
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Explicit RK4 for the lattice wave ODE system on a box of radius B:
// u'' = Delta u - m^2 u, u(0) = 0, u'(0) = delta_0. Returns u(x, t).
class LatticeOde2d {
 public:
  LatticeOde2d(int radius, double mass) : B_(radius), n_(2 * radius + 1), m2_(mass * mass) {
    u_.assign(static_cast<size_t>(n_ * n_), 0.0);
    v_.assign(static_cast<size_t>(n_ * n_), 0.0);
    v_[idx(0, 0)] = 1.0;
  }

  void advance(double t_target, double dt) {
    int steps = static_cast<int>(std::round(t_target / dt));
    std::vector<double> ku1, kv1, ku2, kv2, ku3, kv3, ku4, kv4, ut, vt;
    for (int s = 0; s < steps; ++s) {
      rhs(u_, v_, ku1, kv1);
      axpy(ut, vt, u_, v_, ku1, kv1, dt / 2);
      rhs(ut, vt, ku2, kv2);
      axpy(ut, vt, u_, v_, ku2, kv2, dt / 2);
      rhs(ut, vt, ku3, kv3);
      axpy(ut, vt, u_, v_, ku3, kv3, dt);
      rhs(ut, vt, ku4, kv4);
      for (size_t i = 0; i < u_.size(); ++i) {
        u_[i] += dt / 6.0 * (ku1[i] + 2 * ku2[i] + 2 * ku3[i] + ku4[i]);
        v_[i] += dt / 6.0 * (kv1[i] + 2 * kv2[i] + 2 * kv3[i] + kv4[i]);
      }
    }
  }

  double at(int x, int y) const { return u_[idx(x, y)]; }

 private:
  size_t idx(int x, int y) const {
    return static_cast<size_t>((x + B_) * n_ + (y + B_));
  }
  double lap(const std::vector<double>& u, int x, int y) const {
    double c = u[idx(x, y)];
    double s = -4.0 * c;
    s += (x + 1 <= B_) ? u[idx(x + 1, y)] : 0.0;
    s += (x - 1 >= -B_) ? u[idx(x - 1, y)] : 0.0;
    s += (y + 1 <= B_) ? u[idx(x, y + 1)] : 0.0;
    s += (y - 1 >= -B_) ? u[idx(x, y - 1)] : 0.0;
    return s;
  }
  void rhs(const std::vector<double>& u, const std::vector<double>& v, std::vector<double>& du,
           std::vector<double>& dv) const {
    du = v;
    dv.assign(u.size(), 0.0);
    for (int x = -B_; x <= B_; ++x)
      for (int y = -B_; y <= B_; ++y) dv[idx(x, y)] = lap(u, x, y) - m2_ * u[idx(x, y)];
  }
  static void axpy(std::vector<double>& uo, std::vector<double>& vo, const std::vector<double>& u,
                   const std::vector<double>& v, const std::vector<double>& du,
                   const std::vector<double>& dv, double a) {
    uo.resize(u.size());
    vo.resize(v.size());
    for (size_t i = 0; i < u.size(); ++i) {
      uo[i] = u[i] + a * du[i];
      vo[i] = v[i] + a * dv[i];
    }
  }

  int B_, n_;
  double m2_;
  std::vector<double> u_, v_;
};

// Newton distance by dual facet enumeration: d_S = max b/|a|_1 over valid
// inequalities a.xi >= b found from point/axis subsets. Independent of the
// primal simplex route.
inline latwave::Rational newton_distance_dual(const latwave::SupportSet& s) {
  using latwave::Rational;
  const int d = s.d;
  const auto& pts = s.points;
  Rational best{0};
  bool found = false;

  size_t n = pts.size();
  // enumerate subsets of points (size 1..d) and zero-axis masks
  std::vector<size_t> comb;
  std::function<void(size_t, size_t)> rec_points = [&](size_t start, size_t want) {
    if (comb.size() == want) {
      for (int zmask = 0; zmask < (1 << d); ++zmask) {
        // build system: a . (g_i - g_0) = 0, a_j = 0 for j in zmask
        std::vector<std::vector<Rational>> rows;
        for (size_t i = 1; i < comb.size(); ++i) {
          std::vector<Rational> r(static_cast<size_t>(d));
          for (int j = 0; j < d; ++j)
            r[static_cast<size_t>(j)] =
                Rational(pts[comb[i]][static_cast<size_t>(j)] - pts[comb[0]][static_cast<size_t>(j)]);
          rows.push_back(r);
        }
        for (int j = 0; j < d; ++j)
          if (zmask & (1 << j)) {
            std::vector<Rational> r(static_cast<size_t>(d), Rational{0});
            r[static_cast<size_t>(j)] = 1;
            rows.push_back(r);
          }
        // nullspace must be 1-dimensional: rank = d-1
        auto work = rows;
        size_t rank = 0;
        std::vector<int> pivot_col;
        for (int c = 0; c < d && rank < work.size(); ++c) {
          size_t piv = rank;
          while (piv < work.size() && work[piv][static_cast<size_t>(c)] == 0) ++piv;
          if (piv == work.size()) continue;
          std::swap(work[piv], work[rank]);
          for (size_t i = 0; i < work.size(); ++i) {
            if (i == rank || work[i][static_cast<size_t>(c)] == 0) continue;
            Rational f = work[i][static_cast<size_t>(c)] / work[rank][static_cast<size_t>(c)];
            for (int j = 0; j < d; ++j)
              work[i][static_cast<size_t>(j)] -= f * work[rank][static_cast<size_t>(j)];
          }
          pivot_col.push_back(c);
          ++rank;
        }
        if (rank != static_cast<size_t>(d - 1)) continue;
        // free column -> normal vector
        std::vector<Rational> a(static_cast<size_t>(d), Rational{0});
        std::vector<bool> is_pivot(static_cast<size_t>(d), false);
        for (int c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;
        int free_col = -1;
        for (int c = 0; c < d; ++c)
          if (!is_pivot[static_cast<size_t>(c)]) free_col = c;
        a[static_cast<size_t>(free_col)] = 1;
        for (size_t i = rank; i-- > 0;) {
          int pc = pivot_col[i];
          Rational val = -work[i][static_cast<size_t>(free_col)] * a[static_cast<size_t>(free_col)];
          for (int c = pc + 1; c < d; ++c)
            if (is_pivot[static_cast<size_t>(c)])
              val -= work[i][static_cast<size_t>(c)] * a[static_cast<size_t>(c)];
          a[static_cast<size_t>(pc)] = val / work[i][static_cast<size_t>(pc)];
        }
        // orient nonnegative
        bool has_neg = false, has_pos = false;
        for (const auto& v : a) {
          if (v < 0) has_neg = true;
          if (v > 0) has_pos = true;
        }
        if (has_neg && has_pos) continue;
        if (has_neg)
          for (auto& v : a) v = -v;
        Rational norm1{0};
        for (const auto& v : a) norm1 += v;
        if (norm1 == 0) continue;
        // b = min a.g over support; inequality valid by construction
        Rational b;
        bool first = true;
        for (const auto& g : pts) {
          Rational dot{0};
          for (int j = 0; j < d; ++j) dot += a[static_cast<size_t>(j)] * Rational(g[static_cast<size_t>(j)]);
          if (first || dot < b) {
            b = dot;
            first = false;
          }
        }
        Rational cand = b / norm1;
        if (!found || cand > best) {
          best = cand;
          found = true;
        }
      }
      return;
    }
    for (size_t i = start; i + (want - comb.size()) <= n; ++i) {
      comb.push_back(i);
      rec_points(i + 1, want);
      comb.pop_back();
    }
  };
  for (size_t want = 1; want <= static_cast<size_t>(d) && want <= n; ++want) rec_points(0, want);
  if (!found) throw std::logic_error("dual enumeration found no facet");
  return best;
}

}  // namespace oracles
