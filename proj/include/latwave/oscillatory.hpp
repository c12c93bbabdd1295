#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "latwave/amplitude.hpp"
#include "latwave/green.hpp"  // CostGuardError
#include "latwave/parallel.hpp"
#include "latwave/polynomial.hpp"

namespace latwave {

struct OscGrid {
  double points_per_cycle = 6.0;
  int min_nodes = 32;
  int pad_nodes = 24;
  std::int64_t max_total_nodes = 500'000'000;
  bool force = false;
};

struct JSample {
  double t = 0.0;
  std::complex<double> value;
  double err_est = 0.0;
  std::vector<int> nodes;
};

namespace detail {

// Upper bound for max |d_j S| over the support box, coefficient-wise.
inline double axis_derivative_bound(const PolynomialPhase& S, const std::vector<double>& r,
                                    int axis) {
  double bound = 0.0;
  for (const auto& [g, c] : S.terms()) {
    int e = g[static_cast<size_t>(axis)];
    if (e == 0) continue;
    double m = std::fabs(to_double(c)) * e;
    for (size_t i = 0; i < r.size(); ++i) {
      int p = g[i] - (static_cast<int>(i) == axis ? 1 : 0);
      m *= std::pow(r[i], p);
    }
    bound += m;
  }
  return bound;
}

struct CompiledPhase {
  struct Term {
    double coeff;
    std::vector<int> exps;
  };
  std::vector<Term> terms;

  explicit CompiledPhase(const PolynomialPhase& S) {
    for (const auto& [g, c] : S.terms()) terms.push_back({to_double(c), g});
  }
};

}  // namespace detail

// J(t, S, psi) = int e^{itS(x)} psi(x - center) dx over the amplitude box
// around `center`, tensor midpoint rule with per-axis node counts matched to
// the oscillation rate. err_est from a half-resolution pass. The amplitude
// is a weighted sum of bump specs (one entry in the common case); J is
// linear in it by construction.
inline JSample eval_J_combo(double t, const PolynomialPhase& S,
                            const std::vector<std::pair<double, AmplitudeSpec>>& combo,
                            const OscGrid& grid = {}, const std::vector<double>& center = {}) {
  if (combo.empty()) throw std::invalid_argument("empty amplitude combination");
  for (const auto& [w, a] : combo) {
    a.validate();
    if (a.dim() != S.dim()) throw std::invalid_argument("amplitude dimension mismatch");
  }
  const int d = S.dim();
  const AmplitudeSpec& amp = combo.front().second;
  const bool single_product =
      combo.size() == 1 && amp.kind == AmplitudeSpec::Kind::product_bump;
  std::vector<double> c = center;
  if (c.empty()) c.assign(static_cast<size_t>(d), 0.0);
  if (static_cast<int>(c.size()) != d) throw std::invalid_argument("center arity");

  const double ta = std::fabs(t);
  // oscillation rate near the window, conservative coefficient bound
  std::vector<double> box_r = amp.radius;
  std::vector<double> shift_mag(box_r.size());
  for (size_t j = 0; j < box_r.size(); ++j) shift_mag[j] = box_r[j] + std::fabs(c[j]);
  std::vector<int> nodes(static_cast<size_t>(d));
  std::int64_t total = 1;
  for (int j = 0; j < d; ++j) {
    double L = detail::axis_derivative_bound(S, shift_mag, j);
    double cycles = ta * L * (2.0 * box_r[static_cast<size_t>(j)]) / (2.0 * kPi);
    int n = static_cast<int>(std::ceil(grid.points_per_cycle * cycles)) + grid.pad_nodes;
    n = std::max(n, grid.min_nodes);
    nodes[static_cast<size_t>(j)] = n;
    total *= n;
  }
  if (total > grid.max_total_nodes && !grid.force)
    throw CostGuardError("oscillatory grid exceeds the node budget");

  detail::CompiledPhase cp(S);

  auto sweep = [&](const std::vector<int>& nn) -> std::complex<double> {
    // per-axis tables: node coordinates, powers, product-amplitude factors
    std::vector<std::vector<double>> coord(static_cast<size_t>(d));
    std::vector<std::vector<double>> ampf(static_cast<size_t>(d));
    int max_exp = 0;
    for (const auto& term : cp.terms)
      for (int e : term.exps) max_exp = std::max(max_exp, e);
    // pow_tab[j][i * (max_exp+1) + e] = x_j(i)^e
    std::vector<std::vector<double>> pow_tab(static_cast<size_t>(d));
    const bool product_amp = amp.kind == AmplitudeSpec::Kind::product_bump;
    for (int j = 0; j < d; ++j) {
      int n = nn[static_cast<size_t>(j)];
      double r = box_r[static_cast<size_t>(j)];
      double h = 2.0 * r / n;
      coord[static_cast<size_t>(j)].resize(static_cast<size_t>(n));
      ampf[static_cast<size_t>(j)].resize(static_cast<size_t>(n));
      pow_tab[static_cast<size_t>(j)].resize(static_cast<size_t>(n) * (max_exp + 1));
      for (int i = 0; i < n; ++i) {
        double rel = -r + (i + 0.5) * h;
        double x = c[static_cast<size_t>(j)] + rel;
        coord[static_cast<size_t>(j)][static_cast<size_t>(i)] = x;
        ampf[static_cast<size_t>(j)][static_cast<size_t>(i)] =
            product_amp ? plateau_profile(rel / r) : 1.0;
        double p = 1.0;
        for (int e = 0; e <= max_exp; ++e) {
          pow_tab[static_cast<size_t>(j)][static_cast<size_t>(i) * (max_exp + 1) + e] = p;
          p *= x;
        }
      }
    }
    std::int64_t tot = 1;
    for (int v : nn) tot *= v;
    std::int64_t inner = tot / nn[0];

    const int workers = std::max(1, thread_count());
    std::vector<std::complex<double>> partial(static_cast<size_t>(workers), {0.0, 0.0});
    parallel_slabs(nn[0], [&](int slab, std::int64_t b, std::int64_t e) {
      std::complex<double> acc{0.0, 0.0};
      std::vector<int> idx(static_cast<size_t>(d), 0);
      std::vector<double> x(static_cast<size_t>(d), 0.0);
      for (std::int64_t i0 = b; i0 < e; ++i0) {
        idx[0] = static_cast<int>(i0);
        for (std::int64_t r = 0; r < inner; ++r) {
          std::int64_t rem = r;
          for (int j = d - 1; j >= 1; --j) {
            idx[static_cast<size_t>(j)] = static_cast<int>(rem % nn[static_cast<size_t>(j)]);
            rem /= nn[static_cast<size_t>(j)];
          }
          double w = 1.0;
          for (int j = 0; j < d; ++j) {
            w *= ampf[static_cast<size_t>(j)][static_cast<size_t>(idx[static_cast<size_t>(j)])];
            if (w == 0.0) break;
          }
          if (!product_amp) {
            for (int j = 0; j < d; ++j)
              x[static_cast<size_t>(j)] =
                  coord[static_cast<size_t>(j)][static_cast<size_t>(idx[static_cast<size_t>(j)])] -
                  c[static_cast<size_t>(j)];
            w = amp.value(x);
          }
          if (w == 0.0) continue;
          double s = 0.0;
          for (const auto& term : cp.terms) {
            double m = term.coeff;
            for (int j = 0; j < d; ++j)
              m *= pow_tab[static_cast<size_t>(j)]
                          [static_cast<size_t>(idx[static_cast<size_t>(j)]) * (max_exp + 1) +
                           term.exps[static_cast<size_t>(j)]];
            s += m;
          }
          double ph = ta * s;
          acc += std::complex<double>(w * std::cos(ph), w * std::sin(ph));
        }
      }
      partial[static_cast<size_t>(slab)] = acc;
    });
    std::complex<double> sum{0.0, 0.0};
    for (const auto& p : partial) sum += p;
    double vol = 1.0;
    for (int j = 0; j < d; ++j)
      vol *= 2.0 * box_r[static_cast<size_t>(j)] / nn[static_cast<size_t>(j)];
    return sum * vol;
  };

  std::complex<double> v = sweep(nodes);
  std::vector<int> half(nodes);
  for (int& n : half) n = std::max(grid.min_nodes / 2, n / 2);
  std::complex<double> vh = sweep(half);

  JSample out;
  out.t = t;
  out.value = t < 0 ? std::conj(v) : v;
  out.err_est = std::abs(v - vh);
  out.nodes = nodes;
  return out;
}

// J factorizes over disjoint variable blocks with a product amplitude:
// J(t, A(x) + B(y)) = J(t, A) * J(t, B).
inline JSample quad_factor_eval(double t, const PolynomialPhase& A, const AmplitudeSpec& ampA,
                                const PolynomialPhase& B, const AmplitudeSpec& ampB,
                                const OscGrid& grid = {}) {
  JSample ja = eval_J(t, A, ampA, grid);
  JSample jb = eval_J(t, B, ampB, grid);
  JSample out;
  out.t = t;
  out.value = ja.value * jb.value;
  out.err_est = std::abs(ja.value) * jb.err_est + std::abs(jb.value) * ja.err_est +
                ja.err_est * jb.err_est;
  out.nodes = ja.nodes;
  out.nodes.insert(out.nodes.end(), jb.nodes.begin(), jb.nodes.end());
  return out;
}

// Joins two phases on disjoint variable blocks (cross-check oracle for the
// factorization identity).
inline PolynomialPhase direct_sum(const PolynomialPhase& A, const PolynomialPhase& B) {
  PolynomialPhase out(A.dim() + B.dim());
  for (const auto& [g, c] : A.terms()) {
    MultiIndex j = g;
    j.resize(static_cast<size_t>(A.dim() + B.dim()), 0);
    out.add_term(j, c);
  }
  for (const auto& [g, c] : B.terms()) {
    MultiIndex j(static_cast<size_t>(A.dim()), 0);
    j.insert(j.end(), g.begin(), g.end());
    out.add_term(j, c);
  }
  return out;
}

// Seeded random polynomial with sup-norm < eps on the ball of radius r,
// enforced by a dense-grid check and dyadic rescale.
struct PerturbationSpec {
  double r = 1.0;
  double eps = 1e-3;
  int degree_cap = 4;
  std::uint64_t seed = 1;
  int d = 3;
};

inline PolynomialPhase sample_perturbation(const PerturbationSpec& spec) {
  if (spec.eps < 0) throw std::invalid_argument("eps must be >= 0");
  PolynomialPhase P(spec.d);
  if (spec.eps == 0.0) return P;

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::int64_t> dist(-(1 << 20), 1 << 20);
  // all monomials of total degree <= cap
  MultiIndex g(static_cast<size_t>(spec.d), 0);
  std::vector<MultiIndex> monos;
  for (;;) {
    int tot = 0;
    for (int e : g) tot += e;
    if (tot <= spec.degree_cap) monos.push_back(g);
    int j = spec.d - 1;
    for (; j >= 0; --j) {
      if (g[static_cast<size_t>(j)] < spec.degree_cap) {
        ++g[static_cast<size_t>(j)];
        for (int i = j + 1; i < spec.d; ++i) g[static_cast<size_t>(i)] = 0;
        break;
      }
    }
    if (j < 0) break;
  }
  for (const auto& m : monos) P.add_term(m, Rational(dist(rng), 1 << 20));

  // dense grid sup over the ball (41^d points is ample for degree <= 6)
  const int gp = spec.d <= 2 ? 101 : 41;
  double sup = 0.0;
  std::vector<double> x(static_cast<size_t>(spec.d), 0.0);
  std::vector<int> idx(static_cast<size_t>(spec.d), 0);
  for (;;) {
    double norm2 = 0.0;
    for (int j = 0; j < spec.d; ++j) {
      x[static_cast<size_t>(j)] = -spec.r + 2.0 * spec.r * idx[static_cast<size_t>(j)] / (gp - 1);
      norm2 += x[static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
    }
    if (norm2 <= spec.r * spec.r) sup = std::max(sup, std::fabs(P.eval(x)));
    int j = spec.d - 1;
    for (; j >= 0; --j) {
      if (idx[static_cast<size_t>(j)] < gp - 1) {
        ++idx[static_cast<size_t>(j)];
        for (int i = j + 1; i < spec.d; ++i) idx[static_cast<size_t>(i)] = 0;
        break;
      }
    }
    if (j < 0) break;
  }
  if (sup >= spec.eps) {
    // dyadic scale keeps coefficients rational
    double target = 0.95 * spec.eps / sup;
    Rational scale(static_cast<std::int64_t>(target * (1LL << 40)), 1LL << 40);
    P = scale * P;
  }
  return P;
}

// Multi-start damped Newton on grad(S): deterministic lattice of starts,
// deduplicated critical points inside the amplitude region.
inline std::vector<std::vector<double>> critical_points(const PolynomialPhase& S, double box_r,
                                                        int starts_per_axis = 5) {
  const int d = S.dim();
  std::vector<std::vector<double>> found;
  std::vector<int> idx(static_cast<size_t>(d), 0);
  for (;;) {
    std::vector<double> x(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j)
      x[static_cast<size_t>(j)] =
          -0.6 * box_r + 1.2 * box_r * idx[static_cast<size_t>(j)] / (starts_per_axis - 1);

    for (int it = 0; it < 120; ++it) {
      auto g = S.grad(x);
      double gn = 0.0;
      for (double v : g) gn += v * v;
      gn = std::sqrt(gn);
      if (gn < 1e-13) break;
      auto h = S.hess(x);
      Eigen::MatrixXd H(d, d);
      Eigen::VectorXd G(d);
      for (int a = 0; a < d; ++a) {
        G(a) = g[static_cast<size_t>(a)];
        for (int b = 0; b < d; ++b) H(a, b) = h[static_cast<size_t>(a)][static_cast<size_t>(b)];
      }
      Eigen::VectorXd step = H.fullPivLu().solve(G);
      if (!step.allFinite()) break;
      double lam = 1.0;
      bool accepted = false;
      for (int bt = 0; bt < 30; ++bt) {
        std::vector<double> xn(x);
        for (int a = 0; a < d; ++a) xn[static_cast<size_t>(a)] -= lam * step(a);
        auto gn2v = S.grad(xn);
        double gn2 = 0.0;
        for (double v : gn2v) gn2 += v * v;
        if (std::sqrt(gn2) < gn) {
          x = xn;
          accepted = true;
          break;
        }
        lam *= 0.5;
      }
      if (!accepted) break;
    }

    auto g = S.grad(x);
    double gn = 0.0;
    for (double v : g) gn += v * v;
    bool inside = std::sqrt(gn) < 1e-10;
    for (double v : x) inside = inside && std::fabs(v) <= 0.8 * box_r;
    if (inside) {
      bool dup = false;
      for (const auto& y : found) {
        double dist = 0.0;
        for (int j = 0; j < d; ++j) {
          double dj = y[static_cast<size_t>(j)] - x[static_cast<size_t>(j)];
          dist += dj * dj;
        }
        if (std::sqrt(dist) < 1e-7) dup = true;
      }
      if (!dup) found.push_back(x);
    }

    int j = d - 1;
    for (; j >= 0; --j) {
      if (idx[static_cast<size_t>(j)] < starts_per_axis - 1) {
        ++idx[static_cast<size_t>(j)];
        for (int i = j + 1; i < d; ++i) idx[static_cast<size_t>(i)] = 0;
        break;
      }
    }
    if (j < 0) break;
  }
  return found;
}

}  // namespace latwave
