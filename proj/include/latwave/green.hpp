#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "latwave/dispersion.hpp"
#include "latwave/parallel.hpp"

namespace latwave {

struct CostGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct WindowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Midpoint lattice on the first orthant [0,pi]^d with cosine weights: node
// xi_i = (i+1/2) pi/n, uniform weight (pi/n)^d. Equivalent to the full-torus
// periodic rule folded by evenness; no node touches the omega = 0 point.
struct TorusGrid {
  int d = 2;
  int n = 64;              // nodes per dimension
  double c_grid = 4.0;     // coarse-grid heuristic: warn when n < c_grid * t
  int refine_factor = 4;   // oversampling of the origin ball (1/omega kernels)
  double refine_radius = 0.2;
  int window = -1;         // max |x_j| accepted; default n
  bool force = false;      // overrides the orthant-size memory guard

  void validate() const {
    if (n < 8) throw std::invalid_argument("grid needs n >= 8");
    if (d < 2 || d > 5) throw std::invalid_argument("grid dimension out of range");
    double pts = std::pow(static_cast<double>(n) + 1.0, d);
    if (pts > 5e8 && !force)
      throw CostGuardError("orthant grid exceeds 5e8 points; pass force to override");
  }
  int effective_window() const { return window < 0 ? n : window; }
  double h() const { return kPi / n; }
};

struct GreenSample {
  std::vector<long> x;
  double t = 0.0;
  double value = 0.0;
  double err_est = 0.0;
  int grid_n = 0;
  bool coarse_grid_warning = false;
};

struct DirectedSample {
  std::vector<double> v;
  double t = 0.0;
  std::complex<double> value;
  double err_est = 0.0;
  int grid_n = 0;
  bool coarse_grid_warning = false;
};

namespace detail {

// Complex or real accumulation over the orthant midpoint lattice of
//   prod_j cos(c_j xi_j) * K(omega(xi)),
// with optional subdivision of the cells whose centers fall in the origin
// ball (needed by the 1/omega kernels; never used for the smooth ones).
template <class Acc, class Kernel>
class OrthantSweep {
 public:
  OrthantSweep(const DispersionRelation& rel, const TorusGrid& grid,
               const std::vector<double>& cos_coeff, Kernel kernel, bool refine)
      : rel_(rel), grid_(grid), c_(cos_coeff), kernel_(kernel) {
    n_ = grid.n;
    h_ = grid.h();
    refine_ = refine && grid.refine_factor > 1;
    cos_table_.assign(static_cast<size_t>(rel.d), std::vector<double>(static_cast<size_t>(n_)));
    disp_table_.assign(static_cast<size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
      double xi = (i + 0.5) * h_;
      disp_table_[static_cast<size_t>(i)] = 2.0 - 2.0 * std::cos(xi);
      for (int j = 0; j < rel.d; ++j)
        cos_table_[static_cast<size_t>(j)][static_cast<size_t>(i)] =
            std::cos(c_[static_cast<size_t>(j)] * xi);
    }
    refine_cells_ = refine_ ? static_cast<int>(grid.refine_radius / h_) + 1 : 0;
  }

  Acc run() const {
    const int d = rel_.d;
    const int workers = std::max(1, thread_count());
    std::vector<Acc> partial(static_cast<size_t>(workers), Acc{});
    parallel_slabs(n_, [&](int slab, std::int64_t b, std::int64_t e) {
      Acc acc{};
      std::vector<int> idx(static_cast<size_t>(d), 0);
      for (std::int64_t i0 = b; i0 < e; ++i0) {
        idx[0] = static_cast<int>(i0);
        recurse(1, idx, cos_table_[0][static_cast<size_t>(i0)],
                disp_table_[static_cast<size_t>(i0)], acc);
      }
      partial[static_cast<size_t>(slab)] = acc;
    });
    Acc total{};
    for (const auto& p : partial) total += p;
    return total * std::pow(h_ / kPi, rel_.d);
  }

 private:
  void recurse(int level, std::vector<int>& idx, double w, double u, Acc& acc) const {
    const int d = rel_.d;
    if (level == d - 1) {
      const auto& ct = cos_table_[static_cast<size_t>(level)];
      for (int i = 0; i < n_; ++i) {
        idx[static_cast<size_t>(level)] = i;
        if (refine_ && in_refine_ball(idx)) {
          acc += refined_cell(idx);
          continue;
        }
        double uu = u + disp_table_[static_cast<size_t>(i)];
        acc += (w * ct[static_cast<size_t>(i)]) *
               kernel_(std::sqrt(uu + rel_.mass * rel_.mass));
      }
      return;
    }
    const auto& ct = cos_table_[static_cast<size_t>(level)];
    for (int i = 0; i < n_; ++i) {
      idx[static_cast<size_t>(level)] = i;
      recurse(level + 1, idx, w * ct[static_cast<size_t>(i)],
              u + disp_table_[static_cast<size_t>(i)], acc);
    }
  }

  bool in_refine_ball(const std::vector<int>& idx) const {
    for (int v : idx)
      if (v >= refine_cells_) return false;
    double r2 = 0.0;
    for (int v : idx) {
      double xc = (v + 0.5) * h_;
      r2 += xc * xc;
    }
    return r2 <= grid_.refine_radius * grid_.refine_radius;
  }

  // Fine midpoint rule on one base cell, weight folded to match the h^d
  // normalization of the outer sum.
  Acc refined_cell(const std::vector<int>& idx) const {
    const int d = rel_.d;
    const int f = grid_.refine_factor;
    double hf = h_ / f;
    long total = 1;
    for (int j = 0; j < d; ++j) total *= f;
    Acc acc{};
    std::vector<int> sub(static_cast<size_t>(d), 0);
    for (long flat = 0; flat < total; ++flat) {
      long rem = flat;
      double w = 1.0, u = rel_.mass * rel_.mass;
      for (int j = 0; j < d; ++j) {
        sub[static_cast<size_t>(j)] = static_cast<int>(rem % f);
        rem /= f;
        double xi = idx[static_cast<size_t>(j)] * h_ + (sub[static_cast<size_t>(j)] + 0.5) * hf;
        w *= std::cos(c_[static_cast<size_t>(j)] * xi);
        u += 2.0 - 2.0 * std::cos(xi);
      }
      acc += w * kernel_(std::sqrt(u));
    }
    return acc * (1.0 / total);
  }

  const DispersionRelation& rel_;
  const TorusGrid& grid_;
  std::vector<double> c_;
  Kernel kernel_;
  int n_ = 0;
  double h_ = 0.0;
  bool refine_ = false;
  int refine_cells_ = 0;
  std::vector<std::vector<double>> cos_table_;
  std::vector<double> disp_table_;
};

// Accumulators with the value-semantics the sweep expects.
struct RealAcc {
  double v = 0.0;
  RealAcc& operator+=(double x) {
    v += x;
    return *this;
  }
  RealAcc& operator+=(const RealAcc& o) {
    v += o.v;
    return *this;
  }
  RealAcc operator*(double s) const { return {v * s}; }
};
struct ComplexAcc {
  std::complex<double> v{0.0, 0.0};
  ComplexAcc& operator+=(const std::complex<double>& x) {
    v += x;
    return *this;
  }
  ComplexAcc& operator+=(const ComplexAcc& o) {
    v += o.v;
    return *this;
  }
  ComplexAcc operator*(double s) const { return {v * s}; }
};

// Permutation-reduced variant: valid when all cosine coefficients are equal,
// which covers x = a*(1,...,1) probes. Iterates sorted index multisets with
// multinomial multiplicity. d = 5 only (the case where it pays off).
template <class Acc, class Kernel>
Acc sorted_sweep_5(const DispersionRelation& rel, const TorusGrid& grid, double coeff,
                   Kernel kernel, bool refine) {
  const int n = grid.n;
  const double h = grid.h();
  std::vector<double> ct(static_cast<size_t>(n)), dt(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double xi = (i + 0.5) * h;
    ct[static_cast<size_t>(i)] = std::cos(coeff * xi);
    dt[static_cast<size_t>(i)] = 2.0 - 2.0 * std::cos(xi);
  }
  const bool do_refine = refine && grid.refine_factor > 1;
  const int refine_cells = do_refine ? static_cast<int>(grid.refine_radius / h) + 1 : 0;
  const double m2 = rel.mass * rel.mass;

  auto cell_value = [&](const std::array<int, 5>& id) -> Acc {
    Acc a{};
    if (do_refine) {
      bool near = true;
      double r2 = 0.0;
      for (int v : id) {
        if (v >= refine_cells) {
          near = false;
          break;
        }
        double xc = (v + 0.5) * h;
        r2 += xc * xc;
      }
      if (near && r2 <= grid.refine_radius * grid.refine_radius) {
        const int f = grid.refine_factor;
        double hf = h / f;
        long total = 1;
        for (int j = 0; j < 5; ++j) total *= f;
        for (long flat = 0; flat < total; ++flat) {
          long rem = flat;
          double w = 1.0, u = m2;
          for (int j = 0; j < 5; ++j) {
            int s = static_cast<int>(rem % f);
            rem /= f;
            double xi = id[static_cast<size_t>(j)] * h + (s + 0.5) * hf;
            w *= std::cos(coeff * xi);
            u += 2.0 - 2.0 * std::cos(xi);
          }
          a += w * kernel(std::sqrt(u));
        }
        return a * (1.0 / total);
      }
    }
    double w = 1.0, u = m2;
    for (int v : id) {
      w *= ct[static_cast<size_t>(v)];
      u += dt[static_cast<size_t>(v)];
    }
    a += w * kernel(std::sqrt(u));
    return a;
  };

  const int workers = std::max(1, thread_count());
  std::vector<Acc> partial(static_cast<size_t>(workers), Acc{});
  parallel_slabs(n, [&](int slab, std::int64_t b, std::int64_t e) {
    Acc acc{};
    for (int i0 = static_cast<int>(b); i0 < static_cast<int>(e); ++i0)
      for (int i1 = i0; i1 < n; ++i1)
        for (int i2 = i1; i2 < n; ++i2)
          for (int i3 = i2; i3 < n; ++i3)
            for (int i4 = i3; i4 < n; ++i4) {
              std::array<int, 5> id = {i0, i1, i2, i3, i4};
              // multiplicity 120 / prod(run lengths!)
              int mult = 120;
              int run = 1;
              for (int j = 1; j < 5; ++j) {
                if (id[static_cast<size_t>(j)] == id[static_cast<size_t>(j - 1)]) {
                  ++run;
                  mult /= run;
                } else {
                  run = 1;
                }
              }
              acc += cell_value(id) * static_cast<double>(mult);
            }
    partial[static_cast<size_t>(slab)] = acc;
  });
  Acc total{};
  for (const auto& p : partial) total += p;
  return total * std::pow(h / kPi, 5);
}

template <class Acc, class Kernel>
Acc orthant_quadrature(const DispersionRelation& rel, const TorusGrid& grid,
                       const std::vector<double>& cos_coeff, Kernel kernel, bool refine) {
  if (rel.d == 5) {
    bool uniform = true;
    for (double c : cos_coeff)
      if (std::fabs(c) != std::fabs(cos_coeff[0])) uniform = false;
    if (uniform)
      return sorted_sweep_5<Acc>(rel, grid, std::fabs(cos_coeff[0]), kernel, refine);
  }
  std::vector<double> c = cos_coeff;
  for (double& v : c) v = std::fabs(v);  // cosine is even; canonical form
  return OrthantSweep<Acc, Kernel>(rel, grid, c, kernel, refine).run();
}

inline double wave_kernel(double omega, double t) {
  // sin(t w)/w extended by t across w = 0 (entire in w^2)
  if (omega < 1e-150) return t;
  return std::sin(t * omega) / omega;
}

}  // namespace detail

// G(x,t) for the mass-m lattice wave equation, by the orthant cosine rule.
// Odd in t by construction; exact under signed permutations of x.
inline GreenSample green_point(const DispersionRelation& rel, const std::vector<long>& x,
                               double t, TorusGrid grid) {
  grid.d = rel.d;
  grid.validate();
  if (static_cast<int>(x.size()) != rel.d) throw std::invalid_argument("x arity");
  for (long xj : x)
    if (std::labs(xj) > grid.effective_window())
      throw WindowError("lattice point outside the configured window");

  GreenSample out;
  out.x = x;
  out.t = t;
  out.grid_n = grid.n;
  out.coarse_grid_warning = grid.n < std::ceil(grid.c_grid * std::fabs(t));
  if (t == 0.0) return out;  // sin(0) = 0 exactly

  double sign = t < 0 ? -1.0 : 1.0;
  double ta = std::fabs(t);
  std::vector<double> c(x.size());
  for (size_t j = 0; j < x.size(); ++j) c[j] = static_cast<double>(std::labs(x[j]));

  auto eval = [&](int n) {
    TorusGrid g = grid;
    g.n = n;
    auto acc = detail::orthant_quadrature<detail::RealAcc>(
        rel, g, c, [&](double w) { return detail::wave_kernel(w, ta); }, false);
    return acc.v;
  };
  double v = eval(grid.n);
  double v_half = eval(std::max(8, grid.n / 2));
  out.value = sign * v;
  out.err_est = std::fabs(v - v_half);
  return out;
}

// I(v,t) = (2pi)^-d int e^{it(v.xi - w)} / w dxi, orthant-folded. The origin
// ball is oversampled when m = 0 (the 1/w factor is genuinely singular).
inline DirectedSample directed_integral(const DispersionRelation& rel,
                                        const std::vector<double>& v, double t,
                                        TorusGrid grid) {
  grid.d = rel.d;
  grid.validate();
  if (static_cast<int>(v.size()) != rel.d) throw std::invalid_argument("v arity");

  DirectedSample out;
  out.v = v;
  out.t = t;
  out.grid_n = grid.n;
  out.coarse_grid_warning = grid.n < std::ceil(grid.c_grid * std::fabs(t));

  std::vector<double> c(v.size());
  for (size_t j = 0; j < v.size(); ++j) c[j] = t * v[j];

  auto eval = [&](int n) {
    TorusGrid g = grid;
    g.n = n;
    auto acc = detail::orthant_quadrature<detail::ComplexAcc>(
        rel, g, c,
        [&](double w) {
          return std::complex<double>(std::cos(t * w), -std::sin(t * w)) / w;
        },
        rel.mass == 0.0);
    return acc.v;
  };
  std::complex<double> val = eval(grid.n);
  std::complex<double> val_half = eval(std::max(8, grid.n / 2));
  out.value = val;
  out.err_est = std::abs(val - val_half);
  return out;
}

// Fourier-side l2 mass (2pi)^-d int (sin t w / w)^2, for the Parseval check.
inline double green_l2_fourier(const DispersionRelation& rel, double t, TorusGrid grid) {
  grid.d = rel.d;
  grid.validate();
  std::vector<double> c(static_cast<size_t>(rel.d), 0.0);
  auto acc = detail::orthant_quadrature<detail::RealAcc>(
      rel, grid, c,
      [&](double w) {
        double k = detail::wave_kernel(w, t);
        return k * k;
      },
      false);
  return acc.v;
}

}  // namespace latwave
