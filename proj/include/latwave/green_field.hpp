#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "latwave/green.hpp"
#include "latwave/parallel.hpp"

namespace latwave {

// Whole-window evaluation of G(., t): sample the kernel on the orthant
// midpoint lattice and apply a DCT-II along every axis. out[x] then equals
// the same cosine quadrature green_point uses, for all x in [0, n)^d at
// once. That is what makes sup_x |G| sweeps affordable.
class GreenField {
 public:
  GreenField(const DispersionRelation& rel, double t, TorusGrid grid) : d_(rel.d), t_(t) {
    grid.d = rel.d;
    grid.validate();
    n_ = grid.n;
    std::int64_t total = 1;
    for (int j = 0; j < d_; ++j) total *= n_;
    data_.assign(static_cast<size_t>(total), 0.0);

    // kernel sampling, separable dispersion table
    std::vector<double> disp(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) disp[static_cast<size_t>(i)] = 2.0 - 2.0 * std::cos((i + 0.5) * grid.h());
    const double m2 = rel.mass * rel.mass;
    const double ta = std::fabs(t);
    const double tsign = t < 0 ? -1.0 : 1.0;
    std::int64_t inner = total / n_;
    parallel_slabs(n_, [&](int, std::int64_t b, std::int64_t e) {
      std::vector<int> idx(static_cast<size_t>(d_), 0);
      for (std::int64_t i0 = b; i0 < e; ++i0) {
        std::int64_t base = i0 * inner;
        for (std::int64_t r = 0; r < inner; ++r) {
          std::int64_t rem = r;
          double u = m2 + disp[static_cast<size_t>(i0)];
          for (int j = d_ - 1; j >= 1; --j) {
            u += disp[static_cast<size_t>(rem % n_)];
            rem /= n_;
          }
          double w = std::sqrt(u);
          data_[static_cast<size_t>(base + r)] = tsign * detail::wave_kernel(w, ta);
        }
      }
    });

    // in-place DCT-II along each axis
    std::vector<int> dims(static_cast<size_t>(d_), n_);
    std::vector<fftw_r2r_kind> kinds(static_cast<size_t>(d_), FFTW_REDFT10);
    fftw_plan plan = fftw_plan_r2r(d_, dims.data(), data_.data(), data_.data(), kinds.data(),
                                   FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("fftw plan failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    scale_ = std::pow(0.5 / n_, d_);  // REDFT10 carries a factor 2 per axis
  }

  int n() const { return n_; }
  int dim() const { return d_; }
  double t() const { return t_; }

  // value at |x| (component-wise); callers pass canonical nonnegative x
  double at(const std::vector<long>& x) const {
    std::int64_t flat = 0;
    for (int j = 0; j < d_; ++j) {
      long xj = std::labs(x[static_cast<size_t>(j)]);
      if (xj >= n_) throw WindowError("point outside the field range");
      flat = flat * n_ + xj;
    }
    return scale_ * data_[static_cast<size_t>(flat)];
  }

 private:
  int d_;
  int n_ = 0;
  double t_;
  double scale_ = 1.0;
  std::vector<double> data_;
};

struct SupResult {
  std::vector<long> x_star;   // maximizer in the sorted fundamental domain
  double max_abs = 0.0;
  long orbit_size = 1;        // signed permutations of x_star
  double err_est = 0.0;
  int grid_n = 0;
  double t = 0.0;
};

inline long orbit_size_of(const std::vector<long>& x) {
  long fact[] = {1, 1, 2, 6, 24, 120};
  long perms = fact[x.size()];
  size_t i = 0;
  long nonzero = 0;
  while (i < x.size()) {
    size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    perms /= fact[j - i];
    i = j;
  }
  for (long v : x)
    if (v != 0) ++nonzero;
  return perms << nonzero;
}

// max_x |G(x,t)| over the window |x|_inf <= R, scanning only the sorted
// fundamental domain x1 >= ... >= xd >= 0.
inline SupResult sup_over_window(const DispersionRelation& rel, double t, long R,
                                 TorusGrid grid) {
  if (R < static_cast<long>(std::ceil(std::fabs(t))) + 2)
    throw std::invalid_argument("window must cover the light cone: R >= ceil(t)+2");
  if (R >= grid.n) throw WindowError("window exceeds the grid range");

  SupResult out;
  out.t = t;
  out.grid_n = grid.n;
  out.x_star.assign(static_cast<size_t>(rel.d), 0);
  if (t == 0.0) return out;

  GreenField field(rel, t, grid);
  TorusGrid half = grid;
  half.n = std::max(8, grid.n / 2);
  GreenField field_half(rel, t, half);

  std::vector<long> x(static_cast<size_t>(rel.d), 0);
  double best = -1.0;
  std::vector<long> best_x;
  // odometer over sorted tuples x1 >= x2 >= ... >= xd
  for (;;) {
    double v = std::fabs(field.at(x));
    if (v > best) {
      best = v;
      best_x = x;
    }
    int j = rel.d - 1;
    for (; j >= 0; --j) {
      long cap = (j == 0) ? R : x[static_cast<size_t>(j - 1)];
      if (x[static_cast<size_t>(j)] < cap) {
        ++x[static_cast<size_t>(j)];
        for (int i = j + 1; i < rel.d; ++i) x[static_cast<size_t>(i)] = 0;
        break;
      }
    }
    if (j < 0) break;
  }
  out.max_abs = best;
  out.x_star = best_x;
  out.orbit_size = orbit_size_of(best_x);
  out.err_est = std::fabs(field.at(best_x) - field_half.at(best_x));
  if (best_x[0] >= R)
    throw WindowError("maximizer touched the window boundary; enlarge R");
  return out;
}

}  // namespace latwave
