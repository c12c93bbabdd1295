#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace latwave {

// C-infinity plateau profile: 1 on [0, 1/2], 0 from 1 on, glued with the
// standard exp(-1/u) partition so all derivatives vanish at both junctions.
inline double plateau_profile(double s) {
  s = std::fabs(s);
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  double u = 2.0 * s - 1.0;  // in (0,1)
  double a = std::exp(-1.0 / u);
  double b = std::exp(-1.0 / (1.0 - u));
  return b / (a + b);
}

// Compactly supported amplitude, value 1 on the half-radius core.
struct AmplitudeSpec {
  enum class Kind { radial_bump, product_bump };
  Kind kind = Kind::product_bump;
  std::vector<double> radius;  // per variable (radial uses radius[0])

  static AmplitudeSpec radial(int d, double r) {
    AmplitudeSpec a;
    a.kind = Kind::radial_bump;
    a.radius.assign(static_cast<size_t>(d), r);
    return a;
  }
  static AmplitudeSpec product(int d, double r) {
    AmplitudeSpec a;
    a.kind = Kind::product_bump;
    a.radius.assign(static_cast<size_t>(d), r);
    return a;
  }

  int dim() const { return static_cast<int>(radius.size()); }

  void validate() const {
    if (radius.empty()) throw std::invalid_argument("amplitude needs a radius");
    for (double r : radius)
      if (!(r > 0)) throw std::invalid_argument("amplitude radius must be > 0");
  }

  double value(const std::vector<double>& x) const {
    if (kind == Kind::radial_bump) {
      double s = 0.0;
      for (double xj : x) s += xj * xj;
      return plateau_profile(std::sqrt(s) / radius[0]);
    }
    double v = 1.0;
    for (size_t j = 0; j < x.size(); ++j) v *= plateau_profile(x[j] / radius[j]);
    return v;
  }
};

}  // namespace latwave
