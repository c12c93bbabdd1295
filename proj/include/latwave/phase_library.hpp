#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "latwave/p4_reduction.hpp"
#include "latwave/polynomial.hpp"

namespace latwave {

// Named model phases used across the oscillatory pipelines. Entries with a
// `factor_*` pair are evaluated as a product over disjoint variable blocks.
struct PhaseEntry {
  std::string id;
  std::string description;
  PolynomialPhase phase;                       // joint phase (always valid)
  std::optional<PolynomialPhase> factor_a;     // set for split evaluation
  std::optional<PolynomialPhase> factor_b;
  double expected_beta = 0.0;  // reference decay of |J| for the default bump
  int expected_p = 0;
};

inline PolynomialPhase monomial_phase(int d, const MultiIndex& g, const Rational& c) {
  PolynomialPhase f(d);
  f.add_term(g, c);
  return f;
}

inline std::vector<PhaseEntry> phase_library() {
  std::vector<PhaseEntry> lib;

  lib.push_back({"z2", "nondegenerate quadratic, one variable",
                 monomial_phase(1, {2}, Rational(1)), {}, {}, -0.5, 0});
  lib.push_back({"z3", "cubic inflection, one variable", monomial_phase(1, {3}, Rational(1)),
                 {}, {}, -1.0 / 3.0, 0});
  lib.push_back({"z4", "quartic flat point, one variable", monomial_phase(1, {4}, Rational(1)),
                 {}, {}, -0.25, 0});

  PolynomialPhase d4(2);
  d4.add_term({0, 3}, Rational(1));
  d4.add_term({2, 1}, Rational(-1));
  lib.push_back({"d4core", "z2^3 - z1^2 z2 umbilic core", d4, {}, {}, -2.0 / 3.0, 0});

  lib.push_back({"xyz", "z1 z2 z3 triple product", monomial_phase(3, {1, 1, 1}, Rational(1)),
                 {}, {}, -1.0, 1});

  PolynomialPhase u12b(2);
  u12b.add_term({2, 1}, Rational(1));
  u12b.add_term({1, 2}, Rational(1));
  PolynomialPhase u12 = direct_sum(monomial_phase(1, {4}, Rational(1)), u12b);
  lib.push_back({"u12core", "z1^4 + z2 z3 (z2 + z3) unimodal core", u12,
                 monomial_phase(1, {4}, Rational(1)), u12b, -11.0 / 12.0, 0});

  lib.push_back({"p2", "corank-2 normal form, five variables",
                 build_phase_Pm(2, 5, {1, 1, 1}), {}, {}, -13.0 / 6.0, 0});
  lib.push_back({"p3", "corank-3 normal form, five variables",
                 build_phase_Pm(3, 5, {1, 1}), {}, {}, -2.0, 1});
  lib.push_back({"p4", "corank-4 normal form, five variables", build_phase_Pm(4, 5, {1}),
                 {}, {}, -11.0 / 6.0, 0});
  lib.push_back({"p4tilde", "cubic core in four variables", build_phase_Pm_core(4), {}, {},
                 -4.0 / 3.0, 0});
  lib.push_back({"p4w", "cubic core in rotated coordinates", p4_rotated_phase(), {}, {},
                 -4.0 / 3.0, 0});
  return lib;
}

inline const PhaseEntry& find_phase(const std::string& id) {
  static const std::vector<PhaseEntry> lib = phase_library();
  for (const auto& e : lib)
    if (e.id == id) return e;
  throw std::invalid_argument("unknown phase id: " + id);
}

}  // namespace latwave
