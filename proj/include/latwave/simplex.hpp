#pragma once

#include <stdexcept>
#include <vector>

#include "latwave/rational.hpp"

namespace latwave {

// Dense two-phase simplex over exact rationals, Bland's rule.
// Problem sizes here are tiny (tens of variables), so clarity wins.
struct LinearProgram {
  // min c.x  s.t.  A x = b,  x >= 0
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  std::vector<Rational> c;
};

struct LpSolution {
  enum class Status { optimal, infeasible, unbounded } status;
  Rational objective;
  std::vector<Rational> x;
};

class SimplexSolver {
 public:
  static LpSolution solve(const LinearProgram& lp) {
    size_t m = lp.A.size();
    size_t n = lp.c.size();
    for (const auto& row : lp.A)
      if (row.size() != n) throw std::invalid_argument("ragged constraint matrix");
    if (lp.b.size() != m) throw std::invalid_argument("rhs size");

    // tableau: n structural + m artificial + rhs
    std::vector<std::vector<Rational>> T(m, std::vector<Rational>(n + m + 1, Rational{0}));
    std::vector<size_t> basis(m);
    for (size_t i = 0; i < m; ++i) {
      Rational sign = lp.b[i] < 0 ? Rational(-1) : Rational(1);
      for (size_t j = 0; j < n; ++j) T[i][j] = sign * lp.A[i][j];
      T[i][n + i] = 1;
      T[i][n + m] = sign * lp.b[i];
      basis[i] = n + i;
    }

    // phase 1: minimize sum of artificials
    std::vector<Rational> obj1(n + m, Rational{0});
    for (size_t j = n; j < n + m; ++j) obj1[j] = 1;
    bool unbounded = false;
    Rational phase1 = run(T, basis, obj1, n + m, unbounded);
    if (phase1 != 0) return {LpSolution::Status::infeasible, {}, {}};

    // pivot remaining artificials out of the basis where possible
    for (size_t i = 0; i < m; ++i) {
      if (basis[i] < n) continue;
      size_t j = 0;
      for (; j < n; ++j)
        if (T[i][j] != 0) break;
      if (j < n) pivot(T, basis, i, j);
      // an all-zero structural row is redundant; its artificial stays basic at 0
    }

    // phase 2
    std::vector<Rational> obj2(n + m, Rational{0});
    for (size_t j = 0; j < n; ++j) obj2[j] = lp.c[j];
    Rational value = run(T, basis, obj2, n, unbounded);  // artificials barred from entering
    if (unbounded) return {LpSolution::Status::unbounded, {}, {}};

    std::vector<Rational> x(n, Rational{0});
    for (size_t i = 0; i < m; ++i)
      if (basis[i] < n) x[basis[i]] = T[i][n + m];
    return {LpSolution::Status::optimal, value, std::move(x)};
  }

 private:
  static void pivot(std::vector<std::vector<Rational>>& T, std::vector<size_t>& basis,
                    size_t r, size_t col) {
    size_t w = T[r].size();
    Rational piv = T[r][col];
    for (size_t j = 0; j < w; ++j) T[r][j] /= piv;
    for (size_t i = 0; i < T.size(); ++i) {
      if (i == r || T[i][col] == 0) continue;
      Rational f = T[i][col];
      for (size_t j = 0; j < w; ++j) T[i][j] -= f * T[r][j];
    }
    basis[r] = col;
  }

  // Bland's rule simplex on the current tableau; returns objective value.
  static Rational run(std::vector<std::vector<Rational>>& T, std::vector<size_t>& basis,
                      const std::vector<Rational>& obj, size_t enter_limit, bool& unbounded) {
    unbounded = false;
    size_t m = T.size();
    size_t rhs = T.empty() ? 0 : T[0].size() - 1;
    for (;;) {
      // reduced costs
      std::vector<Rational> y(m);
      for (size_t i = 0; i < m; ++i) y[i] = obj[basis[i]];
      size_t enter = rhs;
      for (size_t j = 0; j < enter_limit; ++j) {
        Rational rc = obj[j];
        for (size_t i = 0; i < m; ++i) rc -= y[i] * T[i][j];
        if (rc < 0) {
          enter = j;
          break;  // Bland: smallest index
        }
      }
      if (enter == rhs) break;
      size_t leave = m;
      Rational best{0};
      for (size_t i = 0; i < m; ++i) {
        if (T[i][enter] <= 0) continue;
        Rational ratio = T[i][rhs] / T[i][enter];
        if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) {
        unbounded = true;
        return {};
      }
      pivot(T, basis, leave, enter);
    }
    Rational v{0};
    for (size_t i = 0; i < m; ++i) v += obj[basis[i]] * T[i][rhs];
    return v;
  }
};

}  // namespace latwave
