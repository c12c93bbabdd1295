#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "latwave/rational.hpp"

namespace latwave {

// Dense univariate polynomial over Q, coefficients low-to-high.
// All root-multiplicity logic in the polyhedra module runs through this type,
// so everything here is exact.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
  static UniPoly constant(Rational v) { return UniPoly({std::move(v)}); }

  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for 0
  const Rational& leading() const { return c_.back(); }

  Rational operator()(const Rational& x) const {
    Rational v{0};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
    return v;
  }

  UniPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rational> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Rational(static_cast<int>(k));
    return UniPoly(std::move(d));
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational{0});
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return UniPoly(std::move(r));
  }
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational{0});
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
    return UniPoly(std::move(r));
  }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational{0});
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return UniPoly(std::move(r));
  }
  friend UniPoly operator*(const Rational& s, const UniPoly& a) {
    std::vector<Rational> r = a.c_;
    for (auto& v : r) v *= s;
    return UniPoly(std::move(r));
  }
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

  // Euclidean division, exact over Q.
  static std::pair<UniPoly, UniPoly> div_mod(const UniPoly& a, const UniPoly& b) {
    if (b.is_zero()) throw std::invalid_argument("division by zero polynomial");
    std::vector<Rational> rem = a.c_;
    std::vector<Rational> quo;
    int db = b.degree();
    while (static_cast<int>(rem.size()) - 1 >= db) {
      Rational q = rem.back() / b.leading();
      int shift = static_cast<int>(rem.size()) - 1 - db;
      if (static_cast<int>(quo.size()) < shift + 1) quo.resize(shift + 1, Rational{0});
      quo[shift] = q;
      for (int i = 0; i <= db; ++i) rem[static_cast<size_t>(shift + i)] -= q * b.c_[static_cast<size_t>(i)];
      while (!rem.empty() && rem.back() == 0) rem.pop_back();
      if (rem.empty()) break;
    }
    return {UniPoly(std::move(quo)), UniPoly(std::move(rem))};
  }

  UniPoly monic() const {
    if (is_zero()) return {};
    return Rational(1) / leading() * (*this);
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

inline UniPoly gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = UniPoly::div_mod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// Yun's square-free decomposition: f = prod factors[k-1]^k (monic factors,
// constant leading absorbed). factors[k-1] collects the roots of
// multiplicity exactly k.
inline std::vector<UniPoly> squarefree_decomposition(const UniPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("squarefree of zero");
  std::vector<UniPoly> out;
  if (f.degree() == 0) return out;
  UniPoly fm = f.monic();
  UniPoly g = gcd(fm, fm.derivative());
  UniPoly w = UniPoly::div_mod(fm, g).first;
  UniPoly y = UniPoly::div_mod(fm.derivative(), g).first;
  UniPoly z = y - w.derivative();
  while (!w.is_zero() && w.degree() > 0) {
    UniPoly a = gcd(w, z);
    out.push_back(a.monic());
    w = UniPoly::div_mod(w, a).first;
    z = UniPoly::div_mod(z, a).first - w.derivative();
  }
  return out;
}

// Sturm chain sign-variation count at x (standard convention: count at
// +inf/-inf uses leading-coefficient signs).
class SturmChain {
 public:
  explicit SturmChain(const UniPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("sturm of zero");
    chain_.push_back(f);
    UniPoly d = f.derivative();
    if (!d.is_zero()) chain_.push_back(d);
    while (chain_.size() >= 2) {
      UniPoly r = UniPoly::div_mod(chain_[chain_.size() - 2], chain_.back()).second;
      if (r.is_zero()) break;
      chain_.push_back(Rational(-1) * r);
    }
  }

  int variations_at(const Rational& x) const {
    int v = 0, prev = 0;
    for (const auto& p : chain_) {
      Rational val = p(x);
      int s = val == 0 ? 0 : (val > 0 ? 1 : -1);
      if (s != 0) {
        if (prev != 0 && s != prev) ++v;
        prev = s;
      }
    }
    return v;
  }

  int variations_at_inf(int sign_of_inf) const {
    int v = 0, prev = 0;
    for (const auto& p : chain_) {
      int s = p.leading() > 0 ? 1 : -1;
      if (sign_of_inf < 0 && p.degree() % 2 == 1) s = -s;
      if (prev != 0 && s != prev) ++v;
      prev = s;
    }
    return v;
  }

  // Distinct real roots in (a, b].
  int count_roots(const Rational& a, const Rational& b) const {
    return variations_at(a) - variations_at(b);
  }
  int count_real_roots() const { return variations_at_inf(-1) - variations_at_inf(+1); }

 private:
  std::vector<UniPoly> chain_;
};

inline int count_real_roots(const UniPoly& f) {
  if (f.is_zero() || f.degree() == 0) return 0;
  // Sturm needs a square-free input for clean counting.
  UniPoly sf = UniPoly::div_mod(f, gcd(f, f.derivative())).first;
  if (sf.degree() == 0) return 0;
  return SturmChain(sf).count_real_roots();
}

// Cauchy bound: all real roots lie in [-B, B].
inline Rational root_bound(const UniPoly& f) {
  Rational b{0};
  for (const auto& c : f.coeffs()) {
    Rational a = abs(c / f.leading());
    if (a > b) b = a;
  }
  return b + 1;
}

// Largest multiplicity among the *real* roots of f (0 when f has no real
// root). Multiplicity of irrational roots is read off the square-free tower.
inline unsigned max_real_root_multiplicity(const UniPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("zero polynomial");
  if (f.degree() <= 0) return 0;
  auto levels = squarefree_decomposition(f);
  unsigned best = 0;
  for (size_t k = levels.size(); k-- > 0;) {
    if (levels[k].degree() >= 1 && count_real_roots(levels[k]) > 0) {
      best = static_cast<unsigned>(k + 1);
      break;  // levels are scanned from the deepest multiplicity down
    }
  }
  return best;
}

// Isolating interval (a,b] for one real root of multiplicity >= m, if any.
inline std::optional<std::pair<Rational, Rational>> witness_root_interval(
    const UniPoly& f, unsigned m) {
  auto levels = squarefree_decomposition(f);
  for (int k = static_cast<int>(levels.size()) - 1; k >= 0 && k + 1 >= static_cast<int>(m); --k) {
    const UniPoly& g = levels[static_cast<size_t>(k)];
    if (g.degree() < 1) continue;
    SturmChain chain(g);
    if (chain.count_real_roots() == 0) continue;
    Rational lo = -root_bound(g), hi = root_bound(g);
    // bisect until exactly one root remains
    while (chain.count_roots(lo, hi) > 1 || hi - lo > Rational(1, 1024)) {
      Rational mid = (lo + hi) / 2;
      if (chain.count_roots(lo, mid) > 0)
        hi = mid;
      else
        lo = mid;
      if (chain.count_roots(lo, hi) == 1 && hi - lo <= Rational(1, 1024)) break;
    }
    return std::make_pair(lo, hi);
  }
  return std::nullopt;
}

}  // namespace latwave
