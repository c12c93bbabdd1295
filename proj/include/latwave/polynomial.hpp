#pragma once

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "latwave/rational.hpp"
#include "latwave/unipoly.hpp"

namespace latwave {

using MultiIndex = std::vector<int>;

// Multivariate polynomial over Q, multi-index -> coefficient.
// Shared currency of the oscillatory engine and the polyhedra module.
class PolynomialPhase {
 public:
  PolynomialPhase() = default;
  explicit PolynomialPhase(int d) : d_(d) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  }

  int dim() const { return d_; }
  const std::map<MultiIndex, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const MultiIndex& gamma, const Rational& c) {
    if (static_cast<int>(gamma.size()) != d_) throw std::invalid_argument("multi-index arity");
    for (int g : gamma)
      if (g < 0) throw std::invalid_argument("negative exponent");
    if (c == 0) return;
    auto it = terms_.find(gamma);
    if (it == terms_.end()) {
      terms_.emplace(gamma, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coeff(const MultiIndex& gamma) const {
    auto it = terms_.find(gamma);
    return it == terms_.end() ? Rational{0} : it->second;
  }

  int total_degree() const {
    int deg = 0;
    for (const auto& [g, c] : terms_) {
      int s = 0;
      for (int e : g) s += e;
      deg = std::max(deg, s);
    }
    return deg;
  }

  // Cached double coefficients; exactness lives in terms_, evaluation is fp.
  double eval(const std::vector<double>& x) const {
    double v = 0.0;
    for (const auto& [g, c] : terms_) {
      double m = to_double(c);
      for (int j = 0; j < d_; ++j)
        for (int e = 0; e < g[static_cast<size_t>(j)]; ++e) m *= x[static_cast<size_t>(j)];
      v += m;
    }
    return v;
  }

  std::vector<double> grad(const std::vector<double>& x) const {
    std::vector<double> g(static_cast<size_t>(d_), 0.0);
    for (const auto& [gamma, c] : terms_) {
      for (int j = 0; j < d_; ++j) {
        int e = gamma[static_cast<size_t>(j)];
        if (e == 0) continue;
        double m = to_double(c) * e;
        for (int i = 0; i < d_; ++i) {
          int p = gamma[static_cast<size_t>(i)] - (i == j ? 1 : 0);
          for (int r = 0; r < p; ++r) m *= x[static_cast<size_t>(i)];
        }
        g[static_cast<size_t>(j)] += m;
      }
    }
    return g;
  }

  std::vector<std::vector<double>> hess(const std::vector<double>& x) const {
    std::vector<std::vector<double>> h(static_cast<size_t>(d_),
                                       std::vector<double>(static_cast<size_t>(d_), 0.0));
    for (const auto& [gamma, c] : terms_) {
      for (int j = 0; j < d_; ++j) {
        for (int k = j; k < d_; ++k) {
          MultiIndex g = gamma;
          int ej = g[static_cast<size_t>(j)];
          if (ej == 0) continue;
          g[static_cast<size_t>(j)] -= 1;
          int ek = g[static_cast<size_t>(k)];
          if (ek == 0) continue;
          g[static_cast<size_t>(k)] -= 1;
          double m = to_double(c) * ej * ek;
          for (int i = 0; i < d_; ++i)
            for (int r = 0; r < g[static_cast<size_t>(i)]; ++r) m *= x[static_cast<size_t>(i)];
          h[static_cast<size_t>(j)][static_cast<size_t>(k)] += m;
          if (k != j) h[static_cast<size_t>(k)][static_cast<size_t>(j)] += m;
        }
      }
    }
    return h;
  }

  // tau_b f(z) = f(z + b), b rational, exact.
  PolynomialPhase translated_exact(const std::vector<Rational>& b) const {
    if (static_cast<int>(b.size()) != d_) throw std::invalid_argument("shift arity");
    PolynomialPhase out(d_);
    MultiIndex idx(static_cast<size_t>(d_), 0);
    for (const auto& [gamma, c] : terms_) expand_shift(out, gamma, c, b, 0, idx, Rational(1));
    return out;
  }

  friend PolynomialPhase operator+(const PolynomialPhase& a, const PolynomialPhase& b) {
    if (a.d_ != b.d_) throw std::invalid_argument("dimension mismatch");
    PolynomialPhase r = a;
    for (const auto& [g, c] : b.terms_) r.add_term(g, c);
    return r;
  }

  friend PolynomialPhase operator*(const Rational& s, const PolynomialPhase& a) {
    PolynomialPhase r(a.d_);
    if (s == 0) return r;
    for (const auto& [g, c] : a.terms_) r.terms_.emplace(g, s * c);
    return r;
  }

  friend bool operator==(const PolynomialPhase& a, const PolynomialPhase& b) {
    return a.d_ == b.d_ && a.terms_ == b.terms_;
  }

  // Restriction to a line or to the second variable: f(x, 1) as univariate
  // in x (d = 2 only).
  UniPoly restrict_x2_to_1() const {
    if (d_ != 2) throw std::invalid_argument("needs d = 2");
    std::vector<Rational> c;
    for (const auto& [g, v] : terms_) {
      size_t e = static_cast<size_t>(g[0]);
      if (c.size() <= e) c.resize(e + 1, Rational{0});
      c[e] += v;
    }
    return UniPoly(std::move(c));
  }

 private:
  static void expand_shift(PolynomialPhase& out, const MultiIndex& gamma, const Rational& c,
                           const std::vector<Rational>& b, int j, MultiIndex& idx,
                           Rational acc) {
    if (j == out.d_) {
      out.add_term(idx, c * acc);
      return;
    }
    int e = gamma[static_cast<size_t>(j)];
    // (z_j + b_j)^e expanded binomially
    Rational binom{1};
    for (int k = 0; k <= e; ++k) {
      idx[static_cast<size_t>(j)] = k;
      Rational term = binom * rational_pow(b[static_cast<size_t>(j)], static_cast<unsigned>(e - k));
      expand_shift(out, gamma, c, b, j + 1, idx, acc * term);
      binom = binom * Rational(e - k) / Rational(k + 1);
    }
    idx[static_cast<size_t>(j)] = 0;
  }

  int d_ = 0;
  std::map<MultiIndex, Rational> terms_;
};

// (sum_{j<=m} z_j)^3 - sum_{j<=m} z_j^3 + sum_{j>m} s_j z_j^2, the local
// normal form at a corank-m degenerate velocity. quad_signs supplies the
// signature of the nondegenerate quadratic tail (size d-m, entries +-1).
inline PolynomialPhase build_phase_Pm(int m, int d, const std::vector<int>& quad_signs) {
  if (m < 2 || m > d - 1) throw std::invalid_argument("need 2 <= m <= d-1");
  if (static_cast<int>(quad_signs.size()) != d - m)
    throw std::invalid_argument("need d-m quadratic signs");
  for (int s : quad_signs)
    if (s != 1 && s != -1) throw std::invalid_argument("signs must be +-1");
  PolynomialPhase f(d);
  // multinomial expansion of (z_1+...+z_m)^3
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        MultiIndex g(static_cast<size_t>(d), 0);
        g[static_cast<size_t>(i)]++;
        g[static_cast<size_t>(j)]++;
        g[static_cast<size_t>(k)]++;
        f.add_term(g, Rational(1));
      }
  for (int j = 0; j < m; ++j) {
    MultiIndex g(static_cast<size_t>(d), 0);
    g[static_cast<size_t>(j)] = 3;
    f.add_term(g, Rational(-1));
  }
  for (int j = m; j < d; ++j) {
    MultiIndex g(static_cast<size_t>(d), 0);
    g[static_cast<size_t>(j)] = 2;
    f.add_term(g, Rational(quad_signs[static_cast<size_t>(j - m)]));
  }
  return f;
}

// Cubic core in m variables: (sum z_j)^3 - sum z_j^3, no quadratic tail.
inline PolynomialPhase build_phase_Pm_core(int m) {
  if (m < 2) throw std::invalid_argument("need m >= 2");
  PolynomialPhase f(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        MultiIndex g(static_cast<size_t>(m), 0);
        g[static_cast<size_t>(i)]++;
        g[static_cast<size_t>(j)]++;
        g[static_cast<size_t>(k)]++;
        f.add_term(g, Rational(1));
      }
  for (int j = 0; j < m; ++j) {
    MultiIndex g(static_cast<size_t>(m), 0);
    g[static_cast<size_t>(j)] = 3;
    f.add_term(g, Rational(-1));
  }
  return f;
}

// Helper for hand-written phases: parse "c:e1,e2,...;c:e1,..." with rational c.
inline PolynomialPhase parse_phase(int d, const std::string& text) {
  PolynomialPhase f(d);
  size_t pos = 0;
  while (pos < text.size()) {
    size_t semi = text.find(';', pos);
    std::string term = text.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
    pos = semi == std::string::npos ? text.size() : semi + 1;
    if (term.empty()) continue;
    auto colon = term.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("term needs 'coeff:exps'");
    Rational c = parse_rational(term.substr(0, colon));
    MultiIndex g;
    std::string exps = term.substr(colon + 1);
    size_t p = 0;
    while (p <= exps.size()) {
      size_t comma = exps.find(',', p);
      std::string tok = exps.substr(p, comma == std::string::npos ? std::string::npos : comma - p);
      g.push_back(std::stoi(tok));
      if (comma == std::string::npos) break;
      p = comma + 1;
    }
    f.add_term(g, c);
  }
  return f;
}

}  // namespace latwave
