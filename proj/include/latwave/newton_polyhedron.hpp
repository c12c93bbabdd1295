#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "latwave/decay_index.hpp"
#include "latwave/polynomial.hpp"
#include "latwave/rational.hpp"
#include "latwave/simplex.hpp"
#include "latwave/unipoly.hpp"

namespace latwave {

// Taylor support of a phase: the exponents with nonzero coefficient.
struct SupportSet {
  int d = 0;
  std::vector<MultiIndex> points;

  static SupportSet of(const PolynomialPhase& f) {
    SupportSet s;
    s.d = f.dim();
    for (const auto& [g, c] : f.terms()) s.points.push_back(g);
    return s;
  }

  void validate() const {
    if (points.empty()) throw std::invalid_argument("empty support");
    for (const auto& g : points) {
      if (static_cast<int>(g.size()) != d) throw std::invalid_argument("support arity");
      for (int e : g)
        if (e < 0) throw std::invalid_argument("negative exponent");
    }
  }
};

namespace detail {

// Max eps in [0,1] with  q = sum_i l_i g_i + mu, sum l = 1, l,mu >= 0,
// where q = base + eps*dir. eps > 0 certifies that base extends past q's
// face towards -dir, i.e. the probe point lies on the minimal face of base.
inline Rational max_extension(const SupportSet& s, const std::vector<Rational>& base,
                              const std::vector<Rational>& dir) {
  size_t n = s.points.size();
  size_t d = static_cast<size_t>(s.d);
  LinearProgram lp;
  size_t nv = n + d + 2;  // lambdas, mus, eps, slack for eps<=1
  lp.c.assign(nv, Rational{0});
  lp.c[n + d] = -1;  // maximize eps
  for (size_t j = 0; j < d; ++j) {
    std::vector<Rational> row(nv, Rational{0});
    for (size_t i = 0; i < n; ++i) row[i] = Rational(s.points[i][j]);
    row[n + j] = 1;
    row[n + d] = -dir[j];
    lp.A.push_back(std::move(row));
    lp.b.push_back(base[j]);
  }
  std::vector<Rational> conv(nv, Rational{0});
  for (size_t i = 0; i < n; ++i) conv[i] = 1;
  lp.A.push_back(std::move(conv));
  lp.b.push_back(Rational{1});
  std::vector<Rational> cap(nv, Rational{0});
  cap[n + d] = 1;
  cap[n + d + 1] = 1;
  lp.A.push_back(std::move(cap));
  lp.b.push_back(Rational{1});
  auto sol = SimplexSolver::solve(lp);
  if (sol.status != LpSolution::Status::optimal) return Rational{-1};
  return -sol.objective;
}

inline int rank_over_Q(std::vector<std::vector<Rational>> rows) {
  int rank = 0;
  size_t cols = rows.empty() ? 0 : rows[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows.size(); ++c) {
    size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    for (size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      Rational f = rows[i][c] / rows[r][c];
      for (size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

}  // namespace detail

// d_S = inf { rho > 0 : (rho,...,rho) in N(S) }, exact, via the LP
// min t s.t. sum_i l_i g_i <= t*1, l >= 0, sum l = 1.
inline Rational newton_distance(const SupportSet& s) {
  s.validate();
  size_t n = s.points.size();
  size_t d = static_cast<size_t>(s.d);
  LinearProgram lp;
  size_t nv = n + 1 + d;  // lambdas, t, slacks
  lp.c.assign(nv, Rational{0});
  lp.c[n] = 1;
  for (size_t j = 0; j < d; ++j) {
    std::vector<Rational> row(nv, Rational{0});
    for (size_t i = 0; i < n; ++i) row[i] = Rational(s.points[i][j]);
    row[n] = -1;
    row[n + 1 + j] = 1;
    lp.A.push_back(std::move(row));
    lp.b.push_back(Rational{0});
  }
  std::vector<Rational> conv(nv, Rational{0});
  for (size_t i = 0; i < n; ++i) conv[i] = 1;
  lp.A.push_back(std::move(conv));
  lp.b.push_back(Rational{1});
  auto sol = SimplexSolver::solve(lp);
  if (sol.status != LpSolution::Status::optimal)
    throw std::logic_error("newton distance LP failed");
  return sol.objective;
}

// Minimal face of N(S) containing the diagonal point (d_S,...,d_S).
struct PrincipalFaceDesc {
  int dimension = 0;
  bool bounded = true;
  Rational distance;
  std::vector<MultiIndex> generators;        // support points on the face
  std::vector<int> recession_axes;           // unbounded directions e_j on the face
  // supporting line a1*x1 + x2 = a2 for the d=2 compact-edge case
  std::optional<std::pair<Rational, Rational>> edge_line;
};

inline PrincipalFaceDesc principal_face(const SupportSet& s) {
  s.validate();
  PrincipalFaceDesc out;
  out.distance = newton_distance(s);
  size_t d = static_cast<size_t>(s.d);
  std::vector<Rational> diag(d, out.distance);

  std::vector<std::vector<Rational>> span;
  for (const auto& g : s.points) {
    std::vector<Rational> dir(d);
    bool is_diag = true;
    for (size_t j = 0; j < d; ++j) {
      dir[j] = diag[j] - Rational(g[j]);
      if (dir[j] != 0) is_diag = false;
    }
    // the diagonal point itself is trivially on its face
    if (is_diag || detail::max_extension(s, diag, dir) > 0) {
      out.generators.push_back(g);
      if (!is_diag) span.push_back(std::move(dir));
    }
  }
  for (size_t j = 0; j < d; ++j) {
    std::vector<Rational> dir(d, Rational{0});
    dir[j] = -1;
    if (detail::max_extension(s, diag, dir) > 0) {
      out.recession_axes.push_back(static_cast<int>(j));
      std::vector<Rational> e(d, Rational{0});
      e[j] = 1;
      span.push_back(std::move(e));
    }
  }
  out.bounded = out.recession_axes.empty();
  out.dimension = detail::rank_over_Q(span);

  if (s.d == 2 && out.dimension == 1 && out.bounded && out.generators.size() >= 2) {
    const auto& ga = out.generators.front();
    const auto& gb = out.generators.back();
    Rational v1 = Rational(gb[0] - ga[0]);
    Rational v2 = Rational(gb[1] - ga[1]);
    // normal (p,q) with q normalized to 1; compact staircase edges have q != 0
    Rational p = -v2, q = v1;
    if (q < 0) {
      p = -p;
      q = -q;
    }
    if (q != 0) {
      Rational a1 = p / q;
      Rational a2 = (a1 * Rational(ga[0]) + Rational(ga[1]));
      out.edge_line = std::make_pair(a1, a2);
    }
  }
  return out;
}

// 2-D hull helpers (test oracles and JSON output).
inline std::vector<MultiIndex> hull_vertices_2d(const SupportSet& s) {
  s.validate();
  if (s.d != 2) throw std::invalid_argument("needs d = 2");
  // Pareto-minimal staircase points, then lower-left convex chain.
  std::vector<MultiIndex> pts = s.points;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<MultiIndex> pareto;
  for (const auto& p : pts) {
    bool dominated = false;
    for (const auto& q : pts)
      if (q != p && q[0] <= p[0] && q[1] <= p[1]) dominated = true;
    if (!dominated) pareto.push_back(p);
  }
  std::sort(pareto.begin(), pareto.end());  // x1 asc, x2 desc along staircase
  std::vector<MultiIndex> hull;
  for (const auto& p : pareto) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull[hull.size() - 1];
      long cross = static_cast<long>(b[0] - a[0]) * (p[1] - a[1]) -
                   static_cast<long>(b[1] - a[1]) * (p[0] - a[0]);
      if (cross <= 0)
        hull.pop_back();  // b is above the chord: not a vertex of the lower hull
      else
        break;
    }
    hull.push_back(p);
  }
  return hull;
}

struct Facet2D {
  Rational n1, n2, offset;  // n1*x1 + n2*x2 >= offset
};

inline std::vector<Facet2D> hull_facets_2d(const SupportSet& s) {
  auto verts = hull_vertices_2d(s);
  std::vector<Facet2D> out;
  int min1 = verts.front()[0];
  int min2 = verts.back()[1];
  out.push_back({Rational{1}, Rational{0}, Rational(min1)});  // vertical ray facet
  out.push_back({Rational{0}, Rational{1}, Rational(min2)});  // horizontal ray facet
  for (size_t i = 0; i + 1 < verts.size(); ++i) {
    Rational v1 = Rational(verts[i + 1][0] - verts[i][0]);
    Rational v2 = Rational(verts[i + 1][1] - verts[i][1]);
    Rational p = -v2, q = v1;
    if (p < 0) {
      p = -p;
      q = -q;
    }
    out.push_back({p, q, p * Rational(verts[i][0]) + q * Rational(verts[i][1])});
  }
  return out;
}

enum class Adaptedness { adapted, not_adapted, not_applicable };

struct AdaptednessReport {
  Adaptedness verdict = Adaptedness::not_applicable;
  std::string reason;
  PrincipalFaceDesc face;
  // when not adapted: the offending multiplicity and an isolating interval
  unsigned witness_multiplicity = 0;
  std::optional<std::pair<Rational, Rational>> witness_interval;
};

// Varchenko-type test for d = 2: the given coordinates are adapted when the
// principal face is a point, is unbounded, or is a compact edge on
// a1*x1 + x2 = a2 whose edge polynomial f(x,1) has no real root of
// multiplicity exceeding a2/(1+a1).
inline AdaptednessReport is_adapted_2d(const PolynomialPhase& poly) {
  if (poly.dim() != 2) throw std::invalid_argument("is_adapted_2d needs a 2-d phase");
  AdaptednessReport rep;
  if (poly.is_zero()) {
    rep.reason = "zero polynomial";
    return rep;
  }
  for (const auto& [g, c] : poly.terms()) {
    if (g[0] + g[1] <= 1) {
      rep.reason = "phase must vanish to second order at 0";
      return rep;
    }
  }
  SupportSet s = SupportSet::of(poly);
  rep.face = principal_face(s);
  if (rep.face.dimension == 0) {
    rep.verdict = Adaptedness::adapted;
    rep.reason = "principal face is a vertex";
    return rep;
  }
  if (!rep.face.bounded) {
    rep.verdict = Adaptedness::adapted;
    rep.reason = "principal face is unbounded";
    return rep;
  }
  if (!rep.face.edge_line) {
    rep.verdict = Adaptedness::not_applicable;
    rep.reason = "degenerate face geometry";
    return rep;
  }
  auto [a1, a2] = *rep.face.edge_line;
  Rational threshold = a2 / (1 + a1);
  PolynomialPhase edge_poly(2);
  std::set<MultiIndex> on_edge(rep.face.generators.begin(), rep.face.generators.end());
  for (const auto& [g, c] : poly.terms())
    if (on_edge.count(g)) edge_poly.add_term(g, c);
  UniPoly f = edge_poly.restrict_x2_to_1();
  unsigned mult = f.degree() >= 1 ? max_real_root_multiplicity(f) : 0;
  if (Rational(mult) > threshold) {
    rep.verdict = Adaptedness::not_adapted;
    rep.witness_multiplicity = mult;
    rep.witness_interval = witness_root_interval(f, mult);
    rep.reason = "edge polynomial has a real root of multiplicity " + std::to_string(mult) +
                 " > " + to_string(threshold);
  } else {
    rep.verdict = Adaptedness::adapted;
    rep.reason = "compact edge, max real multiplicity " + std::to_string(mult) +
                 " <= " + to_string(threshold);
  }
  return rep;
}

struct QuarticClass {
  std::string label;
  DecayIndex index;
  unsigned max_real_multiplicity = 0;
};

// Exact classification of a real binary quartic sum a_k x1^(4-k) x2^k by the
// largest multiplicity among real roots (the root at x2 = 0 counts through
// the degree drop of f(x,1)).
inline QuarticClass classify_binary_quartic(const std::array<Rational, 5>& a) {
  bool all_zero = true;
  for (const auto& v : a) all_zero = all_zero && v == 0;
  if (all_zero) throw std::invalid_argument("zero quartic form");

  std::vector<Rational> c = {a[4], a[3], a[2], a[1], a[0]};  // low-to-high in x1
  UniPoly f(c);
  unsigned mult_inf = static_cast<unsigned>(4 - std::max(f.degree(), 0));
  unsigned mult_fin = f.degree() >= 1 ? max_real_root_multiplicity(f) : 0;
  unsigned M = std::max(mult_fin, mult_inf);

  unsigned doubles = (mult_inf == 2) ? 1 : 0;
  unsigned simples = (mult_inf == 1) ? 1 : 0;
  if (f.degree() >= 1) {
    auto levels = squarefree_decomposition(f);
    if (levels.size() >= 2 && levels[1].degree() >= 1)
      doubles += static_cast<unsigned>(count_real_roots(levels[1]));
    if (!levels.empty() && levels[0].degree() >= 1)
      simples += static_cast<unsigned>(count_real_roots(levels[0]));
  }

  QuarticClass out;
  out.max_real_multiplicity = M;
  if (M == 4) {
    out.label = "x1^4";
    out.index = {Rational(-1, 4), 0};
  } else if (M == 3) {
    out.label = "x1^3 x2";
    out.index = {Rational(-1, 3), 0};
  } else if (M == 2) {
    if (doubles >= 2)
      out.label = "x1^2 x2^2";
    else if (simples >= 2)
      out.label = "x1^2 x2 (x1 + x2)";
    else
      out.label = "x1^2 (x1^2 + x2^2)";
    out.index = {Rational(-1, 2), 1};
  } else {
    out.label = simples > 0 ? "x1 x2 (x1^2 + a1 x1 x2 + a2 x2^2)"
                            : "(x1^2 + x2^2)(x1^2 + a1 x1 x2 + a2 x2^2)";
    out.index = {Rational(-1, 2), 0};
  }
  return out;
}

struct ProportionalityResult {
  bool proportional = false;
  std::optional<Rational> c0;
  std::optional<Rational> root;
};

// Decides whether f^2 + c g^2 (f, g real quadratics) is s(r - r0)^4; when it
// is, f and g must be proportional and c0 with f = c0 g is returned.
inline ProportionalityResult quartic_proportionality(const std::array<Rational, 3>& fm,
                                                     const std::array<Rational, 3>& gm,
                                                     const Rational& c) {
  if (c == 0) throw std::invalid_argument("c must be nonzero");
  UniPoly f({fm[2], fm[1], fm[0]});
  UniPoly g({gm[2], gm[1], gm[0]});
  if (f.is_zero() || g.is_zero()) throw std::invalid_argument("degenerate input");
  UniPoly F = f * f + c * (g * g);
  if (F.is_zero()) throw std::invalid_argument("f^2 + c g^2 vanishes identically");

  ProportionalityResult out;
  if (F.degree() != 4) return out;
  Rational s = F.coeffs()[4];
  Rational r0 = -F.coeffs()[3] / (4 * s);
  UniPoly lin({-r0, Rational{1}});
  UniPoly quartic = s * (lin * lin * lin * lin);
  if (!(quartic == F)) return out;

  out.proportional = true;
  out.root = r0;
  for (size_t i = 0; i < 3; ++i) {
    if (gm[i] != 0) {
      out.c0 = fm[i] / gm[i];
      break;
    }
  }
  UniPoly check = f - *out.c0 * g;
  if (!check.is_zero()) throw std::logic_error("proportionality invariant violated");
  return out;
}

}  // namespace latwave
