#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "latwave/rational.hpp"

namespace latwave {

// Uniform-estimate index (beta, p): bound C (1+|t|)^beta log^p(|t|+2).
// Ordered lexicographically; larger = weaker bound.
struct DecayIndex {
  Rational beta;
  unsigned p = 0;

  friend bool operator==(const DecayIndex& a, const DecayIndex& b) {
    return a.beta == b.beta && a.p == b.p;
  }
  friend bool operator<(const DecayIndex& a, const DecayIndex& b) {
    if (a.beta != b.beta) return a.beta < b.beta;
    return a.p < b.p;
  }
};

inline DecayIndex index_lex_max(const DecayIndex& a, const DecayIndex& b) {
  return a < b ? b : a;
}

// Splitting off m nondegenerate quadratic variables shifts beta by -m/2.
inline DecayIndex quad_split_shift(const DecayIndex& i, unsigned m) {
  return {i.beta - Rational(m, 2), i.p};
}

inline std::string to_string(const DecayIndex& i) {
  return "(" + to_string(i.beta) + "," + std::to_string(i.p) + ")";
}

inline DecayIndex parse_decay_index(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("index needs 'beta,p'");
  std::string b = text.substr(0, comma);
  while (!b.empty() && (b.front() == '(' || b.front() == ' ')) b.erase(b.begin());
  std::string ps = text.substr(comma + 1);
  while (!ps.empty() && (ps.back() == ')' || ps.back() == ' ')) ps.pop_back();
  int p = std::stoi(ps);
  if (p < 0) throw std::invalid_argument("multiplicity must be >= 0");
  return {parse_rational(b), static_cast<unsigned>(p)};
}

// Quasi-homogeneity weights 0 < a_d <= ... <= a_1 < 1.
struct WeightVector {
  std::vector<Rational> alpha;

  Rational norm1() const {
    Rational s{0};
    for (const auto& a : alpha) s += a;
    return s;
  }
};

inline void validate_weights(const WeightVector& w) {
  if (w.alpha.empty()) throw std::invalid_argument("empty weight vector");
  for (size_t j = 0; j < w.alpha.size(); ++j) {
    if (!(w.alpha[j] > 0 && w.alpha[j] < 1))
      throw std::invalid_argument("weights must lie in (0,1)");
    if (j > 0 && w.alpha[j] > w.alpha[j - 1])
      throw std::invalid_argument("weights must be non-increasing");
  }
}

// Combination rule for quasi-homogeneous phases: merges the deformation
// index (a), the restricted-phase index (b, absent when the restricted
// critical set is empty) and the dilation term (-|alpha|_1, 0).
inline DecayIndex karpushkin_combine(const WeightVector& w, const DecayIndex& a,
                                     const std::optional<DecayIndex>& b) {
  validate_weights(w);
  Rational n1 = w.norm1();
  DecayIndex dil{-n1, 0};
  if (!b) return index_lex_max(a, dil);
  if (n1 + b->beta != 0) return index_lex_max(index_lex_max(a, *b), dil);
  return index_lex_max(a, DecayIndex{b->beta, b->p + 1});
}

}  // namespace latwave
