#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "latwave/decay_fit.hpp"

using namespace latwave;

namespace {
DecaySeries synthetic(double beta, int p, double C, double t0 = 10.0, double t1 = 1e4,
                      int n = 25) {
  DecaySeries s;
  for (int i = 0; i < n; ++i) {
    double t = t0 * std::pow(t1 / t0, static_cast<double>(i) / (n - 1));
    s.t.push_back(t);
    s.magnitude.push_back(C * std::pow(t, beta) * std::pow(std::log(t), p));
  }
  return s;
}
}  // namespace

TEST_CASE("exact recovery of synthetic power laws") {
  auto f = fit_decay(synthetic(-2.0 / 3.0, 0, 2.5));
  CHECK_THAT(f.beta, Catch::Matchers::WithinAbs(-2.0 / 3.0, 1e-10));
  CHECK(f.p == 0);
  CHECK_THAT(f.C, Catch::Matchers::WithinRel(2.5, 1e-9));

  auto g = fit_decay(synthetic(-1.5, 1, 0.7));
  CHECK_THAT(g.beta, Catch::Matchers::WithinAbs(-1.5, 1e-10));
  CHECK(g.p == 1);
  CHECK_THAT(g.C, Catch::Matchers::WithinRel(0.7, 1e-9));
}

TEST_CASE("scale equivariance and time reparametrization") {
  auto base = synthetic(-1.25, 0, 1.0);
  auto scaled = base;
  for (auto& m : scaled.magnitude) m *= 37.0;
  auto f0 = fit_decay(base);
  auto f1 = fit_decay(scaled);
  CHECK_THAT(f1.beta, Catch::Matchers::WithinAbs(f0.beta, 1e-10));
  CHECK(f1.p == f0.p);
  CHECK_THAT(f1.C / f0.C, Catch::Matchers::WithinRel(37.0, 1e-9));

  auto stretched = base;
  for (auto& t : stretched.t) t *= 2.0;
  for (size_t i = 0; i < stretched.t.size(); ++i)
    stretched.magnitude[i] = std::pow(stretched.t[i], -1.25);
  auto f2 = fit_decay(stretched);
  CHECK_THAT(f2.beta, Catch::Matchers::WithinAbs(f0.beta, 1e-10));
}

TEST_CASE("series validation") {
  DecaySeries s;
  s.t = {1, 2, 3};
  s.magnitude = {1, 1, 1};
  CHECK_THROWS_AS(fit_decay(s), std::invalid_argument);  // too short

  auto good = synthetic(-1.0, 0, 1.0);
  auto bad = good;
  bad.magnitude[3] = -1.0;
  CHECK_THROWS_AS(fit_decay(bad), std::invalid_argument);

  auto shuffled = good;
  std::swap(shuffled.t[2], shuffled.t[5]);
  CHECK_THROWS_AS(fit_decay(shuffled), std::invalid_argument);

  auto narrow = synthetic(-1.0, 0, 1.0, 10.0, 50.0);
  CHECK_THROWS_AS(fit_decay(narrow), std::invalid_argument);
}

TEST_CASE("window trimming discards preasymptotic contamination") {
  auto s = synthetic(-1.0, 0, 1.0, 5.0, 1e5, 30);
  // contaminate the first decade heavily
  for (size_t i = 0; i < s.t.size(); ++i)
    if (s.t[i] < 50.0) s.magnitude[i] *= 1.0 + 5.0 / std::sqrt(s.t[i]);
  auto f = fit_decay(s);
  CHECK(f.window_begin > 0);
  CHECK_THAT(f.beta, Catch::Matchers::WithinAbs(-1.0, 5e-3));
}

TEST_CASE("plateau detection") {
  std::vector<double> flat(24, 3.0);
  auto p = sharpness_plateau(flat);
  CHECK_THAT(p.c0, Catch::Matchers::WithinAbs(3.0, 1e-12));
  CHECK(p.flatness == 0.0);
  CHECK(p.conclusive);

  // decaying correction: plateau emerges on the tail
  std::vector<double> v;
  for (int i = 0; i < 30; ++i) {
    double lam = 1e3 * std::pow(100.0, i / 29.0);
    v.push_back(1.0 + std::pow(lam, -1.0 / 6.0) * std::log(lam));
  }
  auto q = sharpness_plateau(v, 0.05);
  CHECK(q.conclusive);
  CHECK_THAT(q.c0, Catch::Matchers::WithinAbs(1.0, 0.1));

  std::vector<double> rising;
  for (int i = 0; i < 24; ++i) rising.push_back(1.0 + 0.2 * i);
  CHECK(!sharpness_plateau(rising, 0.05).conclusive);
}
