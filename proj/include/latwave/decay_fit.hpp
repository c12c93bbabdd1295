#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace latwave {

// Sampled magnitudes |value(t)| with t strictly increasing.
struct DecaySeries {
  std::vector<double> t;
  std::vector<double> magnitude;
  std::string source;

  void validate() const {
    if (t.size() != magnitude.size()) throw std::invalid_argument("series size mismatch");
    if (t.size() < 8) throw std::invalid_argument("need >= 8 samples");
    for (size_t i = 0; i < t.size(); ++i) {
      if (!(t[i] > 0)) throw std::invalid_argument("t must be positive");
      if (i > 0 && !(t[i] > t[i - 1])) throw std::invalid_argument("t must increase");
      if (!(magnitude[i] > 0)) throw std::invalid_argument("magnitudes must be positive");
    }
    if (t.back() / t.front() < 10.0) throw std::invalid_argument("need at least one decade");
  }
};

struct DecayFitResult {
  double beta = 0.0;
  int p = 0;  // log-power, restricted to {0, 1}
  double C = 0.0;
  double residual_rms = 0.0;    // of the selected model, in log space
  double residual_p0 = 0.0;
  double residual_p1 = 0.0;
  size_t window_begin = 0;      // leading samples dropped by trimming
};

namespace detail {

struct LogFit {
  double beta, logC, rms;
};

// least squares of log m = logC + beta log t + p log log t
inline LogFit fit_loglog(const std::vector<double>& t, const std::vector<double>& m,
                         size_t begin, int p) {
  size_t n = t.size() - begin;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = begin; i < t.size(); ++i) {
    double x = std::log(t[i]);
    double y = std::log(m[i]) - p * std::log(std::log(t[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double den = n * sxx - sx * sx;
  double beta = (n * sxy - sx * sy) / den;
  double logC = (sy - beta * sx) / n;
  double ss = 0;
  for (size_t i = begin; i < t.size(); ++i) {
    double x = std::log(t[i]);
    double y = std::log(m[i]) - p * std::log(std::log(t[i]));
    double r = y - (logC + beta * x);
    ss += r * r;
  }
  return {beta, logC, std::sqrt(ss / n)};
}

}  // namespace detail

// Fits |m| ~ C t^beta log^p t with p in {0,1}; p picked by the smaller
// residual with a 5% margin (ties go to p = 0). Preasymptotic contamination
// handled by suffix-window trimming: the smallest k (whole leading samples
// dropped) whose residual is within 2x of the best suffix wins.
inline DecayFitResult fit_decay(const DecaySeries& series) {
  series.validate();
  const auto& t = series.t;
  const auto& m = series.magnitude;

  auto fit_at = [&](size_t begin) {
    auto f0 = detail::fit_loglog(t, m, begin, 0);
    auto f1 = detail::fit_loglog(t, m, begin, 1);
    return std::make_pair(f0, f1);
  };

  // candidate suffix windows: keep >= 8 samples and >= one decade
  std::vector<size_t> candidates;
  for (size_t k = 0; k + 8 <= t.size(); ++k) {
    if (t.back() / t[k] >= 10.0) candidates.push_back(k);
  }
  if (candidates.empty()) candidates.push_back(0);

  double best = -1.0;
  std::vector<std::pair<detail::LogFit, detail::LogFit>> fits;
  for (size_t k : candidates) {
    fits.push_back(fit_at(k));
    double r = std::min(fits.back().first.rms, fits.back().second.rms);
    if (best < 0 || r < best) best = r;
  }
  size_t chosen = 0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    double r = std::min(fits[i].first.rms, fits[i].second.rms);
    if (r <= 2.0 * best + 1e-300) {
      chosen = i;
      break;
    }
  }

  const auto& [f0, f1] = fits[chosen];
  DecayFitResult out;
  out.window_begin = candidates[chosen];
  out.residual_p0 = f0.rms;
  out.residual_p1 = f1.rms;
  bool pick1 = f1.rms < 0.95 * f0.rms;
  const auto& f = pick1 ? f1 : f0;
  out.p = pick1 ? 1 : 0;
  out.beta = f.beta;
  out.C = std::exp(f.logC);
  out.residual_rms = f.rms;
  return out;
}

struct PlateauResult {
  double c0 = 0.0;
  double flatness = 0.0;  // max relative deviation over the plateau window
  bool conclusive = false;
  size_t window_begin = 0;
};

// Plateau of a rescaled series (already multiplied by t^{-beta}): mean of
// the last third, flatness = max relative deviation there.
inline PlateauResult sharpness_plateau(const std::vector<double>& scaled,
                                       double flatness_bound = 0.05) {
  if (scaled.size() < 6) throw std::invalid_argument("need >= 6 samples");
  PlateauResult out;
  size_t begin = scaled.size() - scaled.size() / 3;
  out.window_begin = begin;
  double mean = 0.0;
  for (size_t i = begin; i < scaled.size(); ++i) mean += scaled[i];
  mean /= static_cast<double>(scaled.size() - begin);
  out.c0 = mean;
  double dev = 0.0;
  for (size_t i = begin; i < scaled.size(); ++i)
    dev = std::max(dev, std::fabs(scaled[i] - mean) / std::fabs(mean));
  out.flatness = dev;
  out.conclusive = dev <= flatness_bound && mean != 0.0;
  return out;
}

}  // namespace latwave
