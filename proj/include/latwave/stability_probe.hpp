#pragma once

#include <cmath>
#include <vector>

#include "latwave/decay_fit.hpp"
#include "latwave/oscillatory.hpp"

namespace latwave {

// Fitted (beta, p) with lexicographic order; numeric counterpart of the
// exact DecayIndex for measured data.
struct FittedIndex {
  double beta = 0.0;
  int p = 0;
  friend bool operator<(const FittedIndex& a, const FittedIndex& b) {
    if (a.beta != b.beta) return a.beta < b.beta;
    return a.p < b.p;
  }
};

struct ProbeTrialResult {
  std::uint64_t seed = 0;
  std::vector<double> critical_point;
  FittedIndex fitted;
  double residual = 0.0;
};

struct ProbeResult {
  FittedIndex worst;
  FittedIndex unperturbed;
  std::vector<ProbeTrialResult> trials;
};

// Perturbs the phase `trials` times within H_r(eps), locates the critical
// points of each perturbed phase, fits the decay of J with the amplitude
// recentered at every critical point, and reports the lexicographically
// worst fitted index. A finite trial set probes the uniform bound, it does
// not prove it.
inline ProbeResult uniform_stability_probe(const PolynomialPhase& phase,
                                           const PerturbationSpec& spec,
                                           const std::vector<double>& t_list, int trials,
                                           const AmplitudeSpec& amp, const OscGrid& grid = {}) {
  if (phase.dim() > 3) throw CostGuardError("stability probe limited to d <= 3");
  if (t_list.size() < 8) throw std::invalid_argument("fit window too short");

  auto fit_at = [&](const PolynomialPhase& S, const std::vector<double>& center,
                    double& residual) {
    DecaySeries series;
    series.t = t_list;
    for (double t : t_list) {
      JSample js = eval_J(t, S, amp, grid, center);
      series.magnitude.push_back(std::abs(js.value));
    }
    DecayFitResult fit = fit_decay(series);
    residual = fit.residual_rms;
    return FittedIndex{fit.beta, fit.p};
  };

  ProbeResult out;
  double res0 = 0.0;
  out.unperturbed = fit_at(phase, std::vector<double>(static_cast<size_t>(phase.dim()), 0.0), res0);
  out.worst = out.unperturbed;

  for (int tr = 0; tr < trials; ++tr) {
    PerturbationSpec s = spec;
    s.d = phase.dim();
    s.seed = spec.seed + static_cast<std::uint64_t>(tr);
    PolynomialPhase P = sample_perturbation(s);
    PolynomialPhase S = phase + P;

    auto crits = critical_points(S, amp.radius[0]);
    if (crits.empty()) crits.push_back(std::vector<double>(static_cast<size_t>(phase.dim()), 0.0));
    for (const auto& cp : crits) {
      ProbeTrialResult trial;
      trial.seed = s.seed;
      trial.critical_point = cp;
      trial.fitted = fit_at(S, cp, trial.residual);
      if (out.worst < trial.fitted) out.worst = trial.fitted;
      out.trials.push_back(std::move(trial));
    }
  }
  return out;
}

}  // namespace latwave
