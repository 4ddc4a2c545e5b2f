#ifndef FASTFPT_MONTECARLO_HPP
#define FASTFPT_MONTECARLO_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fastfpt/asymptotics.hpp"
#include "fastfpt/rng.hpp"
#include "fastfpt/stats.hpp"
#include "fastfpt/survival.hpp"

namespace fastfpt {

/// Seeded Monte Carlo configuration. Trial i draws from
/// Rng::for_stream(seed, i), so results do not depend on `workers`.
struct McCampaign {
  ModelPtr model;
  double lambda = 1.0;
  int k_max = 1;
  std::size_t n_trials = 1000;
  std::uint64_t seed = 0;
  int workers = 1;
  /// 0 applies the exact early-stopping rule. A positive value disables it
  /// and generates exactly that many searchers per trial.
  std::size_t max_searchers = 0;

  void validate() const;
};

struct TrialOutcome {
  std::vector<double> times;       // T_1 <= ... <= T_{k_max}
  std::uint64_t searchers = 0;     // searchers generated
};

/// One realization of the immigration process. Searcher n enters at
/// (sigma_1 + ... + sigma_{n-1}) / lambda and finds the target tau_n later.
/// Generation stops once the next arrival is past the current k_max-th
/// smallest candidate, since no later searcher can improve on it.
/// lambda == 0 is accepted for k_max == 1 (only the initial searcher).
TrialOutcome simulate_trial(const SurvivalModel& model, double lambda, int k_max, Rng& rng,
                            std::size_t max_searchers = 0);

class McResult {
 public:
  McResult(std::size_t n_trials, int k_max);

  std::size_t n_trials() const { return n_trials_; }
  int k_max() const { return k_max_; }

  /// Sample of T_k (k is 1-based) for the given trial.
  double at(std::size_t trial, int k) const { return samples_[trial * k_max_ + (k - 1)]; }
  std::span<const double> row(std::size_t trial) const {
    return {samples_.data() + trial * k_max_, static_cast<std::size_t>(k_max_)};
  }
  std::span<double> mutable_row(std::size_t trial) {
    return {samples_.data() + trial * k_max_, static_cast<std::size_t>(k_max_)};
  }
  const std::vector<double>& samples() const { return samples_; }

  /// All draws of T_k in trial order.
  std::vector<double> column(int k) const;
  stats::Moments summary(int k) const;
  stats::Ecdf ecdf(int k) const { return stats::Ecdf(column(k)); }

  double mean_searchers() const { return mean_searchers_; }
  void set_mean_searchers(double v) { mean_searchers_ = v; }

 private:
  void check_k(int k) const;

  std::size_t n_trials_;
  int k_max_;
  std::vector<double> samples_;  // row-major n_trials x k_max
  double mean_searchers_ = 0.0;
};

/// Trials split across `workers` OpenMP threads.
McResult run_campaign(const McCampaign& c);

/// Single-threaded reference; bit-identical to run_campaign.
McResult run_campaign_serial(const McCampaign& c);

double empirical_survival(const McResult& result, int k, double t);

/// KS distance between the law of (T_k - b) / a and `law`.
double ks_distance(const McResult& result, int k, const ScalingConstants& scaling,
                   const LimitLaw& law);

/// Minimum of n iid draws with cdf F, sampled exactly as
/// F^{-1}(1 - U^{1/n}).
double sample_min_of_iid(const SurvivalModel& model, double n, Rng& rng);

}  // namespace fastfpt

#endif  // FASTFPT_MONTECARLO_HPP
