#include "fastfpt/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fastfpt {

void McCampaign::validate() const {
  if (!model) throw std::invalid_argument("McCampaign: model is null");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("McCampaign: lambda must be >= 0");
  if (k_max < 1) throw std::invalid_argument("McCampaign: k_max must be >= 1");
  if (lambda == 0.0 && k_max > 1) {
    throw std::invalid_argument("McCampaign: lambda = 0 admits only one searcher (k_max must be 1)");
  }
  if (n_trials < 1) throw std::invalid_argument("McCampaign: n_trials must be >= 1");
  if (workers < 1) throw std::invalid_argument("McCampaign: workers must be >= 1");
  if (max_searchers != 0 && max_searchers < static_cast<std::size_t>(k_max)) {
    throw std::invalid_argument("McCampaign: max_searchers must be 0 or >= k_max");
  }
}

TrialOutcome simulate_trial(const SurvivalModel& model, double lambda, int k_max, Rng& rng,
                            std::size_t max_searchers) {
  if (k_max < 1) throw std::invalid_argument("simulate_trial: k_max must be >= 1");
  if (!(lambda >= 0.0)) throw std::invalid_argument("simulate_trial: lambda must be >= 0");
  if (lambda == 0.0 && k_max > 1) {
    throw std::invalid_argument("simulate_trial: lambda = 0 admits only one searcher");
  }
  const auto k = static_cast<std::size_t>(k_max);
  TrialOutcome out;
  auto& best = out.times;  // ascending, at most k entries
  best.reserve(k + 1);
  const bool capped = max_searchers > 0;
  const double inv_lambda = lambda > 0.0 ? 1.0 / lambda : std::numeric_limits<double>::infinity();

  double arrival = 0.0;
  for (;;) {
    if (capped) {
      if (out.searchers >= max_searchers) break;
    } else if (best.size() == k && arrival >= best.back()) {
      break;
    }
    const double candidate = arrival + model.sample_tau(rng);
    ++out.searchers;
    if (best.size() < k || candidate < best.back()) {
      if (best.size() == k) best.pop_back();
      best.insert(std::upper_bound(best.begin(), best.end(), candidate), candidate);
    }
    if (lambda == 0.0) break;
    arrival += rng.exponential() * inv_lambda;
  }
  return out;
}

// ---------------------------------------------------------------------------

McResult::McResult(std::size_t n_trials, int k_max)
    : n_trials_(n_trials), k_max_(k_max), samples_(n_trials * static_cast<std::size_t>(k_max), 0.0) {}

void McResult::check_k(int k) const {
  if (k < 1 || k > k_max_) {
    throw std::out_of_range("McResult: k = " + std::to_string(k) + " outside [1, " +
                            std::to_string(k_max_) + "]");
  }
}

std::vector<double> McResult::column(int k) const {
  check_k(k);
  std::vector<double> col(n_trials_);
  for (std::size_t i = 0; i < n_trials_; ++i) col[i] = at(i, k);
  return col;
}

stats::Moments McResult::summary(int k) const {
  const auto col = column(k);
  return stats::sample_moments(col);
}

namespace {

void run_one(const McCampaign& c, McResult& result, std::size_t trial, std::uint64_t& searchers) {
  Rng rng = Rng::for_stream(c.seed, trial);
  const auto outcome = simulate_trial(*c.model, c.lambda, c.k_max, rng, c.max_searchers);
  std::copy(outcome.times.begin(), outcome.times.end(), result.mutable_row(trial).begin());
  searchers += outcome.searchers;
}

}  // namespace

McResult run_campaign(const McCampaign& c) {
  c.validate();
  McResult result(c.n_trials, c.k_max);
  const auto n = static_cast<std::int64_t>(c.n_trials);
  std::uint64_t searchers = 0;
#pragma omp parallel for schedule(dynamic, 64) num_threads(c.workers) reduction(+ : searchers)
  for (std::int64_t i = 0; i < n; ++i) {
    run_one(c, result, static_cast<std::size_t>(i), searchers);
  }
  result.set_mean_searchers(static_cast<double>(searchers) / static_cast<double>(c.n_trials));
  return result;
}

McResult run_campaign_serial(const McCampaign& c) {
  c.validate();
  McResult result(c.n_trials, c.k_max);
  std::uint64_t searchers = 0;
  for (std::size_t i = 0; i < c.n_trials; ++i) run_one(c, result, i, searchers);
  result.set_mean_searchers(static_cast<double>(searchers) / static_cast<double>(c.n_trials));
  return result;
}

double empirical_survival(const McResult& result, int k, double t) {
  const auto col = result.column(k);
  const auto above = std::count_if(col.begin(), col.end(), [t](double x) { return x > t; });
  return static_cast<double>(above) / static_cast<double>(col.size());
}

double ks_distance(const McResult& result, int k, const ScalingConstants& scaling,
                   const LimitLaw& law) {
  auto col = result.column(k);
  for (auto& x : col) x = (x - scaling.b) / scaling.a;
  std::sort(col.begin(), col.end());
  return stats::ks_statistic(col, [&law](double x) { return law.cdf(x); });
}

double sample_min_of_iid(const SurvivalModel& model, double n, Rng& rng) {
  if (!(n >= 1.0)) throw std::invalid_argument("sample_min_of_iid: n must be >= 1");
  const double q = -std::expm1(std::log(rng.uniform()) / n);
  return model.inverse_cdf(q);
}

}  // namespace fastfpt
