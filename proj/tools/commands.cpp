#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "cli.hpp"
#include "fastfpt/immigration.hpp"
#include "fastfpt/montecarlo.hpp"
#include "fastfpt/stats.hpp"

namespace fastfpt::cli {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> decades(int lo, int hi) {
  std::vector<double> out;
  for (int e = lo; e <= hi; ++e) out.push_back(std::pow(10.0, e));
  return out;
}

std::vector<double> lambdas_or(const ExperimentConfig& c, std::vector<double> fallback) {
  return c.lambdas.empty() ? fallback : c.lambdas;
}

std::vector<double> positive_lambdas(const ExperimentConfig& c, std::vector<double> fallback) {
  auto out = lambdas_or(c, std::move(fallback));
  for (double l : out) {
    if (!(l > 0.0)) throw std::invalid_argument("this command needs lambda > 0");
  }
  return out;
}

}  // namespace

Table cmd_survival(const ExperimentConfig& c) {
  c.validate();
  const auto model = model_from_json(c.model);
  const auto table = std::make_shared<const CumulativeIntegralTable>(model);
  std::vector<double> times = c.times;
  if (times.empty()) {
    for (int i = 0; i <= 24; ++i) times.push_back(model->time_scale() * std::pow(10.0, -2.0 + i / 6.0));
  }
  Table t{"survival", {"lambda", "k", "t", "S", "S_I", "kth_survival"}, {}};
  for (double lambda : lambdas_or(c, {1.0, 10.0, 100.0})) {
    for (int k : c.ks) {
      if (lambda == 0.0 && k > 1) throw std::invalid_argument("lambda = 0 admits only k = 1");
      const KthFptDistribution d(table, lambda, k);
      for (double s : times) {
        t.add_row({lambda, static_cast<double>(k), s, model->survival(s), survival_with_immigration(*table, lambda, s),
                   kth_survival(d, s)});
      }
    }
  }
  return t;
}

Table cmd_constants(const ExperimentConfig& c) {
  c.validate();
  const auto law = model_from_json(c.model)->short_time_law();
  Table t{"constants", {"lambda", "a_theorem", "b_theorem", "a_lambertw", "b_lambertw", "status"}, {}};
  for (double lambda : positive_lambdas(c, decades(2, 8))) {
    std::vector<Cell> row{lambda};
    std::string status;
    for (auto v : {ScalingVariant::Theorem, ScalingVariant::LambertW}) {
      try {
        const auto sc = scaling_constants(law, lambda, v);
        row.insert(row.end(), {sc.a, sc.b});
      } catch (const std::domain_error& e) {
        row.insert(row.end(), {kNaN, kNaN});
        status += (status.empty() ? "" : " | ") + to_string(v) + ": " + e.what();
      }
    }
    row.emplace_back(status.empty() ? std::string("ok") : status);
    t.add_row(std::move(row));
  }
  return t;
}

Table cmd_equiv(const ExperimentConfig& c) {
  c.validate();
  const auto law = model_from_json(c.model)->short_time_law();
  Table t{"equiv", {"lambda", "class", "A0", "p0", "C0", "N"}, {}};
  for (double lambda : positive_lambdas(c, decades(2, 8))) {
    const auto eq = equivalent_initial_searchers(law, lambda);
    if (const auto* p = std::get_if<PowerLaw>(&eq.law0)) {
      t.add_row({lambda, std::string("power"), p->A, p->p, kNaN, eq.n});
    } else {
      const auto& e = std::get<ExpLaw>(eq.law0);
      t.add_row({lambda, std::string("exp"), e.A, e.p, e.C, eq.n});
    }
  }
  return t;
}

Table cmd_mean_error(const ExperimentConfig& c) {
  c.validate();
  const auto model = model_from_json(c.model);
  const auto law = model->short_time_law();
  const auto table = std::make_shared<const CumulativeIntegralTable>(model);
  Table t{"mean-error",
          {"lambda", "k", "E_numeric", "T_full", "T_leading", "rel_err_full", "rel_err_leading", "status"},
          {}};
  for (double lambda : positive_lambdas(c, decades(2, 8))) {
    for (int k : c.ks) {
      double exact = kNaN;
      double full = kNaN;
      double lead = kNaN;
      std::string status = "ok";
      try {
        exact = mean_kth_fpt_numeric(KthFptDistribution(table, lambda, k)).value;
        full = mean_estimate(law, lambda, k, MeanVariant::Full, c.variant);
        if (!is_power_law(law)) lead = mean_estimate(law, lambda, k, MeanVariant::Leading);
      } catch (const std::exception& e) {
        status = e.what();
      }
      t.add_row({lambda, static_cast<double>(k), exact, full, lead, 1.0 - full / exact, 1.0 - lead / exact, status});
    }
  }
  return t;
}

Table cmd_density(const ExperimentConfig& c) {
  c.validate();
  const auto model = model_from_json(c.model);
  const auto law = model->short_time_law();
  const auto table = std::make_shared<const CumulativeIntegralTable>(model);
  const int k_max = *std::max_element(c.ks.begin(), c.ks.end());
  Table t{"density", {"lambda", "k", "x", "empirical", "analytic", "limit", "ks_limit", "ks_exact"}, {}};
  const auto lambdas = lambdas_or(c, {1e2, 1e3, 1e4});
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    const double lambda = lambdas[li];
    McCampaign mc;
    mc.model = model;
    mc.lambda = lambda;
    mc.k_max = k_max;
    mc.n_trials = c.trials;
    mc.seed = c.seed + li;
    mc.workers = c.workers;
    const auto result = run_campaign(mc);
    // Without immigration there is nothing to rescale.
    const ScalingConstants sc =
        lambda > 0.0 ? scaling_constants(law, lambda, c.variant) : ScalingConstants{1.0, 0.0, c.variant};
    for (int k : c.ks) {
      const KthFptDistribution dist(table, lambda, k);
      const LimitLaw limit = LimitLaw::for_law(law, k);
      auto x = result.column(k);
      for (auto& v : x) v = (v - sc.b) / sc.a;
      std::sort(x.begin(), x.end());
      const double ks_limit = lambda > 0.0 ? stats::ks_statistic(x, [&](double y) { return limit.cdf(y); }) : kNaN;
      const double ks_exact = stats::ks_statistic(x, [&](double y) {
        const double s = sc.a * y + sc.b;
        return s <= 0.0 ? 0.0 : 1.0 - kth_survival(dist, s);
      });
      const auto hist = stats::freedman_diaconis(x);
      for (std::size_t b = 0; b < hist.centers.size(); ++b) {
        const double y = hist.centers[b];
        const double s = sc.a * y + sc.b;
        const double analytic = s > 0.0 ? sc.a * kth_density(dist, s) : 0.0;
        t.add_row({lambda, static_cast<double>(k), y, hist.densities[b], analytic,
                   lambda > 0.0 ? limit.density(y) : kNaN, ks_limit, ks_exact});
      }
    }
  }
  return t;
}

}  // namespace fastfpt::cli
