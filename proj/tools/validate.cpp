#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <random>

#include "cli.hpp"
#include "fastfpt/ctmc_io.hpp"
#include "fastfpt/immigration.hpp"
#include "fastfpt/montecarlo.hpp"
#include "fastfpt/quadrature.hpp"
#include "fastfpt/specfun.hpp"
#include "fastfpt/stats.hpp"

namespace fastfpt::cli {

namespace {

namespace sf = fastfpt::specfun;

struct Check {
  const char* name;
  double tolerance;
  bool known_gap;
  std::function<double()> measure;
};

double band_excess(std::vector<double> sample, const std::function<double(double)>& reference) {
  const stats::Ecdf ecdf(sample);
  const auto sorted = ecdf.sorted();
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double t = sorted[static_cast<std::size_t>((i + 0.5) / 20.0 * static_cast<double>(sorted.size() - 1))];
    const double ref = reference(t);
    worst = std::max(worst, std::fabs(ecdf.survival(t) - ref) / stats::binomial_band_halfwidth(ref, sorted.size(), 20));
  }
  return worst;
}

McCampaign campaign(ModelPtr model, double lambda, int k_max, const ExperimentConfig& c, std::uint64_t salt) {
  McCampaign mc;
  mc.model = std::move(model);
  mc.lambda = lambda;
  mc.k_max = k_max;
  mc.n_trials = c.trials;
  mc.seed = c.seed + salt;
  mc.workers = c.workers;
  return mc;
}

std::vector<Check> checks(const ExperimentConfig& c, const ModelPtr& model) {
  const auto exponential = std::make_shared<ExponentialFixture>(1.0);
  const auto halfline = std::make_shared<HalfLineDiffusion>(1.0, 1.0);
  std::vector<Check> out;

  out.push_back({"specfun.lambert_round_trip", 1e-10, false, [] {
                   std::mt19937_64 gen(1);
                   std::uniform_real_distribution<double> u(0.0, 1.0);
                   double worst = 0.0;
                   for (int i = 0; i < 10000; ++i) {
                     const double z0 = -sf::kInvE + u(gen) * (1000.0 + sf::kInvE);
                     const double w0 = sf::lambert_w0(z0);
                     const double z1 = -sf::kInvE + u(gen) * (sf::kInvE - 1e-8);
                     const double w1 = sf::lambert_wm1(z1);
                     worst = std::max({worst, std::fabs(w0 * std::exp(w0) - z0) / std::max(1.0, std::fabs(z0)),
                                       std::fabs(w1 * std::exp(w1) - z1) / std::max(1.0, std::fabs(z1))});
                   }
                   return worst;
                 }});
  out.push_back({"specfun.gamma_recurrence", 1e-9, false, [] {
                   std::mt19937_64 gen(2);
                   std::uniform_real_distribution<double> u(0.0, 1.0);
                   double worst = 0.0;
                   for (int i = 0; i < 10000; ++i) {
                     const double r = -5.0 + 10.0 * u(gen);
                     const double z = 1e-6 + 10.0 * u(gen);
                     const double lhs = sf::upper_incomplete_gamma(r + 1.0, z);
                     const double rhs = r * sf::upper_incomplete_gamma(r, z) + std::pow(z, r) * std::exp(-z);
                     worst = std::max(worst, std::fabs(lhs - rhs) / std::fabs(lhs));
                   }
                   return worst;
                 }});
  out.push_back({"specfun.digamma_step_ulps", 4.0, false, [] {
                   double worst = 0.0;
                   for (int k = 1; k < 1000; ++k) {
                     const double ulp = std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(sf::digamma(k + 1)));
                     worst = std::max(worst, std::fabs(sf::digamma(k + 1) - sf::digamma(k) - 1.0 / k) / ulp);
                   }
                   return worst;
                 }});
  out.push_back({"specfun.erf_limit", 1e-12, false, [] { return std::fabs(sf::erf(6.0) - 1.0); }});
  out.push_back({"specfun.golden_values", 1e-10, false, [] {
                   return std::max({std::fabs(sf::lambert_w0(1.0) / 0.56714329040978387 - 1.0),
                                    std::fabs(sf::lambert_wm1(-0.1) / -3.5771520639572972 - 1.0),
                                    std::fabs(sf::erf(0.5) / 0.5204998778130465 - 1.0),
                                    std::fabs(sf::upper_incomplete_gamma(-0.5, 2.0) / 0.030098757100186466 - 1.0),
                                    std::fabs(sf::gamma_derivative_at(1, 2) / 1.9781119906559451 - 1.0)});
                 }});

  out.push_back({"survival.monotone_violations", 0.0, false, [model] {
                   std::mt19937_64 gen(3);
                   std::lognormal_distribution<double> lt(std::log(model->time_scale()), 2.0);
                   double bad = 0.0;
                   for (int i = 0; i < 100; ++i) {
                     double a = lt(gen);
                     double b = lt(gen);
                     if (a > b) std::swap(a, b);
                     if (model->survival(a) < model->survival(b)) bad += 1.0;
                   }
                   return bad;
                 }});
  out.push_back({"survival.sampler_band_excess", 1.0, false, [model, &c] {
                   Rng rng(c.seed);
                   std::vector<double> sample(c.trials);
                   for (auto& x : sample) x = model->sample_tau(rng);
                   return band_excess(sample, [&model](double t) { return model->survival(t); });
                 }});
  out.push_back({"survival.short_time_law", 0.05, false, [model] {
                   const auto law = model->short_time_law();
                   const double t = is_power_law(law) ? 1e-3 : std::get<ExpLaw>(law).C / 20.0;
                   return std::fabs(model->cdf(t) / short_time_value(law, t) - 1.0);
                 }});
  out.push_back({"survival.sphere_series_agreement", 1e-10, false, [] {
                   const SphereEscape3D s(1.0, 1.0);
                   double worst = 0.0;
                   for (double t = 0.05; t <= 0.5; t += 0.005) {
                     worst = std::max(worst, std::fabs(1.0 - s.image_series_cdf(t) - s.eigen_series_survival(t)));
                   }
                   return worst;
                 }});
  out.push_back({"survival.grid_law_exact", 0.0, false, [] {
                   const auto law = std::get<PowerLaw>(make_grid_network(GridSpec{}).short_time_law());
                   return std::fabs(law.A - 0.5) + std::fabs(law.p - 3.0);
                 }});

  out.push_back({"immigration.phi_exponential", 1e-10, false, [exponential] {
                   return std::fabs(integral_one_minus_s(*exponential, 1.0).value - std::exp(-1.0));
                 }});
  out.push_back({"immigration.telescoping", 1e-12, false, [model] {
                   std::mt19937_64 gen(4);
                   std::uniform_real_distribution<double> u(0.0, 1.0);
                   const auto table = std::make_shared<const CumulativeIntegralTable>(model);
                   double worst = 0.0;
                   for (int i = 0; i < 200; ++i) {
                     const double lambda = std::pow(10.0, -2.0 + 6.0 * u(gen));
                     const double t = model->time_scale() * std::pow(10.0, -2.0 + 3.0 * u(gen));
                     const int k = 1 + static_cast<int>(6.0 * u(gen));
                     double sum = survival_with_immigration(*table, lambda, t);
                     for (int j = 1; j < k; ++j) sum += exactly_j_found_probability(*table, lambda, j, t);
                     worst = std::max(worst, std::fabs(sum - kth_survival(KthFptDistribution(table, lambda, k), t)));
                   }
                   return worst;
                 }});
  out.push_back({"immigration.kth_monotone_violations", 0.0, false, [model] {
                   const auto table = std::make_shared<const CumulativeIntegralTable>(model);
                   double bad = 0.0;
                   for (double lambda : {1.0, 100.0}) {
                     for (int k = 1; k <= 4; ++k) {
                       const KthFptDistribution d(table, lambda, k);
                       const KthFptDistribution next(table, lambda, k + 1);
                       double prev = 1.0;
                       for (double f = 1e-2; f < 1e2; f *= 1.5) {
                         const double t = f * model->time_scale();
                         const double s = kth_survival(d, t);
                         // Rounding near 1 is not a violation.
                         if (s > prev + 1e-15 || kth_survival(next, t) < s - 1e-15) bad += 1.0;
                         prev = s;
                       }
                     }
                   }
                   return bad;
                 }});
  out.push_back({"immigration.log_space_nonfinite", 0.0, false, [] {
                   double bad = 0.0;
                   for (double x : {0.0, 10.0, 700.0, 1e3, 1e4}) {
                     for (int k : {1, 5, 50}) {
                       const double v = kth_survival_from(x, 0.5, k);
                       if (!std::isfinite(v) || v < 0.0 || v > 1.0) bad += 1.0;
                     }
                   }
                   return bad;
                 }});
  out.push_back({"immigration.appendix_power", 0.01, false, [] {
                   const PowerLawFixture pw(1.0, 1.0);
                   const auto sc = scaling_power(PowerLaw{1.0, 1.0}, 1e8);
                   double worst = 0.0;
                   for (double x : {0.5, 1.0, 2.0}) {
                     worst = std::max(worst, std::fabs(1e8 * integral_one_minus_s(pw, sc.a * x).value / (x * x) - 1.0));
                   }
                   return worst;
                 }});
  out.push_back({"immigration.appendix_exp", 0.1, true, [halfline] {
                   const auto sc = scaling_constants(halfline->short_time_law(), 1e10);
                   double worst = 0.0;
                   for (double x : {-1.0, 0.0, 1.0}) {
                     worst = std::max(worst, std::fabs(1e10 * integral_one_minus_s(*halfline, sc.a * x + sc.b).value /
                                                           std::exp(x) - 1.0));
                   }
                   return worst;
                 }});

  out.push_back({"asymptotics.variant_agreement_1e12", 0.05, true, [halfline] {
                   const auto law = std::get<ExpLaw>(halfline->short_time_law());
                   const auto t = scaling_exp_theorem(law, 1e12);
                   const auto w = scaling_exp_lambertw(law, 1e12);
                   return std::max(std::fabs(t.a / w.a - 1.0), std::fabs(w.b - t.b) / t.a);
                 }});
  out.push_back({"asymptotics.zk_normalization", 1e-10, false, [] {
                   double worst = 0.0;
                   for (int k : {1, 2, 4}) {
                     const auto r = integrate_adaptive([k](double x) { return limit_density_zk(k, x); }, -40.0, 10.0,
                                                       1e-14, 1e-13);
                     worst = std::max(worst, std::fabs(r.value - 1.0));
                   }
                   return worst;
                 }});
  out.push_back({"asymptotics.limit_moments", 1e-8, false, [] {
                   double worst = 0.0;
                   for (int k : {1, 3}) {
                     for (int m : {1, 2}) {
                       const auto zk = LimitLaw::zk(k);
                       const auto yk = LimitLaw::yk(k, 1.0);
                       const double nz = integrate_adaptive([&](double x) { return std::pow(x, m) * zk.density(x); },
                                                            -40.0, 6.0, 1e-13, 1e-12).value;
                       const double ny = integrate_adaptive([&](double x) { return std::pow(x, m) * yk.density(x); },
                                                            0.0, 12.0, 1e-13, 1e-12).value;
                       worst = std::max({worst, std::fabs(nz - moment_limit_exp(k, m)),
                                         std::fabs(ny - moment_limit_power(k, 1.0, m))});
                     }
                   }
                   return worst;
                 }});
  out.push_back({"asymptotics.full_worse_than_leading", 0.0, false, [halfline] {
                   const auto table = std::make_shared<const CumulativeIntegralTable>(halfline);
                   const auto law = halfline->short_time_law();
                   double bad = 0.0;
                   for (int e = 3; e <= 8; ++e) {
                     const double lambda = std::pow(10.0, e);
                     const double exact = mean_kth_fpt_numeric(KthFptDistribution(table, lambda, 1)).value;
                     const double full = mean_estimate(law, lambda, 1, MeanVariant::Full);
                     const double lead = mean_estimate(law, lambda, 1, MeanVariant::Leading);
                     if (std::fabs(1.0 - full / exact) > std::fabs(1.0 - lead / exact)) bad += 1.0;
                   }
                   return bad;
                 }});

  out.push_back({"montecarlo.truncation_mismatches", 0.0, false, [exponential, &c] {
                   auto plain = campaign(exponential, 1.0, 3, c, 5);
                   plain.n_trials = 1000;
                   auto capped = plain;
                   capped.max_searchers = 10000;
                   const auto a = run_campaign(plain).samples();
                   const auto b = run_campaign(capped).samples();
                   double bad = 0.0;
                   for (std::size_t i = 0; i < a.size(); ++i) bad += a[i] != b[i] ? 1.0 : 0.0;
                   return bad;
                 }});
  out.push_back({"montecarlo.worker_mismatches", 0.0, false, [model, &c] {
                   auto one = campaign(model, 10.0, 2, c, 6);
                   one.n_trials = std::min<std::size_t>(c.trials, 5000);
                   one.workers = 1;
                   auto many = one;
                   many.workers = 8;
                   const auto a = run_campaign(one).samples();
                   const auto b = run_campaign(many).samples();
                   double bad = 0.0;
                   for (std::size_t i = 0; i < a.size(); ++i) bad += a[i] != b[i] ? 1.0 : 0.0;
                   return bad;
                 }});
  out.push_back({"montecarlo.first_time_band_excess", 1.0, false, [model, &c] {
                   const auto table = std::make_shared<const CumulativeIntegralTable>(model);
                   double worst = 0.0;
                   for (double lambda : {1.0, 10.0}) {
                     const auto r = run_campaign(campaign(model, lambda, 1, c, 7 + static_cast<std::uint64_t>(lambda)));
                     worst = std::max(worst, band_excess(r.column(1), [&](double t) {
                                        return survival_with_immigration(*table, lambda, t);
                                      }));
                   }
                   return worst;
                 }});
  out.push_back({"montecarlo.kth_band_excess", 1.0, false, [exponential, &c] {
                   const auto table = std::make_shared<const CumulativeIntegralTable>(exponential);
                   const auto r = run_campaign(campaign(exponential, 1.0, 3, c, 30));
                   double worst = 0.0;
                   for (int k = 1; k <= 3; ++k) {
                     const KthFptDistribution d(table, 1.0, k);
                     worst = std::max(worst, band_excess(r.column(k), [&d](double t) { return kth_survival(d, t); }));
                   }
                   return worst;
                 }});
  return out;
}

}  // namespace

ValidationReport cmd_validate(const ExperimentConfig& c) {
  c.validate();
  const auto model = model_from_json(c.model);
  ValidationReport report;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& check : checks(c, model)) {
    const double tol = check.tolerance * c.tolerance_scale;
    double measured = std::numeric_limits<double>::quiet_NaN();
    std::string error;
    try {
      measured = check.measure();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const bool ok = error.empty() && measured <= tol;
    nlohmann::json entry = {{"name", check.name},  {"measured", measured}, {"tolerance", tol},
                            {"passed", ok},        {"known_gap", check.known_gap}};
    if (!error.empty()) entry["error"] = error;
    list.push_back(std::move(entry));
    if (!ok && !check.known_gap) report.passed = false;
  }
  report.json = {{"fastfpt", kVersion}, {"command", "validate"}, {"model", model->name()},
                 {"passed", report.passed}, {"checks", std::move(list)}};
  return report;
}

}  // namespace fastfpt::cli
