#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "doctest.h"
#include "fastfpt/asymptotics.hpp"
#include "fastfpt/ctmc_io.hpp"
#include "fastfpt/immigration.hpp"
#include "fastfpt/montecarlo.hpp"
#include "support.hpp"

using namespace fastfpt;

namespace {

McCampaign campaign(ModelPtr model, double lambda, int k_max, std::size_t trials, std::uint64_t seed) {
  McCampaign c;
  c.model = std::move(model);
  c.lambda = lambda;
  c.k_max = k_max;
  c.n_trials = trials;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("campaign validation") {
  const auto m = std::make_shared<ExponentialFixture>(1.0);
  CHECK_THROWS_AS(run_campaign(campaign(nullptr, 1.0, 1, 10, 0)), std::invalid_argument);
  CHECK_THROWS_AS(run_campaign(campaign(m, -1.0, 1, 10, 0)), std::invalid_argument);
  CHECK_THROWS_AS(run_campaign(campaign(m, 0.0, 2, 10, 0)), std::invalid_argument);
  CHECK_THROWS_AS(run_campaign(campaign(m, 1.0, 0, 10, 0)), std::invalid_argument);
  CHECK_THROWS_AS(run_campaign(campaign(m, 1.0, 1, 0, 0)), std::invalid_argument);
  auto c = campaign(m, 1.0, 3, 10, 0);
  c.workers = 0;
  CHECK_THROWS_AS(run_campaign(c), std::invalid_argument);
  c.workers = 1;
  c.max_searchers = 2;
  CHECK_THROWS_AS(run_campaign(c), std::invalid_argument);
}

TEST_CASE("rows are sorted and positive") {
  const auto r = run_campaign(campaign(std::make_shared<HalfLineDiffusion>(1.0, 1.0), 100.0, 5, 2000, 1));
  for (std::size_t i = 0; i < r.n_trials(); ++i) {
    const auto row = r.row(i);
    REQUIRE(row[0] > 0.0);
    REQUIRE(std::is_sorted(row.begin(), row.end()));
  }
  CHECK(r.mean_searchers() > 1.0);
  CHECK_THROWS_AS(r.column(6), std::out_of_range);
  CHECK_THROWS_AS(empirical_survival(r, 0, 1.0), std::out_of_range);
  CHECK(empirical_survival(r, 1, 0.0) == 1.0);
}

TEST_CASE("without immigration the first time is the initial searcher's") {
  const auto m = std::make_shared<ExponentialFixture>(2.0);
  Rng a(77);
  Rng b(77);
  const auto out = simulate_trial(*m, 0.0, 1, a);
  CHECK(out.searchers == 1);
  CHECK(out.times[0] == m->sample_tau(b));
}

TEST_CASE("truncation never changes the result") {
  const auto m = std::make_shared<ExponentialFixture>(1.0);
  for (auto [cap, trials] : {std::pair<std::size_t, std::size_t>{10000, 10000}, {1000000, 100}}) {
    auto truncated = campaign(m, 1.0, 3, trials, 2024);
    auto capped = truncated;
    capped.max_searchers = cap;
    const auto rt = run_campaign(truncated);
    const auto rc = run_campaign(capped);
    INFO("cap = " << cap);
    CHECK(rt.samples() == rc.samples());
    CHECK(rc.mean_searchers() == static_cast<double>(cap));
    CHECK(rt.mean_searchers() < 20.0);
  }
}

TEST_CASE("results do not depend on the worker count") {
  auto c = campaign(std::make_shared<SphereEscape3D>(1.0, 1.0), 50.0, 3, 3000, 99);
  c.workers = 1;
  const auto one = run_campaign(c);
  c.workers = 8;
  const auto eight = run_campaign(c);
  const auto serial = run_campaign_serial(c);
  CHECK(one.samples() == eight.samples());
  CHECK(one.samples() == serial.samples());
  CHECK(one.mean_searchers() == eight.mean_searchers());
  c.seed = 100;
  CHECK(run_campaign(c).samples() != one.samples());
}

TEST_CASE("probability that nobody has found the target by t = 1") {
  const auto r = run_campaign(campaign(std::make_shared<ExponentialFixture>(1.0), 1.0, 1, 1000000, 7));
  const double p = 0.254646380043582;
  const double sigma = std::sqrt(p * (1.0 - p) / 1e6);
  const double emp = empirical_survival(r, 1, 1.0);
  INFO("empirical " << emp);
  CHECK(std::fabs(emp - p) <= 3.0 * sigma);
}

TEST_CASE("mean first time matches the quadrature mean") {
  const auto m = std::make_shared<ExponentialFixture>(1.0);
  const auto r = run_campaign(campaign(m, 1.0, 2, 200000, 8));
  for (int k : {1, 2}) {
    const auto s = r.summary(k);
    const double exact = mean_kth_fpt_numeric(KthFptDistribution(m, 1.0, k)).value;
    INFO("k = " << k << ", mc " << s.mean << " +- " << s.std_error << ", exact " << exact);
    CHECK(std::fabs(s.mean - exact) <= 3.0 * s.std_error);
  }
}

TEST_CASE("first time matches the immigration transform for every model") {
  const std::vector<ModelPtr> models = {
      std::make_shared<HalfLineDiffusion>(1.0, 1.0), std::make_shared<SphereEscape3D>(1.0, 1.0),
      std::make_shared<CtmcNetwork>(make_grid_network(GridSpec{})), std::make_shared<PowerLawFixture>(1.0, 1.0),
      std::make_shared<ExponentialFixture>(1.0)};
  std::uint64_t seed = 300;
  for (const auto& m : models) {
    const auto table = std::make_shared<const CumulativeIntegralTable>(m);
    for (double lambda : {1.0, 10.0}) {
      const auto r = run_campaign(campaign(m, lambda, 1, 100000, seed++));
      const auto col = r.column(1);
      const auto report = testing::band_check(col, testing::quantile_grid(col),
                                              [&](double t) { return survival_with_immigration(*table, lambda, t); });
      INFO(m->name() << ", lambda = " << lambda << ", worst excess " << report.worst_excess << " at " << report.at);
      CHECK(report.worst_excess <= 1.0);
    }
  }
}

TEST_CASE("k-th times match the order-statistic survival") {
  const std::vector<ModelPtr> models = {std::make_shared<ExponentialFixture>(1.0),
                                        std::make_shared<HalfLineDiffusion>(1.0, 1.0)};
  std::uint64_t seed = 400;
  for (const auto& m : models) {
    const auto table = std::make_shared<const CumulativeIntegralTable>(m);
    const double lambda = 10.0;
    const auto r = run_campaign(campaign(m, lambda, 3, 100000, seed++));
    for (int k : {1, 2, 3}) {
      const KthFptDistribution d(table, lambda, k);
      const auto col = r.column(k);
      const auto report =
          testing::band_check(col, testing::quantile_grid(col), [&d](double t) { return kth_survival(d, t); });
      INFO(m->name() << ", k = " << k << ", worst excess " << report.worst_excess << " at " << report.at);
      CHECK(report.worst_excess <= 1.0);
    }
  }
}

TEST_CASE("searcher count grows with lambda") {
  const auto m = std::make_shared<ExponentialFixture>(1.0);
  double prev = 0.0;
  for (double lambda : {1.0, 10.0, 100.0}) {
    const auto r = run_campaign(campaign(m, lambda, 2, 5000, 5));
    // Roughly lambda * E[T_2] plus the overshoot of the stopping rule.
    const double bound = 1.0 + lambda * 3.0 * r.summary(2).mean + 5.0;
    INFO("lambda = " << lambda << ", mean searchers " << r.mean_searchers());
    CHECK(r.mean_searchers() > prev);
    CHECK(r.mean_searchers() < bound);
    prev = r.mean_searchers();
  }
}

TEST_CASE("KS distance under the null") {
  // Samples drawn from the limit law itself.
  const auto law = LimitLaw::gumbel();
  const std::size_t n = 20000;
  McResult r(n, 1);
  Rng rng(12);
  for (std::size_t i = 0; i < n; ++i) r.mutable_row(i)[0] = law.quantile(rng.uniform());
  const double d = ks_distance(r, 1, ScalingConstants{1.0, 0.0, ScalingVariant::LambertW}, law);
  CHECK(d <= 1.63 / std::sqrt(static_cast<double>(n)));
  // A shifted transform is detected.
  CHECK(ks_distance(r, 1, ScalingConstants{1.0, -0.5, ScalingVariant::LambertW}, law) > 0.1);
}

TEST_CASE("minimum of iid searchers") {
  const auto m = std::make_shared<ExponentialFixture>(1.0);
  Rng rng(3);
  std::vector<double> sample(50000);
  for (auto& x : sample) x = sample_min_of_iid(*m, 10.0, rng);
  // The minimum of 10 unit exponentials is exponential with rate 10.
  const auto report = testing::band_check(sample, testing::quantile_grid(sample),
                                          [](double t) { return std::exp(-10.0 * t); });
  CHECK(report.worst_excess <= 1.0);
  CHECK_THROWS_AS(sample_min_of_iid(*m, 0.5, rng), std::invalid_argument);
}

TEST_CASE("stats helpers") {
  const std::vector<double> xs = {3.0, 1.0, 2.0, 2.0};
  const stats::Ecdf e(xs);
  CHECK(e.cdf(2.0) == 0.75);
  CHECK(e.survival(2.0) == 0.25);
  CHECK(e.cdf(0.0) == 0.0);
  const auto mo = stats::sample_moments(xs);
  CHECK(mo.mean == doctest::Approx(2.0));
  CHECK(mo.variance == doctest::Approx(2.0 / 3.0));
  CHECK(stats::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  const std::vector<double> a = {1.0, 2.0, 3.0};
  const std::vector<double> b = {1.5, 2.5, 3.5};
  CHECK(stats::ks_two_sample(a, b) == doctest::Approx(1.0 / 3.0));
  std::vector<double> u(10000);
  Rng rng(1);
  for (auto& x : u) x = rng.uniform();
  const auto h = stats::freedman_diaconis(u);
  double mass = 0.0;
  for (double d : h.densities) mass += d * h.width;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h.centers.size() > 10);
}
