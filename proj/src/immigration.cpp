#include "fastfpt/immigration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fastfpt/quadrature.hpp"

namespace fastfpt {

namespace {

// Geometric table grid: kOctavesBelow octaves under the model time scale,
// kOctavesAbove over it, kPerOctave nodes per octave.
constexpr int kOctavesBelow = 40;
constexpr int kOctavesAbove = 7;
constexpr int kPerOctave = 8;

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be finite and >= 0");
  }
}

QuadratureResult integrate_cdf(const SurvivalModel& model, double a, double b, double abs_tol,
                               double rel_tol) {
  auto f = [&model](double s) { return model.cdf(s); };
  auto r = integrate_adaptive(f, a, b, abs_tol, rel_tol);
  if (!r.converged) throw QuadratureError("integral of 1 - S did not converge", r);
  return r;
}

}  // namespace

Estimate integral_one_minus_s(const SurvivalModel& model, double t, double tol) {
  if (!(t >= 0.0)) throw std::domain_error("integral_one_minus_s: t must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("integral_one_minus_s: tol must be > 0");
  if (t == 0.0) return {};
  // Split geometrically so the flat start of exponential-class integrands
  // and the bulk are resolved separately.
  Estimate total;
  const double scale = model.time_scale();
  double lo = std::min(t, scale * 1e-3);
  const auto first = integrate_cdf(model, 0.0, lo, 0.0, tol);
  total.value = first.value;
  total.abs_error = first.abs_error;
  while (lo < t) {
    const double hi = std::min(t, lo * 4.0);
    const auto piece = integrate_cdf(model, lo, hi, 0.1 * tol * total.value, tol);
    total.value += piece.value;
    total.abs_error += piece.abs_error;
    lo = hi;
  }
  return total;
}

// ---------------------------------------------------------------------------

CumulativeIntegralTable::CumulativeIntegralTable(ModelPtr model, double tol)
    : model_(std::move(model)), tol_(tol) {
  if (!model_) throw std::invalid_argument("CumulativeIntegralTable: null model");
  if (!(tol > 0.0)) throw std::invalid_argument("CumulativeIntegralTable: tol must be > 0");
  const double scale = model_->time_scale();
  grid_.push_back(0.0);
  values_.push_back(0.0);
  for (int i = -kOctavesBelow * kPerOctave; i <= kOctavesAbove * kPerOctave; ++i) {
    const double t = scale * std::exp2(static_cast<double>(i) / kPerOctave);
    const double prev = values_.back();
    const auto piece = integrate_cdf(*model_, grid_.back(), t, 0.1 * tol_ * prev, tol_);
    grid_.push_back(t);
    values_.push_back(prev + piece.value);
  }
}

double CumulativeIntegralTable::operator()(double t) const {
  if (!(t > 0.0)) return 0.0;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  const auto i = static_cast<std::size_t>(std::distance(grid_.begin(), it)) - 1;
  const double base = values_[i];
  if (grid_[i] == t) return base;
  const auto piece = integrate_cdf(*model_, grid_[i], t, 0.1 * tol_ * base, tol_);
  return base + piece.value;
}

// ---------------------------------------------------------------------------

double survival_with_immigration(const SurvivalModel& model, double lambda, double t, double tol) {
  check_lambda(lambda);
  if (t <= 0.0) return 1.0;
  const double s = model.survival(t);
  if (lambda == 0.0) return s;
  return s * std::exp(-lambda * integral_one_minus_s(model, t, tol).value);
}

double survival_with_immigration(const CumulativeIntegralTable& table, double lambda, double t) {
  check_lambda(lambda);
  if (t <= 0.0) return 1.0;
  const double s = table.model().survival(t);
  if (lambda == 0.0) return s;
  return s * std::exp(-lambda * table(t));
}

double kth_survival_from(double x, double survival, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (x <= 0.0) return k == 1 ? survival : 1.0;
  const double log_x = std::log(x);
  double sum = 0.0;
  for (int j = 0; j <= k - 2; ++j) {
    sum += std::exp(-x + j * log_x - std::lgamma(j + 1.0));
  }
  if (survival > 0.0) {
    sum += std::exp(std::log(survival) - x + (k - 1) * log_x - std::lgamma(static_cast<double>(k)));
  }
  return std::clamp(sum, 0.0, 1.0);
}

double exactly_j_from(double x, double survival, int j) {
  if (j < 1) throw std::invalid_argument("j must be >= 1");
  const double found = 1.0 - survival;
  if (x <= 0.0) return j == 1 ? found : 0.0;
  const double log_x = std::log(x);
  double value = 0.0;
  if (found > 0.0) {
    value += std::exp(std::log(found) - x + (j - 1) * log_x - std::lgamma(static_cast<double>(j)));
  }
  if (survival > 0.0) {
    value += std::exp(std::log(survival) - x + j * log_x - std::lgamma(j + 1.0));
  }
  return std::clamp(value, 0.0, 1.0);
}

// ---------------------------------------------------------------------------

KthFptDistribution::KthFptDistribution(ModelPtr model, double lambda, int k, double tol)
    : KthFptDistribution(std::make_shared<const CumulativeIntegralTable>(std::move(model), tol),
                         lambda, k) {}

KthFptDistribution::KthFptDistribution(std::shared_ptr<const CumulativeIntegralTable> table,
                                       double lambda, int k)
    : table_(std::move(table)), lambda_(lambda), k_(k) {
  if (!table_) throw std::invalid_argument("KthFptDistribution: null table");
  check_lambda(lambda);
  if (k < 1) throw std::invalid_argument("KthFptDistribution: k must be >= 1");
}

double kth_survival(const KthFptDistribution& dist, double t) {
  if (t <= 0.0) return 1.0;
  const double s = dist.model().survival(t);
  const double x = dist.lambda() == 0.0 ? 0.0 : dist.lambda() * dist.table()(t);
  return kth_survival_from(x, s, dist.k());
}

double exactly_j_found_probability(const SurvivalModel& model, double lambda, int j, double t,
                                   double tol) {
  check_lambda(lambda);
  if (t <= 0.0) return 0.0;
  const double x = lambda == 0.0 ? 0.0 : lambda * integral_one_minus_s(model, t, tol).value;
  return exactly_j_from(x, model.survival(t), j);
}

double exactly_j_found_probability(const CumulativeIntegralTable& table, double lambda, int j,
                                   double t) {
  check_lambda(lambda);
  if (t <= 0.0) return 0.0;
  const double x = lambda == 0.0 ? 0.0 : lambda * table(t);
  return exactly_j_from(x, table.model().survival(t), j);
}

double default_density_step(const SurvivalModel& model, double t) {
  const auto law = model.short_time_law();
  const double scale = is_power_law(law) ? 1.0 : std::get<ExpLaw>(law).C;
  return std::min(1e-5 * std::max(t, scale), 0.5 * t);
}

double kth_density(const KthFptDistribution& dist, double t, double h) {
  if (!(t > 0.0)) throw std::domain_error("kth_density: t must be > 0");
  if (h <= 0.0) h = default_density_step(dist.model(), t);
  if (!(h < t)) throw std::domain_error("kth_density: step h must satisfy 0 < h < t");
  const double d = -(kth_survival(dist, t + h) - kth_survival(dist, t - h)) / (2.0 * h);
  return std::max(d, 0.0);
}

Estimate mean_kth_fpt_numeric(const KthFptDistribution& dist, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("mean_kth_fpt_numeric: tol must be > 0");
  if (dist.lambda() == 0.0 && dist.k() > 1) {
    throw std::domain_error("mean_kth_fpt_numeric: with lambda = 0 only one searcher exists, so k must be 1");
  }
  auto f = [&dist](double t) { return kth_survival(dist, t); };
  constexpr double kTailLevel = 1e-12;

  Estimate total;
  double lo = dist.model().time_scale() * 1e-9;
  {
    auto r = integrate_adaptive(f, 0.0, lo, 0.0, tol);
    if (!r.converged) throw QuadratureError("mean_kth_fpt_numeric", r);
    total.value = r.value;
    total.abs_error = r.abs_error;
  }
  for (int segment = 0;; ++segment) {
    const double hi = 2.0 * lo;
    auto r = integrate_adaptive(f, lo, hi, 0.01 * tol * total.value, tol);
    if (!r.converged) {
      r.value += total.value;
      r.abs_error += total.abs_error;
      throw QuadratureError("mean_kth_fpt_numeric", r);
    }
    total.value += r.value;
    total.abs_error += r.abs_error;
    lo = hi;
    const double tail_value = f(hi);
    if (tail_value < kTailLevel) {
      // Exponential extrapolation of the remaining tail from the local
      // log-slope over the last tenth of the segment.
      if (tail_value > 0.0) {
        const double earlier = f(0.9 * hi);
        const double rate = std::log(earlier / tail_value) / (0.1 * hi);
        if (rate > 0.0 && std::isfinite(rate)) {
          total.value += tail_value / rate;
          total.abs_error += tail_value / rate;
        } else {
          total.abs_error += tail_value * hi;
        }
      }
      break;
    }
    if (segment > 400) {
      throw QuadratureError("mean_kth_fpt_numeric: survival did not decay",
                            QuadratureResult{total.value, total.abs_error, 0, false});
    }
  }
  return total;
}

}  // namespace fastfpt
