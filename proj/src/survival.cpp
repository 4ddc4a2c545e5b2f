#include "fastfpt/survival.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fastfpt/specfun.hpp"

namespace fastfpt {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite and > 0");
  }
}

}  // namespace

ShortTimeLaw make_power_law(double A, double p) {
  require_positive(A, "PowerLaw.A");
  require_positive(p, "PowerLaw.p");
  return PowerLaw{A, p};
}

ShortTimeLaw make_exp_law(double A, double p, double C) {
  require_positive(A, "ExpLaw.A");
  require_positive(C, "ExpLaw.C");
  if (!std::isfinite(p)) throw std::invalid_argument("ExpLaw.p must be finite");
  return ExpLaw{A, p, C};
}

double short_time_value(const ShortTimeLaw& law, double t) {
  if (t <= 0.0) return 0.0;
  if (const auto* pw = std::get_if<PowerLaw>(&law)) return pw->A * std::pow(t, pw->p);
  const auto& ex = std::get<ExpLaw>(law);
  return ex.A * std::exp(ex.p * std::log(t) - ex.C / t);
}

std::string describe(const ShortTimeLaw& law) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* pw = std::get_if<PowerLaw>(&law)) {
    os << "PowerLaw{A=" << pw->A << ", p=" << pw->p << "}";
  } else {
    const auto& ex = std::get<ExpLaw>(law);
    os << "ExpLaw{A=" << ex.A << ", p=" << ex.p << ", C=" << ex.C << "}";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

double SurvivalModel::inverse_cdf(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("inverse_cdf: q must lie in (0, 1)");
  double lo = time_scale();
  double hi = lo;
  for (int i = 0; cdf(hi) < q; ++i) {
    if (i > 2000) throw std::runtime_error("inverse_cdf: could not bracket from above");
    hi *= 2.0;
  }
  for (int i = 0; cdf(lo) >= q; ++i) {
    if (i > 2000) return lo;
    lo *= 0.5;
  }
  while (hi / lo - 1.0 > 1e-14) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    (cdf(mid) < q ? lo : hi) = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------

HalfLineDiffusion::HalfLineDiffusion(double L, double D) : L_(L), D_(D) {
  require_positive(L, "HalfLineDiffusion.L");
  require_positive(D, "HalfLineDiffusion.D");
}

double HalfLineDiffusion::survival(double t) const {
  if (t <= 0.0) return 1.0;
  return clamp01(specfun::erf(std::sqrt(L_ * L_ / (4.0 * D_ * t))));
}

double HalfLineDiffusion::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  return clamp01(specfun::erfc(std::sqrt(L_ * L_ / (4.0 * D_ * t))));
}

double HalfLineDiffusion::tau_from_normal(double z) const { return L_ * L_ / (2.0 * D_ * z * z); }

double HalfLineDiffusion::sample_tau(Rng& rng) const {
  double z;
  do {
    z = rng.normal();
  } while (z == 0.0);
  return tau_from_normal(z);
}

ShortTimeLaw HalfLineDiffusion::short_time_law() const {
  return make_exp_law(std::sqrt(4.0 * D_ / (L_ * L_ * specfun::kPi)), 0.5, L_ * L_ / (4.0 * D_));
}

std::string HalfLineDiffusion::name() const {
  std::ostringstream os;
  os << "halfline(L=" << L_ << ",D=" << D_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

SphereEscape3D::SphereEscape3D(double L, double D) : L_(L), D_(D) {
  require_positive(L, "SphereEscape3D.L");
  require_positive(D, "SphereEscape3D.D");
}

double SphereEscape3D::image_series_cdf(double t) const {
  if (t <= 0.0) return 0.0;
  const double c = L_ * L_ / (4.0 * D_ * t);
  const double prefactor = std::sqrt(4.0 * L_ * L_ / (specfun::kPi * D_ * t));
  double sum = 0.0;
  for (int j = 0; j < 10000; ++j) {
    const double m = 2.0 * j + 1.0;
    const double term = std::exp(-c * m * m);
    sum += term;
    if (term < 1e-16 * sum || term == 0.0) break;
  }
  return prefactor * sum;
}

double SphereEscape3D::eigen_series_survival(double t) const {
  if (t <= 0.0) return 1.0;
  const double k = specfun::kPi * specfun::kPi * D_ * t / (L_ * L_);
  double sum = 0.0;
  for (int n = 1; n < 100000; ++n) {
    const double term = std::exp(-k * n * n);
    sum += (n % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return sum;
}

double SphereEscape3D::survival(double t) const {
  if (t <= 0.0) return 1.0;
  if (t <= crossover()) return clamp01(1.0 - image_series_cdf(t));
  return clamp01(eigen_series_survival(t));
}

double SphereEscape3D::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  if (t <= crossover()) return clamp01(image_series_cdf(t));
  return clamp01(1.0 - eigen_series_survival(t));
}

double SphereEscape3D::density(double t) const {
  if (t <= 0.0) return 0.0;
  if (t <= crossover()) {
    const double c = L_ * L_ / (4.0 * D_);
    const double prefactor = std::sqrt(4.0 * L_ * L_ / (specfun::kPi * D_));
    double sum = 0.0;
    for (int j = 0; j < 10000; ++j) {
      const double m2 = (2.0 * j + 1.0) * (2.0 * j + 1.0);
      const double e = std::exp(-c * m2 / t);
      const double term = e * (c * m2 * std::pow(t, -2.5) - 0.5 * std::pow(t, -1.5));
      sum += term;
      if (e < 1e-17 || std::fabs(term) < 1e-16 * std::fabs(sum)) break;
    }
    return std::max(0.0, prefactor * sum);
  }
  const double w = specfun::kPi * specfun::kPi * D_ / (L_ * L_);
  double sum = 0.0;
  for (int n = 1; n < 100000; ++n) {
    const double e = std::exp(-w * t * n * n);
    sum += (n % 2 == 1 ? 2.0 : -2.0) * w * n * n * e;
    if (e < 1e-17) break;
  }
  return std::max(0.0, sum);
}

double SphereEscape3D::inverse_cdf(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("inverse_cdf: q must lie in (0, 1)");
  // Bracket in t, then safeguarded Newton on cdf(t) - q.
  double lo = time_scale();
  double hi = lo;
  while (cdf(hi) < q) hi *= 2.0;
  while (cdf(lo) >= q) {
    lo *= 0.5;
    if (lo < 1e-300) return lo;
  }
  double t = std::sqrt(lo * hi);
  for (int it = 0; it < 200; ++it) {
    const double f = cdf(t) - q;
    if (f < 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    const double d = density(t);
    double next = (d > 0.0) ? t - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = std::sqrt(lo * hi);
    const double change = std::fabs(next - t);
    t = next;
    if (change <= 1e-13 * t || hi / lo - 1.0 < 1e-14) break;
  }
  return t;
}

double SphereEscape3D::sample_tau(Rng& rng) const { return inverse_cdf(rng.uniform()); }

ShortTimeLaw SphereEscape3D::short_time_law() const {
  return make_exp_law(std::sqrt(4.0 * L_ * L_ / (D_ * specfun::kPi)), -0.5, L_ * L_ / (4.0 * D_));
}

std::string SphereEscape3D::name() const {
  std::ostringstream os;
  os << "sphere(L=" << L_ << ",D=" << D_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

CtmcNetwork::CtmcNetwork(std::size_t n_states, std::vector<CtmcEdge> edges,
                         std::vector<std::pair<std::size_t, double>> initial,
                         std::vector<std::size_t> targets)
    : n_states_(n_states), initial_(n_states, 0.0), is_target_(n_states, false) {
  if (n_states < 2) throw std::invalid_argument("CtmcNetwork: need at least 2 states");
  if (targets.empty()) throw std::invalid_argument("CtmcNetwork: target set is empty");
  for (auto s : targets) {
    if (s >= n_states) throw std::invalid_argument("CtmcNetwork: target index out of range");
    is_target_[s] = true;
  }

  std::vector<std::vector<std::pair<std::size_t, double>>> rows(n_states);
  for (const auto& e : edges) {
    if (e.from >= n_states || e.to >= n_states) {
      throw std::invalid_argument("CtmcNetwork: edge index out of range");
    }
    if (!(e.rate >= 0.0) || !std::isfinite(e.rate)) {
      throw std::invalid_argument("CtmcNetwork: rates must be finite and non-negative");
    }
    if (e.from == e.to || e.rate == 0.0 || is_target_[e.from]) continue;
    rows[e.from].emplace_back(e.to, e.rate);
  }

  double mass = 0.0;
  for (const auto& [s, prob] : initial) {
    if (s >= n_states) throw std::invalid_argument("CtmcNetwork: initial state out of range");
    if (!(prob >= 0.0)) throw std::invalid_argument("CtmcNetwork: initial probabilities must be >= 0");
    if (prob > 0.0 && is_target_[s]) {
      throw std::invalid_argument("CtmcNetwork: initial distribution charges a target state");
    }
    initial_[s] += prob;
    mass += prob;
  }
  if (std::fabs(mass - 1.0) > 1e-12) {
    throw std::invalid_argument("CtmcNetwork: initial distribution must sum to 1");
  }

  row_start_.assign(n_states + 1, 0);
  exit_rate_.assign(n_states, 0.0);
  target_rate_.assign(n_states, 0.0);
  for (std::size_t s = 0; s < n_states; ++s) {
    row_start_[s + 1] = row_start_[s] + rows[s].size();
    for (const auto& [to, r] : rows[s]) {
      col_.push_back(to);
      rate_.push_back(r);
      exit_rate_[s] += r;
      if (is_target_[to]) target_rate_[s] += r;
    }
    if (!is_target_[s]) max_exit_ = std::max(max_exit_, exit_rate_[s]);
  }

  // Every state in the support of the initial distribution must reach a target.
  // Reverse breadth-first search from the targets.
  std::vector<bool> seen(n_states, false);
  std::deque<std::size_t> frontier;
  std::vector<std::vector<std::size_t>> reverse(n_states);
  for (std::size_t s = 0; s < n_states; ++s) {
    for (std::size_t k = row_start_[s]; k < row_start_[s + 1]; ++k) reverse[col_[k]].push_back(s);
  }
  for (std::size_t s = 0; s < n_states; ++s) {
    if (is_target_[s]) {
      seen[s] = true;
      frontier.push_back(s);
    }
  }
  while (!frontier.empty()) {
    const auto s = frontier.front();
    frontier.pop_front();
    for (auto prev : reverse[s]) {
      if (!seen[prev]) {
        seen[prev] = true;
        frontier.push_back(prev);
      }
    }
  }
  for (std::size_t s = 0; s < n_states; ++s) {
    if (initial_[s] > 0.0 && !seen[s]) {
      throw std::invalid_argument("CtmcNetwork: a target is not reachable from state " +
                                  std::to_string(s));
    }
  }
}

CtmcNetwork::Uniformized CtmcNetwork::uniformize(double t) const {
  if (t <= 0.0) return {1.0, 0.0};
  const double lt = max_exit_ * t;
  const double inv = 1.0 / max_exit_;
  std::vector<double> v = initial_;
  std::vector<double> next(n_states_, 0.0);
  double in_transient = 1.0;  // mass still in non-target states after n steps
  double absorbed = 0.0;      // mass absorbed within n steps

  double surv = 0.0;
  double cdf = 0.0;
  const double log_lt = std::log(lt);
  const std::size_t hard_cap =
      static_cast<std::size_t>(lt + 60.0 * std::sqrt(lt) + 500.0);
  for (std::size_t n = 0;; ++n) {
    const double log_w = -lt + static_cast<double>(n) * log_lt - std::lgamma(static_cast<double>(n) + 1.0);
    const double w = std::exp(log_w);
    surv += w * in_transient;
    cdf += w * absorbed;
    if (static_cast<double>(n) > lt) {
      // Poisson tail after n is bounded by w * ratio / (1 - ratio).
      const double ratio = lt / (static_cast<double>(n) + 1.0);
      const double tail = w * ratio / (1.0 - ratio);
      if (tail <= 1e-16 * std::max(cdf, 1e-300) || n >= hard_cap) break;
    }
    // One step of the uniformized chain.
    std::fill(next.begin(), next.end(), 0.0);
    double step_absorbed = 0.0;
    for (std::size_t s = 0; s < n_states_; ++s) {
      const double m = v[s];
      if (m == 0.0 || is_target_[s]) continue;
      next[s] += m * (1.0 - exit_rate_[s] * inv);
      for (std::size_t k = row_start_[s]; k < row_start_[s + 1]; ++k) {
        if (!is_target_[col_[k]]) next[col_[k]] += m * rate_[k] * inv;
      }
      step_absorbed += m * target_rate_[s] * inv;
    }
    v.swap(next);
    absorbed += step_absorbed;
    in_transient = 0.0;
    for (std::size_t s = 0; s < n_states_; ++s) in_transient += v[s];
    if (in_transient < 1e-300) {
      // Everything is absorbed; credit the remaining Poisson weight P(N > n).
      cdf += specfun::gamma_p(static_cast<double>(n) + 1.0, lt) * absorbed;
      break;
    }
  }
  return {clamp01(surv), clamp01(cdf)};
}

double CtmcNetwork::survival(double t) const { return uniformize(t).survival; }

double CtmcNetwork::cdf(double t) const { return uniformize(t).absorbed; }

double CtmcNetwork::sample_tau(Rng& rng) const {
  // Draw the start state.
  double u = rng.uniform();
  std::size_t state = 0;
  for (std::size_t s = 0; s < n_states_; ++s) {
    if (initial_[s] <= 0.0) continue;
    state = s;
    u -= initial_[s];
    if (u < 0.0) break;
  }
  double t = 0.0;
  while (!is_target_[state]) {
    const double total = exit_rate_[state];
    t += rng.exponential() / total;
    double pick = rng.uniform() * total;
    std::size_t k = row_start_[state];
    const std::size_t end = row_start_[state + 1];
    for (; k + 1 < end; ++k) {
      pick -= rate_[k];
      if (pick < 0.0) break;
    }
    state = col_[k];
  }
  return t;
}

ShortTimeLaw CtmcNetwork::short_time_law() const {
  // Rate-weighted path mass over non-target states; the first step at which
  // mass arrives in the target set gives p, and that mass divided by p! is A.
  std::vector<double> mass = initial_;
  std::vector<double> next(n_states_, 0.0);
  double factorial = 1.0;
  for (std::size_t step = 1; step <= n_states_; ++step) {
    factorial *= static_cast<double>(step);
    std::fill(next.begin(), next.end(), 0.0);
    double arrived = 0.0;
    for (std::size_t s = 0; s < n_states_; ++s) {
      if (mass[s] == 0.0 || is_target_[s]) continue;
      for (std::size_t k = row_start_[s]; k < row_start_[s + 1]; ++k) {
        const double flow = mass[s] * rate_[k];
        if (is_target_[col_[k]]) {
          arrived += flow;
        } else {
          next[col_[k]] += flow;
        }
      }
    }
    if (arrived > 0.0) return make_power_law(arrived / factorial, static_cast<double>(step));
    mass.swap(next);
  }
  throw std::logic_error("CtmcNetwork: no path to target");  // excluded by construction
}

double CtmcNetwork::time_scale() const {
  const auto law = std::get<PowerLaw>(short_time_law());
  return std::pow(law.A, -1.0 / law.p);
}

std::string CtmcNetwork::name() const {
  std::ostringstream os;
  os << "ctmc(n=" << n_states_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

PowerLawFixture::PowerLawFixture(double A, double p) : A_(A), p_(p) {
  require_positive(A, "PowerLawFixture.A");
  require_positive(p, "PowerLawFixture.p");
}

double PowerLawFixture::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  return std::min(A_ * std::pow(t, p_), 1.0);
}

double PowerLawFixture::survival(double t) const { return 1.0 - cdf(t); }

double PowerLawFixture::inverse_cdf(double q) const {
  if (!(q > 0.0 && q <= 1.0)) throw std::domain_error("inverse_cdf: q must lie in (0, 1]");
  return std::pow(q / A_, 1.0 / p_);
}

double PowerLawFixture::sample_tau(Rng& rng) const { return inverse_cdf(rng.uniform()); }

ShortTimeLaw PowerLawFixture::short_time_law() const { return make_power_law(A_, p_); }

double PowerLawFixture::time_scale() const { return std::pow(A_, -1.0 / p_); }

double PowerLawFixture::integral_cdf(double t) const {
  if (t <= 0.0) return 0.0;
  const double t_full = time_scale();  // cdf reaches 1 here
  if (t <= t_full) return A_ * std::pow(t, p_ + 1.0) / (p_ + 1.0);
  return t_full / (p_ + 1.0) + (t - t_full);
}

std::string PowerLawFixture::name() const {
  std::ostringstream os;
  os << "power(A=" << A_ << ",p=" << p_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

ExponentialFixture::ExponentialFixture(double rate) : rate_(rate) {
  require_positive(rate, "ExponentialFixture.rate");
}

double ExponentialFixture::survival(double t) const {
  if (t <= 0.0) return 1.0;
  return std::exp(-rate_ * t);
}

double ExponentialFixture::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  return -std::expm1(-rate_ * t);
}

double ExponentialFixture::inverse_cdf(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("inverse_cdf: q must lie in (0, 1)");
  return -std::log1p(-q) / rate_;
}

double ExponentialFixture::sample_tau(Rng& rng) const { return rng.exponential() / rate_; }

ShortTimeLaw ExponentialFixture::short_time_law() const { return make_power_law(rate_, 1.0); }

double ExponentialFixture::integral_cdf(double t) const {
  if (t <= 0.0) return 0.0;
  return t + std::expm1(-rate_ * t) / rate_;
}

std::string ExponentialFixture::name() const {
  std::ostringstream os;
  os << "exponential(rate=" << rate_ << ")";
  return os.str();
}

}  // namespace fastfpt
