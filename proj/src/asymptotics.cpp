#include "fastfpt/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "fastfpt/specfun.hpp"

namespace fastfpt {

std::string to_string(ScalingVariant v) {
  return v == ScalingVariant::Theorem ? "theorem" : "lambertw";
}

ScalingVariant parse_scaling_variant(const std::string& s) {
  if (s == "theorem") return ScalingVariant::Theorem;
  if (s == "lambertw") return ScalingVariant::LambertW;
  throw std::invalid_argument("unknown scaling variant '" + s + "' (expected theorem|lambertw)");
}

namespace {

void check_lambda_positive(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("lambda must be finite and > 0");
  }
}

}  // namespace

ScalingConstants scaling_power(const PowerLaw& law, double lambda) {
  check_lambda_positive(lambda);
  const double a = std::pow(law.A * lambda / (law.p + 1.0), -1.0 / (law.p + 1.0));
  return {a, 0.0, ScalingVariant::Theorem};
}

ScalingConstants scaling_exp_theorem(const ExpLaw& law, double lambda) {
  check_lambda_positive(lambda);
  const double c_lambda = law.C * lambda;
  if (!(c_lambda > specfun::kE)) {
    throw std::domain_error("scaling_exp_theorem: requires C * lambda > e");
  }
  const double l = std::log(c_lambda);
  const double ll = std::log(l);
  const double a = law.C / (l * l);
  const double b = law.C / l + law.C * (law.p + 2.0) * ll / (l * l) -
                   law.C * std::log(law.A * std::pow(law.C, law.p)) / (l * l);
  return {a, b, ScalingVariant::Theorem};
}

ScalingConstants scaling_exp_lambertw(const ExpLaw& law, double lambda) {
  check_lambda_positive(lambda);
  const double q = law.p + 2.0;
  if (q == 0.0) {
    throw std::domain_error("scaling_exp_lambertw: undefined for p + 2 = 0; use the theorem variant");
  }
  // Work with logs: A C^{p+1} lambda can be far outside double range for
  // extreme lambda even when its 1/(p+2) power is not.
  const double log_base = std::log(law.A) + (law.p + 1.0) * std::log(law.C) + std::log(lambda);
  const double arg = std::exp(log_base / q) / q;
  double w;
  if (q > 0.0) {
    w = specfun::lambert_w0(arg);
  } else {
    if (arg < -specfun::kInvE) {
      throw std::domain_error("scaling_exp_lambertw: lambda below the lower-branch minimum " +
                              std::to_string(min_lambda_lambertw(law)));
    }
    w = specfun::lambert_wm1(arg);
  }
  const double a = law.C / (q * q * w * (w + 1.0));
  const double b = law.C / (q * w);
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("scaling_exp_lambertw: lambda too small for positive constants");
  }
  return {a, b, ScalingVariant::LambertW};
}

ScalingConstants scaling_constants(const ShortTimeLaw& law, double lambda, ScalingVariant variant) {
  if (const auto* pw = std::get_if<PowerLaw>(&law)) return scaling_power(*pw, lambda);
  const auto& ex = std::get<ExpLaw>(law);
  return variant == ScalingVariant::Theorem ? scaling_exp_theorem(ex, lambda)
                                            : scaling_exp_lambertw(ex, lambda);
}

double min_lambda_lambertw(const ExpLaw& law) {
  const double q = law.p + 2.0;
  if (q >= 0.0) return 0.0;
  return std::pow(-q / specfun::kE, q) / (law.A * std::pow(law.C, law.p + 1.0));
}

// ---------------------------------------------------------------------------

LimitLaw LimitLaw::weibull(double p) {
  if (!(p >= 0.0)) throw std::invalid_argument("Weibull limit requires p >= 0");
  return LimitLaw(Kind::Weibull, 1, p);
}

LimitLaw LimitLaw::gumbel() { return LimitLaw(Kind::Gumbel, 1, 0.0); }

LimitLaw LimitLaw::yk(int k, double p) {
  if (k < 1) throw std::invalid_argument("Y_k requires k >= 1");
  if (!(p >= 0.0)) throw std::invalid_argument("Y_k requires p >= 0");
  return LimitLaw(Kind::Yk, k, p);
}

LimitLaw LimitLaw::zk(int k) {
  if (k < 1) throw std::invalid_argument("Z_k requires k >= 1");
  return LimitLaw(Kind::Zk, k, 0.0);
}

LimitLaw LimitLaw::for_law(const ShortTimeLaw& law, int k) {
  if (const auto* pw = std::get_if<PowerLaw>(&law)) {
    return k == 1 ? weibull(pw->p) : yk(k, pw->p);
  }
  return k == 1 ? gumbel() : zk(k);
}

std::string LimitLaw::name() const {
  switch (kind_) {
    case Kind::Weibull:
      return "Weibull(1," + std::to_string(p_ + 1.0) + ")";
    case Kind::Gumbel:
      return "Gumbel(0,1)";
    case Kind::Yk:
      return "Y_" + std::to_string(k_) + "(p=" + std::to_string(p_) + ")";
    case Kind::Zk:
      return "Z_" + std::to_string(k_);
  }
  return "?";
}

double LimitLaw::survival(double x) const {
  if (is_power_family()) {
    if (x <= 0.0) return 1.0;
    return specfun::gamma_q(k_, std::pow(x, p_ + 1.0));
  }
  return specfun::gamma_q(k_, std::exp(x));
}

double LimitLaw::cdf(double x) const {
  if (is_power_family()) {
    if (x <= 0.0) return 0.0;
    return specfun::gamma_p(k_, std::pow(x, p_ + 1.0));
  }
  return specfun::gamma_p(k_, std::exp(x));
}

double LimitLaw::density(double x) const {
  if (is_power_family()) {
    if (x <= 0.0) return 0.0;
    const double y = std::pow(x, p_ + 1.0);
    return (p_ + 1.0) * std::pow(x, p_) *
           std::exp((k_ - 1) * std::log(y) - y - std::lgamma(static_cast<double>(k_)));
  }
  return limit_density_zk(k_, x);
}

double LimitLaw::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("LimitLaw::quantile: q must lie in (0, 1)");
  if (kind_ == Kind::Weibull) return std::pow(-std::log1p(-q), 1.0 / (p_ + 1.0));
  if (kind_ == Kind::Gumbel) return std::log(-std::log1p(-q));
  double lo;
  double hi;
  if (is_power_family()) {
    lo = 0.0;
    hi = 1.0;
    while (cdf(hi) < q) hi *= 2.0;
  } else {
    lo = -1.0;
    hi = 1.0;
    while (cdf(lo) >= q) lo *= 2.0;
    while (cdf(hi) < q) hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::fabs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < q ? lo : hi) = mid;
  }
  return hi;
}

double LimitLaw::moment(int m) const {
  if (is_power_family()) return moment_limit_power(k_, p_, m);
  return moment_limit_exp(k_, m);
}

double limit_survival_yk(int k, double p, double x) { return LimitLaw::yk(k, p).survival(x); }

double limit_density_zk(int k, double x) {
  if (k < 1) throw std::invalid_argument("Z_k requires k >= 1");
  return std::exp(k * x - std::exp(x) - std::lgamma(static_cast<double>(k)));
}

double moment_limit_power(int k, double p, int m) {
  if (k < 1 || m < 1 || !(p >= 0.0)) {
    throw std::domain_error("moment_limit_power: requires k >= 1, m >= 1, p >= 0");
  }
  return std::exp(std::lgamma(k + m / (p + 1.0)) - std::lgamma(static_cast<double>(k)));
}

double moment_limit_exp(int k, int m) {
  if (k < 1) throw std::domain_error("moment_limit_exp: requires k >= 1");
  if (m != 1 && m != 2) throw std::domain_error("moment_limit_exp: only m = 1, 2 are supported");
  return specfun::gamma_derivative_at(k, m) / std::tgamma(static_cast<double>(k));
}

double mean_estimate(const ShortTimeLaw& law, double lambda, int k, MeanVariant variant,
                     ScalingVariant scaling) {
  if (k < 1) throw std::domain_error("mean_estimate: k must be >= 1");
  if (const auto* pw = std::get_if<PowerLaw>(&law)) {
    if (variant == MeanVariant::Leading) {
      throw std::domain_error("mean_estimate: the leading-order estimate is defined for the exponential class only");
    }
    const auto sc = scaling_power(*pw, lambda);
    return sc.a * moment_limit_power(k, pw->p, 1);
  }
  const auto& ex = std::get<ExpLaw>(law);
  if (variant == MeanVariant::Leading) {
    check_lambda_positive(lambda);
    if (!(ex.C * lambda > 1.0)) throw std::domain_error("mean_estimate: requires C * lambda > 1");
    return ex.C / std::log(ex.C * lambda);
  }
  const auto sc = scaling == ScalingVariant::Theorem ? scaling_exp_theorem(ex, lambda)
                                                     : scaling_exp_lambertw(ex, lambda);
  return sc.b + specfun::digamma(k) * sc.a;
}

EquivalentSearchers equivalent_initial_searchers(const ShortTimeLaw& law, double lambda) {
  check_lambda_positive(lambda);
  if (const auto* pw = std::get_if<PowerLaw>(&law)) {
    return {make_power_law(std::pow(pw->A, 1.0 + 1.0 / pw->p) / (pw->p + 1.0), pw->p + 1.0),
            lambda * std::pow(pw->A, -1.0 / pw->p)};
  }
  const auto& ex = std::get<ExpLaw>(law);
  return {make_exp_law(ex.A / (ex.C * ex.C), ex.p + 2.0, ex.C), lambda * ex.C};
}

}  // namespace fastfpt
