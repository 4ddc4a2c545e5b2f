#ifndef FASTFPT_ASYMPTOTICS_HPP
#define FASTFPT_ASYMPTOTICS_HPP

#include <string>
#include <utility>

#include "fastfpt/survival.hpp"

namespace fastfpt {

enum class ScalingVariant { Theorem, LambertW };

std::string to_string(ScalingVariant v);
/// Accepts "theorem" or "lambertw"; throws std::invalid_argument otherwise.
ScalingVariant parse_scaling_variant(const std::string& s);

/// Centering b and scale a such that (T_k - b) / a has a nondegenerate
/// limit as lambda -> infinity. b == 0 exactly for the power-law class.
struct ScalingConstants {
  double a;
  double b;
  ScalingVariant variant;
};

/// a = (A lambda / (p + 1))^{-1/(p+1)}, b = 0.
ScalingConstants scaling_power(const PowerLaw& law, double lambda);

/// a = C / ln(C lambda)^2 and the three-term b. Requires C lambda > e.
ScalingConstants scaling_exp_theorem(const ExpLaw& law, double lambda);

/// a = C / ((p+2)^2 W (W+1)), b = C / ((p+2) W) with
/// W = W_branch[(A C^{p+1} lambda)^{1/(p+2)} / (p+2)], the principal branch
/// for p + 2 > 0 and the lower branch for p + 2 < 0. p + 2 == 0 and
/// out-of-range branch arguments throw std::domain_error.
ScalingConstants scaling_exp_lambertw(const ExpLaw& law, double lambda);

/// Dispatch on the class of `law`; `variant` only matters for ExpLaw.
ScalingConstants scaling_constants(const ShortTimeLaw& law, double lambda,
                                   ScalingVariant variant = ScalingVariant::LambertW);

/// Smallest lambda for which scaling_exp_lambertw is defined when p + 2 < 0
/// (the branch argument reaches -1/e there). Returns 0 when p + 2 > 0.
double min_lambda_lambertw(const ExpLaw& law);

/// Limit laws of the rescaled k-th fastest FPT.
class LimitLaw {
 public:
  enum class Kind { Weibull, Gumbel, Yk, Zk };

  /// Weibull(1, p + 1): P(X > x) = exp(-x^{p+1}), x >= 0.
  static LimitLaw weibull(double p);
  /// Gumbel(0, 1): P(X > x) = exp(-e^x).
  static LimitLaw gumbel();
  /// P(Y_k > x) = Gamma(k, x^{p+1}) / (k-1)!, x >= 0.
  static LimitLaw yk(int k, double p);
  /// f(x) = exp(k x - e^x) / (k-1)!.
  static LimitLaw zk(int k);
  /// Limit of T_k for the given short-time class.
  static LimitLaw for_law(const ShortTimeLaw& law, int k);

  Kind kind() const { return kind_; }
  int k() const { return k_; }
  double p() const { return p_; }
  std::string name() const;

  double survival(double x) const;
  double cdf(double x) const;
  double density(double x) const;
  /// Smallest x with cdf(x) >= q, q in (0, 1).
  double quantile(double q) const;
  /// E[X^m]; m >= 1, and m <= 2 for the Gumbel / Z_k family.
  double moment(int m) const;

 private:
  LimitLaw(Kind kind, int k, double p) : kind_(kind), k_(k), p_(p) {}
  bool is_power_family() const { return kind_ == Kind::Weibull || kind_ == Kind::Yk; }

  Kind kind_;
  int k_;
  double p_;
};

double limit_survival_yk(int k, double p, double x);
double limit_density_zk(int k, double x);

/// E[Y_k^m] = Gamma(k + m/(p+1)) / (k-1)!.
double moment_limit_power(int k, double p, int m);
/// E[Z_k^m]: psi(k) for m = 1, psi(k)^2 + psi'(k) for m = 2.
double moment_limit_exp(int k, int m);

enum class MeanVariant { Full, Leading };

/// Large-lambda estimate of E[T_k].
///   power class: a * Gamma(k + 1/(p+1)) / (k-1)!
///   exp class, Full: b + psi(k) a with the selected scaling constants
///   exp class, Leading: C / ln(C lambda)
/// Leading is not defined for the power class (std::domain_error).
double mean_estimate(const ShortTimeLaw& law, double lambda, int k, MeanVariant variant,
                     ScalingVariant scaling = ScalingVariant::LambertW);

/// N initial iid searchers with short-time law `law0` whose fastest FPT
/// roughly matches immigration at rate lambda.
struct EquivalentSearchers {
  ShortTimeLaw law0;
  double n;
};

EquivalentSearchers equivalent_initial_searchers(const ShortTimeLaw& law, double lambda);

}  // namespace fastfpt

#endif  // FASTFPT_ASYMPTOTICS_HPP
