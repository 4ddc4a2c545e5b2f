#ifndef FASTFPT_SURVIVAL_HPP
#define FASTFPT_SURVIVAL_HPP

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fastfpt/rng.hpp"

namespace fastfpt {

/// 1 - S(t) ~ A t^p as t -> 0+, with A > 0 and p > 0.
struct PowerLaw {
  double A;
  double p;
};

/// 1 - S(t) ~ A t^p exp(-C/t) as t -> 0+, with A > 0, C > 0, p real.
struct ExpLaw {
  double A;
  double p;
  double C;
};

using ShortTimeLaw = std::variant<PowerLaw, ExpLaw>;

/// Validating constructors; throw std::invalid_argument on bad parameters.
ShortTimeLaw make_power_law(double A, double p);
ShortTimeLaw make_exp_law(double A, double p, double C);

inline bool is_power_law(const ShortTimeLaw& law) { return std::holds_alternative<PowerLaw>(law); }

/// Leading-order value of 1 - S(t) predicted by the law.
double short_time_value(const ShortTimeLaw& law, double t);

std::string describe(const ShortTimeLaw& law);

/// Survival function S(t) = P(tau > t) of a single searcher together with an
/// exact sampler for tau. Implementations are immutable after construction
/// and may be shared between threads; samplers use the caller's Rng.
class SurvivalModel {
 public:
  virtual ~SurvivalModel() = default;

  virtual double survival(double t) const = 0;

  /// 1 - S(t). Models override this to avoid cancellation when S(t) ~ 1.
  virtual double cdf(double t) const { return 1.0 - survival(t); }

  virtual double sample_tau(Rng& rng) const = 0;

  virtual ShortTimeLaw short_time_law() const = 0;

  /// A characteristic time of the model (C for diffusive models,
  /// A^{-1/p} for power-law models). Used to pick step sizes and grids.
  virtual double time_scale() const = 0;

  /// Smallest t with cdf(t) >= q, for q in (0, 1). The default brackets and
  /// bisects in log t, then polishes with secant steps.
  virtual double inverse_cdf(double q) const;

  virtual std::string name() const = 0;
};

using ModelPtr = std::shared_ptr<const SurvivalModel>;

/// Brownian searcher started at distance L from an absorbing origin.
class HalfLineDiffusion final : public SurvivalModel {
 public:
  HalfLineDiffusion(double L, double D);

  double survival(double t) const override;
  double cdf(double t) const override;
  /// tau = L^2 / (2 D Z^2) with Z standard normal.
  double sample_tau(Rng& rng) const override;
  double tau_from_normal(double z) const;
  ShortTimeLaw short_time_law() const override;
  double time_scale() const override { return L_ * L_ / (4.0 * D_); }
  std::string name() const override;

  double L() const { return L_; }
  double D() const { return D_; }

 private:
  double L_;
  double D_;
};

/// Brownian searcher escaping a 3D sphere of radius L from its center.
class SphereEscape3D final : public SurvivalModel {
 public:
  SphereEscape3D(double L, double D);

  double survival(double t) const override;
  double cdf(double t) const override;
  /// Inverse-CDF sampling; accurate to ~1e-12 relative in tau.
  double sample_tau(Rng& rng) const override;
  ShortTimeLaw short_time_law() const override;
  double time_scale() const override { return L_ * L_ / (4.0 * D_); }
  double inverse_cdf(double q) const override;
  std::string name() const override;

  /// Method-of-images form of 1 - S(t); converges fast for small t.
  double image_series_cdf(double t) const;
  /// Eigenfunction form of S(t); converges fast for large t.
  double eigen_series_survival(double t) const;
  /// Switch point between the two series.
  double crossover() const { return 0.25 * L_ * L_ / D_; }
  /// d/dt (1 - S(t)), the FPT density.
  double density(double t) const;

  double L() const { return L_; }
  double D() const { return D_; }

 private:
  double L_;
  double D_;
};

struct CtmcEdge {
  std::size_t from;
  std::size_t to;
  double rate;
};

/// Continuous-time Markov chain searcher on a finite network. The searcher
/// starts from `initial` and the FPT is the hitting time of `targets`.
class CtmcNetwork final : public SurvivalModel {
 public:
  /// Throws std::invalid_argument when a rate is negative or non-finite, an
  /// index is out of range, the initial distribution does not sum to 1 or
  /// charges a target, or no target is reachable from its support.
  CtmcNetwork(std::size_t n_states, std::vector<CtmcEdge> edges,
              std::vector<std::pair<std::size_t, double>> initial, std::vector<std::size_t> targets);

  /// initial^T exp(t Q_sub) 1 by uniformization.
  double survival(double t) const override;
  /// Absorbed mass by uniformization; no cancellation at small t.
  double cdf(double t) const override;
  /// Gillespie simulation of the jump chain until a target is entered.
  double sample_tau(Rng& rng) const override;
  /// Shortest path length p and A = (sum over length-p paths of the rate
  /// products, weighted by the initial distribution) / p!.
  ShortTimeLaw short_time_law() const override;
  double time_scale() const override;
  std::string name() const override;

  std::size_t n_states() const { return n_states_; }
  bool is_target(std::size_t s) const { return is_target_[s]; }
  /// Largest total exit rate over non-target states.
  double uniformization_rate() const { return max_exit_; }

 private:
  struct Uniformized {
    double survival;
    double absorbed;
  };
  Uniformized uniformize(double t) const;

  std::size_t n_states_;
  std::vector<double> initial_;          // dense over all states
  std::vector<bool> is_target_;
  std::vector<std::size_t> row_start_;   // CSR over all states, targets dropped as sources
  std::vector<std::size_t> col_;
  std::vector<double> rate_;
  std::vector<double> exit_rate_;
  std::vector<double> target_rate_;      // rate from each state directly into the target set
  double max_exit_ = 0.0;
};

/// Test fixture with 1 - S(t) = min(A t^p, 1): exact power law, closed-form
/// integrals.
class PowerLawFixture final : public SurvivalModel {
 public:
  PowerLawFixture(double A, double p);

  double survival(double t) const override;
  double cdf(double t) const override;
  double sample_tau(Rng& rng) const override;
  ShortTimeLaw short_time_law() const override;
  double time_scale() const override;
  double inverse_cdf(double q) const override;
  std::string name() const override;

  /// int_0^t (1 - S(s)) ds in closed form.
  double integral_cdf(double t) const;

  double A() const { return A_; }
  double p() const { return p_; }

 private:
  double A_;
  double p_;
};

/// Test fixture with S(t) = exp(-rate t), i.e. a two-state chain.
class ExponentialFixture final : public SurvivalModel {
 public:
  explicit ExponentialFixture(double rate);

  double survival(double t) const override;
  double cdf(double t) const override;
  double sample_tau(Rng& rng) const override;
  ShortTimeLaw short_time_law() const override;
  double time_scale() const override { return 1.0 / rate_; }
  double inverse_cdf(double q) const override;
  std::string name() const override;

  /// int_0^t (1 - e^{-rate s}) ds = t - (1 - e^{-rate t}) / rate.
  double integral_cdf(double t) const;

  double rate() const { return rate_; }

 private:
  double rate_;
};

}  // namespace fastfpt

#endif  // FASTFPT_SURVIVAL_HPP
