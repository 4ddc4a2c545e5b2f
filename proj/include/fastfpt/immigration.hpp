#ifndef FASTFPT_IMMIGRATION_HPP
#define FASTFPT_IMMIGRATION_HPP

#include <memory>
#include <span>
#include <vector>

#include "fastfpt/survival.hpp"

namespace fastfpt {

/// A computed quantity together with its estimated absolute error.
struct Estimate {
  double value = 0.0;
  double abs_error = 0.0;
};

/// Phi(t) = int_0^t (1 - S(s)) ds by adaptive quadrature to relative
/// tolerance `tol`. Throws QuadratureError if the tolerance is not reached.
Estimate integral_one_minus_s(const SurvivalModel& model, double t, double tol = 1e-10);

/// Phi(t) tabulated on a geometric grid so that repeated evaluations cost a
/// single short quadrature from the nearest node. Immutable once built.
class CumulativeIntegralTable {
 public:
  explicit CumulativeIntegralTable(ModelPtr model, double tol = 1e-10);

  /// Phi(t); non-decreasing, Phi(0) = 0.
  double operator()(double t) const;

  const SurvivalModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  double tolerance() const { return tol_; }
  std::span<const double> grid() const { return grid_; }
  std::span<const double> values() const { return values_; }

 private:
  ModelPtr model_;
  double tol_;
  std::vector<double> grid_;    // grid_[0] == 0
  std::vector<double> values_;  // Phi at grid_
};

/// S_I(t) = S(t) exp(-lambda Phi(t)): survival of the fastest searcher when
/// searchers immigrate at rate lambda >= 0.
double survival_with_immigration(const SurvivalModel& model, double lambda, double t,
                                 double tol = 1e-10);
double survival_with_immigration(const CumulativeIntegralTable& table, double lambda, double t);

/// P(T_k > t) from x = lambda Phi(t) and S(t), evaluated term by term in log
/// space so large x neither overflows nor loses the result.
double kth_survival_from(double x, double survival, int k);

/// P(exactly j searchers have found the target by t), j >= 1, from
/// x = lambda Phi(t) and S(t).
double exactly_j_from(double x, double survival, int j);

/// Law of T_k, the k-th fastest first passage time under immigration.
class KthFptDistribution {
 public:
  KthFptDistribution(ModelPtr model, double lambda, int k, double tol = 1e-10);
  KthFptDistribution(std::shared_ptr<const CumulativeIntegralTable> table, double lambda, int k);

  const SurvivalModel& model() const { return table_->model(); }
  const CumulativeIntegralTable& table() const { return *table_; }
  std::shared_ptr<const CumulativeIntegralTable> table_ptr() const { return table_; }
  double lambda() const { return lambda_; }
  int k() const { return k_; }

 private:
  std::shared_ptr<const CumulativeIntegralTable> table_;
  double lambda_;
  int k_;
};

double kth_survival(const KthFptDistribution& dist, double t);

double exactly_j_found_probability(const SurvivalModel& model, double lambda, int j, double t,
                                   double tol = 1e-10);
double exactly_j_found_probability(const CumulativeIntegralTable& table, double lambda, int j,
                                   double t);

/// Default central-difference step: 1e-5 * max(t, C) for exponential-class
/// models and 1e-5 * max(t, 1) otherwise, capped at t / 2.
double default_density_step(const SurvivalModel& model, double t);

/// -(P(T_k > t + h) - P(T_k > t - h)) / (2h), clamped at 0. Pass h <= 0 for
/// the default step.
double kth_density(const KthFptDistribution& dist, double t, double h = 0.0);

/// E[T_k] = int_0^inf P(T_k > t) dt to relative tolerance `tol`, with an
/// exponential tail correction beyond the point where P(T_k > t) < 1e-12.
/// lambda = 0 is allowed only for k = 1.
Estimate mean_kth_fpt_numeric(const KthFptDistribution& dist, double tol = 1e-8);

}  // namespace fastfpt

#endif  // FASTFPT_IMMIGRATION_HPP
