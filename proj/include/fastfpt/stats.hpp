#ifndef FASTFPT_STATS_HPP
#define FASTFPT_STATS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fastfpt::stats {

/// Empirical distribution of a sample (copied and sorted on construction).
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> sample);

  /// Fraction of the sample <= x.
  double cdf(double x) const;
  /// Fraction of the sample > x.
  double survival(double x) const;
  std::size_t size() const { return sorted_.size(); }
  std::span<const double> sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

/// sup_x |F_n(x) - F(x)| for a sorted sample.
double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// sup_x |F_n(x) - G_m(x)| for two sorted samples.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Standard normal quantile.
double normal_quantile(double q);

/// Half-width of a simultaneous (Bonferroni) normal-approximation band for
/// `points` binomial proportions with true value p, n trials each, at
/// confidence `level`. Includes a 1/(2n) continuity term.
double binomial_band_halfwidth(double p, std::size_t n, std::size_t points, double level = 0.99);

struct Histogram {
  std::vector<double> centers;
  std::vector<double> densities;  // normalized so sum(densities) * width == 1
  double width = 0.0;
};

/// Freedman-Diaconis bin width 2 IQR n^{-1/3}, bins capped at `max_bins`.
Histogram freedman_diaconis(std::span<const double> sample, std::size_t max_bins = 400);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
};

Moments sample_moments(std::span<const double> sample);

}  // namespace fastfpt::stats

#endif  // FASTFPT_STATS_HPP
