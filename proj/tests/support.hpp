#ifndef FASTFPT_TESTS_SUPPORT_HPP
#define FASTFPT_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "fastfpt/stats.hpp"

namespace fastfpt::testing {

struct BandReport {
  double worst_excess = 0.0;  // max over points of |emp - ref| / halfwidth
  double at = 0.0;
};

/// Compares the empirical survival of `sample` against `reference` at every
/// grid point using 99% simultaneous binomial bands.
inline BandReport band_check(const std::vector<double>& sample, const std::vector<double>& grid,
                             const std::function<double(double)>& reference) {
  const stats::Ecdf ecdf(sample);
  BandReport r;
  for (double t : grid) {
    const double ref = reference(t);
    const double hw = stats::binomial_band_halfwidth(ref, sample.size(), grid.size());
    const double excess = std::fabs(ecdf.survival(t) - ref) / hw;
    if (excess > r.worst_excess) {
      r.worst_excess = excess;
      r.at = t;
    }
  }
  return r;
}

/// Twenty points at the 2.5%, 7.5%, ..., 97.5% quantiles of `sample`.
inline std::vector<double> quantile_grid(std::vector<double> sample, int points = 20) {
  std::sort(sample.begin(), sample.end());
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) {
    const double q = (i + 0.5) / points;
    grid.push_back(sample[static_cast<std::size_t>(q * static_cast<double>(sample.size() - 1))]);
  }
  return grid;
}

}  // namespace fastfpt::testing

#endif  // FASTFPT_TESTS_SUPPORT_HPP
