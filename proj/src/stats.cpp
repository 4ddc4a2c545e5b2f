#include "fastfpt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fastfpt::stats {

Ecdf::Ecdf(std::vector<double> sample) : sorted_(std::move(sample)) {
  if (sorted_.empty()) throw std::invalid_argument("Ecdf: empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::cdf(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(std::distance(sorted_.begin(), it)) / static_cast<double>(sorted_.size());
}

double Ecdf::survival(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(std::distance(it, sorted_.end())) / static_cast<double>(sorted_.size());
}

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("normal_quantile: q must lie in (0, 1)");
  // Phi(x) = erfc(-x / sqrt 2) / 2 is increasing; bisect.
  double lo = -40.0;
  double hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (0.5 * std::erfc(-mid / std::sqrt(2.0)) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double binomial_band_halfwidth(double p, std::size_t n, std::size_t points, double level) {
  if (n == 0 || points == 0) throw std::invalid_argument("binomial_band_halfwidth: n and points must be >= 1");
  const double alpha = (1.0 - level) / static_cast<double>(points);
  const double z = normal_quantile(1.0 - 0.5 * alpha);
  const auto dn = static_cast<double>(n);
  return z * std::sqrt(std::max(p * (1.0 - p), 0.0) / dn) + 0.5 / dn;
}

Histogram freedman_diaconis(std::span<const double> sample, std::size_t max_bins) {
  if (sample.size() < 2) throw std::invalid_argument("freedman_diaconis: need at least 2 points");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  auto quantile = [&sorted, n](double q) {
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, n - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  const double lo = sorted.front();
  const double hi = sorted.back();
  const double range = hi - lo;
  double width = 2.0 * iqr * std::pow(static_cast<double>(n), -1.0 / 3.0);
  if (!(width > 0.0)) width = range > 0.0 ? range : 1.0;
  auto bins = static_cast<std::size_t>(std::ceil(range / width));
  bins = std::clamp<std::size_t>(bins, 1, max_bins);
  width = range > 0.0 ? range / static_cast<double>(bins) : width;

  Histogram h;
  h.width = width;
  std::vector<std::size_t> counts(bins, 0);
  for (double x : sorted) {
    auto idx = static_cast<std::size_t>((x - lo) / width);
    if (idx >= bins) idx = bins - 1;
    ++counts[idx];
  }
  for (std::size_t b = 0; b < bins; ++b) {
    h.centers.push_back(lo + (static_cast<double>(b) + 0.5) * width);
    h.densities.push_back(static_cast<double>(counts[b]) / (static_cast<double>(n) * width));
  }
  return h;
}

Moments sample_moments(std::span<const double> sample) {
  Moments m;
  if (sample.empty()) return m;
  const auto n = static_cast<double>(sample.size());
  // Welford
  double mean = 0.0;
  double m2 = 0.0;
  double count = 0.0;
  for (double x : sample) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }
  m.mean = mean;
  m.variance = sample.size() > 1 ? m2 / (n - 1.0) : 0.0;
  m.std_error = std::sqrt(m.variance / n);
  return m;
}

}  // namespace fastfpt::stats
