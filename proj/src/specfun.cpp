#include "fastfpt/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fastfpt::specfun {

namespace {

constexpr double kTiny = 1e-300;

[[noreturn]] void domain(const std::string& what) { throw std::domain_error(what); }

[[noreturn]] void no_convergence(const std::string& what) {
  throw std::runtime_error(what + ": iteration did not converge");
}

// Halley iteration on g(w) = w + ln|w| - ln|z|, valid away from the branch
// point for both real branches (w and z share a sign).
double lambert_log_form(double w, double z, const Accuracy& acc) {
  const double log_abs_z = std::log(std::fabs(z));
  for (int it = 0; it < acc.max_iter; ++it) {
    const double g = w + std::log(std::fabs(w)) - log_abs_z;
    const double g1 = 1.0 + 1.0 / w;
    const double g2 = -1.0 / (w * w);
    const double step = 2.0 * g * g1 / (2.0 * g1 * g1 - g * g2);
    w -= step;
    if (std::fabs(step) <= acc.rel_tol * std::fabs(w)) return w;
  }
  no_convergence("lambert_w");
}

// Halley iteration on f(w) = w e^w - z, used near the origin and the
// branch point where the log form is ill-conditioned.
double lambert_direct(double w, double z, const Accuracy& acc) {
  for (int it = 0; it < acc.max_iter; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    const double wp1 = w + 1.0;
    if (std::fabs(wp1) < 1e-10) return w;  // at the branch point
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::fabs(step) <= acc.rel_tol * std::max(1.0, std::fabs(w))) return w;
  }
  no_convergence("lambert_w");
}

// Series about the branch point z = -1/e in p = +-sqrt(2(ez + 1)).
double branch_point_series(double p) {
  return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
}

double gamma_p_series(double a, double z, const Accuracy& acc) {
  // P(a,z) = z^a e^{-z} / Gamma(a+1) * sum_n z^n / ((a+1)...(a+n))
  double term = 1.0;
  double sum = 1.0;
  double ap = a;
  for (int n = 1; n <= acc.max_iter * 50; ++n) {
    ap += 1.0;
    term *= z / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * acc.rel_tol * 1e-2) {
      return sum * std::exp(a * std::log(z) - z - std::lgamma(a + 1.0));
    }
  }
  no_convergence("gamma_p series");
}

// Modified Lentz evaluation of the Legendre continued fraction
//   Gamma(a,z) = e^{-z} z^a * 1/(z+1-a- 1(1-a)/(z+3-a- 2(2-a)/(z+5-a- ...)))
// returning only the fraction. Converges for every real a when z > 0.
double upper_gamma_fraction(double a, double z, const Accuracy& acc) {
  double b = z + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  const int limit = acc.max_iter * 50;
  for (int i = 1; i <= limit; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < acc.rel_tol * 1e-2) return h;
  }
  no_convergence("incomplete gamma continued fraction");
}

}  // namespace

void Accuracy::validate() const {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("Accuracy.rel_tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("Accuracy.max_iter must be >= 1");
}

double lambert_w0(double z, Accuracy acc) {
  acc.validate();
  if (std::isnan(z) || z < -kInvE) domain("lambert_w0: z must be >= -1/e");
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return z;
  const double q = 2.0 * (kE * z + 1.0);
  if (q <= 0.0) return -1.0;
  if (z < -0.3) return lambert_direct(branch_point_series(std::sqrt(q)), z, acc);
  if (z < 3.0) return lambert_direct(std::log1p(z), z, acc);
  const double l1 = std::log(z);
  const double l2 = std::log(l1);
  return lambert_log_form(l1 - l2 + l2 / l1, z, acc);
}

double lambert_wm1(double z, Accuracy acc) {
  acc.validate();
  if (std::isnan(z) || z < -kInvE || z >= 0.0) domain("lambert_wm1: z must lie in [-1/e, 0)");
  const double q = 2.0 * (kE * z + 1.0);
  if (q <= 0.0) return -1.0;
  if (z < -0.3) {
    const double w = lambert_direct(branch_point_series(-std::sqrt(q)), z, acc);
    return std::min(w, -1.0);
  }
  const double l1 = std::log(-z);
  const double l2 = std::log(-l1);
  return lambert_log_form(l1 - l2 + l2 / l1, z, acc);
}

double erf(double x) { return std::erf(x); }
double erfc(double x) { return std::erfc(x); }

double gamma_fn(double x) {
  if (std::isnan(x) || x <= 0.0) domain("gamma_fn: x must be > 0");
  return std::tgamma(x);
}

double log_gamma(double x) {
  if (std::isnan(x) || x <= 0.0) domain("log_gamma: x must be > 0");
  return std::lgamma(x);
}

double gamma_p(double a, double z, Accuracy acc) {
  acc.validate();
  if (!(a > 0.0)) domain("gamma_p: a must be > 0");
  if (std::isnan(z) || z < 0.0) domain("gamma_p: z must be >= 0");
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return 1.0;
  if (z < a + 1.0) return gamma_p_series(a, z, acc);
  return 1.0 - gamma_q(a, z, acc);
}

double gamma_q(double a, double z, Accuracy acc) {
  acc.validate();
  if (!(a > 0.0)) domain("gamma_q: a must be > 0");
  if (std::isnan(z) || z < 0.0) domain("gamma_q: z must be >= 0");
  if (z == 0.0) return 1.0;
  if (std::isinf(z)) return 0.0;
  if (z < a + 1.0) return 1.0 - gamma_p_series(a, z, acc);
  const double prefactor = std::exp(a * std::log(z) - z - std::lgamma(a));
  return prefactor * upper_gamma_fraction(a, z, acc);
}

double expint_e1(double z, Accuracy acc) {
  acc.validate();
  if (std::isnan(z) || z <= 0.0) domain("expint_e1: z must be > 0");
  if (z >= 1.0) return std::exp(-z) * upper_gamma_fraction(0.0, z, acc);
  // E1(z) = -gamma - ln z - sum_{n>=1} (-z)^n / (n n!)
  double sum = 0.0;
  double term = 1.0;
  for (int n = 1; n <= acc.max_iter * 50; ++n) {
    term *= -z / n;
    const double add = term / n;
    sum += add;
    if (std::fabs(add) < acc.rel_tol * 1e-3) return -kEulerGamma - std::log(z) - sum;
  }
  no_convergence("expint_e1 series");
}

double upper_incomplete_gamma(double r, double z, Accuracy acc) {
  acc.validate();
  if (std::isnan(r)) domain("upper_incomplete_gamma: r is NaN");
  if (std::isnan(z) || z <= 0.0) domain("upper_incomplete_gamma: z must be > 0");
  if (std::isinf(z)) return 0.0;
  if (r > 0.0) {
    const double q = gamma_q(r, z, acc);
    if (q == 0.0) return 0.0;
    return std::exp(std::lgamma(r) + std::log(q));
  }
  if (z >= 1.0) return std::exp(r * std::log(z) - z) * upper_gamma_fraction(r, z, acc);

  const double steps = std::ceil(-r);
  const bool integer_order = (steps == -r);
  double order;
  double value;
  if (integer_order) {
    order = 0.0;
    value = expint_e1(z, acc);
  } else {
    order = r + steps + 1.0;
    value = std::exp(std::lgamma(order) + std::log(gamma_q(order, z, acc)));
  }
  const double log_z = std::log(z);
  while (order - r > 0.5) {
    order -= 1.0;
    value = (value - std::exp(order * log_z - z)) / order;
  }
  return value;
}

double digamma(int k) {
  if (k < 1) domain("digamma: k must be >= 1");
  double harmonic = 0.0;
  for (int j = k - 1; j >= 1; --j) harmonic += 1.0 / j;
  return -kEulerGamma + harmonic;
}

double trigamma(int k) {
  if (k < 1) domain("trigamma: k must be >= 1");
  // Subtract from pi^2/6 smallest-first to keep the last bits.
  double partial = 0.0;
  for (int j = k - 1; j >= 1; --j) partial += 1.0 / (static_cast<double>(j) * j);
  return kPi * kPi / 6.0 - partial;
}

double gamma_derivative_at(int k, int m) {
  if (k < 1) domain("gamma_derivative_at: k must be >= 1");
  const double g = std::tgamma(static_cast<double>(k));
  const double psi = digamma(k);
  switch (m) {
    case 1:
      return g * psi;
    case 2:
      return g * (psi * psi + trigamma(k));
    default:
      domain("gamma_derivative_at: only m = 1 and m = 2 are supported");
  }
}

}  // namespace fastfpt::specfun
