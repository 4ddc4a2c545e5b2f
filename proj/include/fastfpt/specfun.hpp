#ifndef FASTFPT_SPECFUN_HPP
#define FASTFPT_SPECFUN_HPP

// Special functions used throughout fastfpt.
//
// Everything here is a pure function of its arguments. Domain violations
// throw std::domain_error; a failure to converge within Accuracy::max_iter
// throws std::runtime_error.

namespace fastfpt::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kE = 2.71828182845904523536028747135266250;
inline constexpr double kInvE = 0.36787944117144232159552377016146087;

struct Accuracy {
  double rel_tol = 1e-12;
  int max_iter = 200;

  // Throws std::invalid_argument unless rel_tol > 0 and max_iter >= 1.
  void validate() const;
};

/// Principal branch W0 of the Lambert W function, z >= -1/e.
double lambert_w0(double z, Accuracy acc = {});

/// Lower branch W_{-1} of the Lambert W function, -1/e <= z < 0.
double lambert_wm1(double z, Accuracy acc = {});

double erf(double x);
double erfc(double x);

double gamma_fn(double x);
double log_gamma(double x);

/// Regularized incomplete gamma functions for a > 0, z >= 0.
/// gamma_p + gamma_q == 1; each is evaluated directly so that the smaller
/// of the two keeps full relative accuracy.
double gamma_p(double a, double z, Accuracy acc = {});
double gamma_q(double a, double z, Accuracy acc = {});

/// Gamma(r, z) = int_z^inf u^{r-1} e^{-u} du for any real r and z > 0.
///
/// Positive r goes through gamma_q. For r <= 0 the continued fraction is
/// used directly when z >= 1; for z < 1 the value is reached by the
/// downward recurrence Gamma(r, z) = (Gamma(r+1, z) - z^r e^{-z}) / r,
/// starting from a positive order (or from E1 when r is a non-positive
/// integer).
double upper_incomplete_gamma(double r, double z, Accuracy acc = {});

/// Exponential integral E1(z) = Gamma(0, z), z > 0.
double expint_e1(double z, Accuracy acc = {});

/// psi(k) = -gamma + H_{k-1} for integer k >= 1.
double digamma(int k);

/// psi'(k) = pi^2/6 - sum_{j<k} 1/j^2 for integer k >= 1.
double trigamma(int k);

/// d^m/dt^m Gamma(k + t) at t = 0, for m in {1, 2}. Higher orders would
/// need polygamma functions of arbitrary order and are rejected.
double gamma_derivative_at(int k, int m);

}  // namespace fastfpt::specfun

#endif  // FASTFPT_SPECFUN_HPP
