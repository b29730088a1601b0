#pragma once

#include <cstddef>
#include <functional>

namespace conelef {

/// Exponentially scaled modified Bessel function of the first kind, e^{-x} I_nu(x).
///
/// Valid for nu >= -1/2 and x >= 0. The scaling keeps the products
/// e^{-(r^2+s^2)/4t} I_nu(rs/2t) that appear in cone heat kernels finite for
/// arbitrarily small t. Returns +inf for nu < 0 at x = 0 (pole of I_nu).
double bessel_i_scaled(double nu, double x);

namespace detail {
/// e^{-x} I_nu(x) for any nu > -1 without the public domain check. Cone
/// kernels of types 2 and 3 need orders nu - 1 that can fall below -1/2.
double bessel_i_scaled_unchecked(double nu, double x);
}  // namespace detail

/// Bessel function of the first kind J_nu(x) for nu >= 0, x >= 0.
double bessel_j(double nu, double x);

/// Derivative J'_nu(x) computed from non-negative orders only.
double bessel_j_prime(double nu, double x);

/// Closed form of the Laplace transform  int_0^inf e^{-p u} I_nu(a u) du.
///
/// Requires p > a >= 0 and nu > -1 (the transform converges for every order
/// above -1; heat kernels only produce nu >= -1/2 directly). For a = 0 the
/// value is 1/p when nu = 0 and 0 when nu > 0.
/// Evaluates (p - sqrt(p^2-a^2))^nu / (a^nu sqrt(p^2-a^2)) in the cancellation
/// free form (a / (p + sqrt(p^2-a^2)))^nu / sqrt(p^2-a^2).
double laplace_bessel_i(double p, double a, double nu);

/// Closed form of  int_0^inf e^{-p u} I_nu(a u) du / u  = (a/(p+sqrt(p^2-a^2)))^nu / nu,
/// for p >= a > 0 and nu > 0.
double laplace_bessel_i_over_u(double p, double a, double nu);

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_subdivisions = 500;
  /// Start of the integration range; positive only for dx/x-weighted Mellin
  /// integrands that vanish to all orders at the origin.
  double lower_cutoff = 0.0;
  /// Width of the first panel; later panels double in width.
  double first_panel = 1.0;
  std::size_t max_panels = 256;

  /// Throws DomainError if any field is out of range.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 21-point Gauss-Kronrod quadrature on [a, b].
QuadratureResult integrate_finite(const Integrand& f, double a, double b,
                                  const QuadratureSpec& spec);

/// Integral over [spec.lower_cutoff, upper] (upper may be +inf) using panels of
/// geometrically growing width, each integrated adaptively. The first panel is
/// mapped by x = a + h w^2 so that algebraic endpoint singularities such as
/// x^{-1/2} become smooth. Panel accumulation stops early once the geometric
/// estimate of the remaining tail is below tolerance; that estimate is folded
/// into the reported error.
QuadratureResult integrate_panels(const Integrand& f, double upper, const QuadratureSpec& spec);

/// integrate_panels over [lower_cutoff, inf). Throws NonConvergenceError when
/// the budget is exhausted above tolerance.
QuadratureResult integrate_semiinfinite(const Integrand& f, const QuadratureSpec& spec);

}  // namespace conelef
