#include "conelef/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "conelef/errors.hpp"

namespace conelef {
namespace {

constexpr double kSeriesLimit = 30.0;
constexpr double kSeriesFallbackLimit = 500.0;
constexpr double kDebyeMinOrder = 12.0;
constexpr int kDebyeTerms = 14;

// Power series, all terms positive for nu > -1. The e^{-x} factor is folded
// into the leading term so nothing overflows below x = 700.
double scaled_series(double nu, double x) {
  const double half = 0.5 * x;
  const double log_t0 = nu * std::log(half) - std::lgamma(nu + 1.0) - x;
  double term = std::exp(log_t0);
  double sum = term;
  const double q = half * half;
  for (int k = 1; k < 100000; ++k) {
    term *= q / (static_cast<double>(k) * (k + nu));
    sum += term;
    if (k > half && term <= 1e-17 * sum) break;
  }
  return sum;
}

// Hankel expansion e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum (-1)^k a_k(nu) / x^k.
double scaled_hankel(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * x);
    const double mag = std::abs(term);
    if (mag > prev) break;
    sum += term;
    if (mag < 1e-17 * std::abs(sum)) break;
    prev = mag;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

using Poly = std::vector<double>;

// Debye polynomials U_k(p) from
//   U_{k+1}(p) = p^2 (1 - p^2) U_k'(p) / 2 + (1/8) int_0^p (1 - 5 t^2) U_k(t) dt.
std::array<Poly, kDebyeTerms> make_debye_polynomials() {
  std::array<Poly, kDebyeTerms> u;
  u[0] = {1.0};
  for (int k = 0; k + 1 < kDebyeTerms; ++k) {
    const Poly& prev = u[k];
    Poly next(prev.size() + 3, 0.0);
    for (std::size_t j = 1; j < prev.size(); ++j) {
      const double d = prev[j] * static_cast<double>(j);  // coefficient of p^{j-1}
      next[j + 1] += 0.5 * d;
      next[j + 3] -= 0.5 * d;
    }
    for (std::size_t j = 0; j < prev.size(); ++j) {
      next[j + 1] += prev[j] / (8.0 * static_cast<double>(j + 1));
      next[j + 3] -= 5.0 * prev[j] / (8.0 * static_cast<double>(j + 3));
    }
    u[k + 1] = std::move(next);
  }
  return u;
}

double eval_poly(const Poly& c, double p) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * p + *it;
  return r;
}

// Uniform asymptotic expansion in the order, I_nu(nu z).
double scaled_debye(double nu, double x) {
  static const std::array<Poly, kDebyeTerms> kU = make_debye_polynomials();
  const double z = x / nu;
  const double s = std::sqrt(1.0 + z * z);
  const double p = 1.0 / s;
  const double exponent = nu * (1.0 / (s + z) + std::log(z / (1.0 + s)));
  double sum = 0.0;
  double scale = 1.0;
  for (int k = 0; k < kDebyeTerms; ++k) {
    sum += eval_poly(kU[k], p) * scale;
    scale /= nu;
  }
  return std::exp(exponent) * sum / std::sqrt(2.0 * std::numbers::pi * nu * s);
}

}  // namespace

namespace detail {

double bessel_i_scaled_unchecked(double nu, double x) {
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    return nu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (x <= kSeriesLimit) return scaled_series(nu, x);
  if (2.0 * nu * nu <= x) return scaled_hankel(nu, x);
  if (x <= kSeriesFallbackLimit || nu < kDebyeMinOrder) return scaled_series(nu, x);
  return scaled_debye(nu, x);
}

}  // namespace detail

double bessel_i_scaled(double nu, double x) {
  if (!(nu >= -0.5)) throw DomainError("bessel_i_scaled: order must be >= -1/2, got " + std::to_string(nu));
  if (!(x >= 0.0)) throw DomainError("bessel_i_scaled: argument must be >= 0, got " + std::to_string(x));
  return detail::bessel_i_scaled_unchecked(nu, x);
}

double bessel_j(double nu, double x) {
  if (!(nu >= 0.0)) throw DomainError("bessel_j: order must be >= 0, got " + std::to_string(nu));
  if (!(x >= 0.0)) throw DomainError("bessel_j: argument must be >= 0, got " + std::to_string(x));
  return std::cyl_bessel_j(nu, x);
}

double bessel_j_prime(double nu, double x) {
  if (!(nu >= 0.0)) throw DomainError("bessel_j_prime: order must be >= 0");
  if (!(x >= 0.0)) throw DomainError("bessel_j_prime: argument must be >= 0");
  if (x == 0.0) {
    if (nu == 1.0) return 0.5;
    if (nu == 0.0 || nu > 1.0) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  return nu / x * std::cyl_bessel_j(nu, x) - std::cyl_bessel_j(nu + 1.0, x);
}

double laplace_bessel_i(double p, double a, double nu) {
  if (!(nu > -1.0)) throw DomainError("laplace_bessel_i: order must be > -1");
  if (!(a >= 0.0)) throw DomainError("laplace_bessel_i: a must be >= 0");
  if (!(p > a)) throw DomainError("laplace_bessel_i: transform diverges unless p > a");
  if (a == 0.0) {
    if (nu == 0.0) return 1.0 / p;
    if (nu > 0.0) return 0.0;
    throw DomainError("laplace_bessel_i: a = 0 with negative order is singular");
  }
  const double root = std::sqrt((p - a) * (p + a));
  return std::pow(a / (p + root), nu) / root;
}

double laplace_bessel_i_over_u(double p, double a, double nu) {
  if (!(nu > 0.0)) throw DomainError("laplace_bessel_i_over_u: order must be > 0");
  if (!(a > 0.0) || !(p >= a)) throw DomainError("laplace_bessel_i_over_u: requires p >= a > 0");
  const double root = std::sqrt((p - a) * (p + a));
  return std::pow(a / (p + root), nu) / nu;
}

}  // namespace conelef
