#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "conelef/errors.hpp"
#include "conelef/specfun.hpp"

namespace conelef {
namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208067394016, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr std::size_t kBlindPanels = 64;

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const Integrand& f, double a, double b, std::size_t& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[10];
  double gauss = 0.0;
  double resabs = std::abs(kronrod);
  double fv1[10], fv2[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    kronrod += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  evals += 21;
  const double mean = 0.5 * kronrod;
  double resasc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

  const double value = kronrod * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  if (!std::isfinite(value) || !std::isfinite(err)) err = std::numeric_limits<double>::infinity();
  return {a, b, value, err};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("QuadratureSpec: rel_tol must be > 0");
  if (!(abs_tol > 0.0)) throw DomainError("QuadratureSpec: abs_tol must be > 0");
  if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
  if (!(lower_cutoff >= 0.0)) throw DomainError("QuadratureSpec: lower_cutoff must be >= 0");
  if (!(first_panel > 0.0)) throw DomainError("QuadratureSpec: first_panel must be > 0");
  if (max_panels < 1) throw DomainError("QuadratureSpec: max_panels must be >= 1");
}

QuadratureResult integrate_finite(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod(f, a, b, out.evaluations);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  std::vector<Segment> frozen;  // too narrow to split further
  std::size_t splits = 0;
  while (!heap.empty()) {
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (total_err <= tol) break;
    if (splits >= spec.max_subdivisions) break;
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        std::abs(worst.b - worst.a) < 1e3 * std::numeric_limits<double>::epsilon() * std::abs(mid)) {
      frozen.push_back(worst);
      if (heap.empty()) break;
      continue;
    }
    Segment left = gauss_kronrod(f, worst.a, mid, out.evaluations);
    Segment right = gauss_kronrod(f, mid, worst.b, out.evaluations);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  // Re-sum from scratch; the running totals accumulate cancellation error.
  total = 0.0;
  total_err = 0.0;
  auto absorb = [&](const Segment& s) {
    total += s.value;
    total_err += s.error;
  };
  for (const auto& s : frozen) absorb(s);
  while (!heap.empty()) {
    absorb(heap.top());
    heap.pop();
  }
  out.value = total;
  out.error = total_err;
  out.converged = std::isfinite(total) && total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  return out;
}

QuadratureResult integrate_panels(const Integrand& f, double upper, const QuadratureSpec& spec) {
  spec.validate();
  const double a = spec.lower_cutoff;
  QuadratureResult out;
  if (!(upper > a)) {
    out.converged = true;
    return out;
  }

  QuadratureSpec panel_spec = spec;
  panel_spec.rel_tol = 0.5 * spec.rel_tol;
  panel_spec.abs_tol = 0.5 * spec.abs_tol;

  // First panel with x = a + h w^2 to soften endpoint singularities at a.
  const double h = std::min(spec.first_panel, upper - a);
  const Integrand mapped = [&](double w) { return 2.0 * h * w * f(a + h * w * w); };
  QuadratureResult head = integrate_finite(mapped, 0.0, 1.0, panel_spec);
  double sum = head.value;
  double err = head.error;
  bool all_converged = head.converged;
  out.evaluations += head.evaluations;

  double left = a + h;
  double width = h;
  double prev_panel = std::abs(head.value);
  int quiet_panels = 0;
  // Quiet panels only count once some panel carried mass, or once the
  // integrand has been negligible over a very long stretch.
  bool seen_mass = std::abs(head.value) > spec.abs_tol;
  double tail = 0.0;
  bool reached_end = left >= upper;
  std::size_t panels = 1;
  while (!reached_end && panels < spec.max_panels) {
    const double right = std::min(left + width, upper);
    QuadratureResult part = integrate_finite(f, left, right, panel_spec);
    out.evaluations += part.evaluations;
    sum += part.value;
    err += part.error;
    all_converged = all_converged && part.converged;
    ++panels;

    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(sum));
    const double mag = std::abs(part.value);
    if (right >= upper) {
      reached_end = true;
      tail = 0.0;
      break;
    }
    if (mag <= tol) {
      ++quiet_panels;
    } else {
      quiet_panels = 0;
      seen_mass = true;
    }
    const double ratio = prev_panel > 0.0 ? mag / prev_panel : 0.0;
    tail = ratio < 1.0 ? mag * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
    if (mag == 0.0) tail = 0.0;
    if (quiet_panels >= 2 && tail <= tol && (seen_mass || panels >= kBlindPanels)) break;
    prev_panel = mag;
    left = right;
    width *= 2.0;
  }
  out.value = sum;
  out.error = err + (reached_end ? 0.0 : tail);
  const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(sum));
  const bool tail_ok = reached_end || tail <= tol;
  out.converged = all_converged && tail_ok && std::isfinite(sum);
  if (!out.converged && std::isfinite(out.error) && out.error <= tol && std::isfinite(sum)) out.converged = true;
  return out;
}

QuadratureResult integrate_semiinfinite(const Integrand& f, const QuadratureSpec& spec) {
  QuadratureResult r = integrate_panels(f, std::numeric_limits<double>::infinity(), spec);
  if (!r.converged) {
    throw NonConvergenceError("integrate_semiinfinite: no convergence (value " + std::to_string(r.value) +
                                  ", error estimate " + std::to_string(r.error) + ")",
                              r.value, r.error);
  }
  return r;
}

}  // namespace conelef
