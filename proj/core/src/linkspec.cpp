#include "conelef/linkspec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "conelef/errors.hpp"

namespace conelef {

const std::vector<EigenBlock>& LinkSpectrum::coexact(int degree) const {
  static const std::vector<EigenBlock> kEmpty;
  auto it = blocks_by_degree.find(degree);
  return it == blocks_by_degree.end() ? kEmpty : it->second;
}

std::vector<EigenBlock> LinkSpectrum::full_spectrum(int degree) const {
  std::vector<EigenBlock> out = coexact(degree);
  for (const auto& b : coexact(degree - 1)) {
    if (b.mu > 0.0) out.push_back(b);
  }
  std::stable_sort(out.begin(), out.end(), [](const EigenBlock& x, const EigenBlock& y) { return x.mu < y.mu; });
  return out;
}

double LinkSpectrum::max_abs_trace() const {
  double m = 0.0;
  for (const auto& [deg, blocks] : blocks_by_degree) {
    for (const auto& b : blocks) m = std::max(m, std::abs(b.pullback_trace));
  }
  return m;
}

LinkSpectrum circle_spectrum(double alpha, int K) {
  if (K < 1) throw DomainError("circle_spectrum: K must be >= 1");
  LinkSpectrum s;
  s.link_dim = 1;
  s.truncation_K = K;
  auto& zero = s.blocks_by_degree[0];
  zero.reserve(static_cast<std::size_t>(K) + 1);
  zero.push_back({0.0, 1.0, 1});
  for (int k = 1; k <= K; ++k) {
    zero.push_back({static_cast<double>(k) * k, 2.0 * std::cos(k * alpha), 2});
  }
  s.blocks_by_degree[1] = {{0.0, 1.0, 1}};
  s.harmonic_dims = {{0, 1}, {1, 1}};
  s.harmonic_traces = {{0, 1.0}, {1, 1.0}};
  return s;
}

double circle_displacement(double alpha) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(std::abs(alpha), two_pi);
  return std::min(r, two_pi - r);
}

std::vector<std::string> validate(const LinkSpectrum& spectrum) {
  std::vector<std::string> issues;
  auto report = [&](auto&&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    issues.push_back(os.str());
  };
  const int m = spectrum.link_dim;
  if (m < 0) report("link_dim must be >= 0, got ", m);
  if (spectrum.truncation_K < 1) report("truncation_K must be >= 1, got ", spectrum.truncation_K);

  for (const auto& [deg, blocks] : spectrum.blocks_by_degree) {
    if (deg < 0 || deg > m) {
      report("degree ", deg, " outside 0..", m);
      continue;
    }
    bool order_reported = false;
    int harmonic_mult = 0;
    double harmonic_trace = 0.0;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      const auto& b = blocks[j];
      if (!std::isfinite(b.mu) || b.mu < 0.0) report("degree ", deg, " block ", j, ": eigenvalue ", b.mu, " must be finite and >= 0");
      if (b.multiplicity < 1) report("degree ", deg, " block ", j, ": multiplicity must be >= 1");
      if (!std::isfinite(b.pullback_trace)) {
        report("degree ", deg, " block ", j, ": pullback trace is not finite");
      } else if (std::abs(b.pullback_trace) > b.multiplicity + 1e-12) {
        report("degree ", deg, " block ", j, ": |pullback trace| ", std::abs(b.pullback_trace),
               " exceeds multiplicity ", b.multiplicity);
      }
      if (j > 0 && b.mu < blocks[j - 1].mu && !order_reported) {
        report("degree ", deg, ": blocks not sorted by eigenvalue at index ", j);
        order_reported = true;
      }
      if (b.mu == 0.0) {
        harmonic_mult += b.multiplicity;
        harmonic_trace += b.pullback_trace;
      }
    }
    auto dim = spectrum.harmonic_dims.find(deg);
    if (dim != spectrum.harmonic_dims.end() && dim->second != harmonic_mult) {
      report("degree ", deg, ": harmonic blocks have total multiplicity ", harmonic_mult,
             " but harmonic_dims says ", dim->second);
    }
    auto tr = spectrum.harmonic_traces.find(deg);
    if (tr != spectrum.harmonic_traces.end() && harmonic_mult > 0 && std::abs(tr->second - harmonic_trace) > 1e-9) {
      report("degree ", deg, ": harmonic block trace ", harmonic_trace, " disagrees with harmonic_traces ", tr->second);
    }
  }

  auto h0 = spectrum.harmonic_dims.find(0);
  if (h0 == spectrum.harmonic_dims.end()) {
    report("harmonic_dims[0] missing");
  } else if (h0->second < 1) {
    report("harmonic_dims[0] must be >= 1 for a connected link");
  }
  for (const auto& [deg, dim] : spectrum.harmonic_dims) {
    if (dim < 0) report("harmonic_dims[", deg, "] is negative");
    if (dim > 0 && !spectrum.harmonic_traces.contains(deg)) report("harmonic_traces[", deg, "] missing");
  }
  return issues;
}

std::vector<std::string> validate(const ShortComplexSpectrum& spectrum) {
  std::vector<std::string> issues;
  if (spectrum.link_dim < 0) issues.push_back("link_dim must be >= 0");
  if (!(spectrum.weight_nu > 0.0)) issues.push_back("weight_nu must be > 0");
  if (spectrum.lambdas.empty()) issues.push_back("no eigenvalues of the tangential operator given");
  for (std::size_t j = 0; j < spectrum.lambdas.size(); ++j) {
    const auto& b = spectrum.lambdas[j];
    const std::string at = "eigenvalue " + std::to_string(j) + ": ";
    if (!std::isfinite(b.lambda)) issues.push_back(at + "lambda is not finite");
    if (b.multiplicity < 1) issues.push_back(at + "multiplicity must be >= 1");
    if (!std::isfinite(b.pullback_trace)) issues.push_back(at + "pullback trace is not finite");
  }
  return issues;
}

std::vector<std::string> trace_bound_violations(const LinkSpectrum& spectrum) {
  std::vector<std::string> out;
  for (const auto& [deg, blocks] : spectrum.blocks_by_degree) {
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      const auto& b = blocks[j];
      if (std::isfinite(b.pullback_trace) && std::abs(b.pullback_trace) > b.multiplicity + 1e-12) {
        std::ostringstream os;
        os << "degree " << deg << " block " << j << ": |pullback trace| " << std::abs(b.pullback_trace)
           << " exceeds multiplicity " << b.multiplicity;
        out.push_back(os.str());
      }
    }
  }
  return out;
}

std::vector<std::string> blocking_violations(const LinkSpectrum& spectrum) {
  const auto bound = trace_bound_violations(spectrum);
  std::vector<std::string> out;
  for (auto& issue : validate(spectrum)) {
    if (std::find(bound.begin(), bound.end(), issue) == bound.end()) out.push_back(std::move(issue));
  }
  return out;
}

double topological_singular_contribution(const LinkSpectrum& spectrum) {
  double sum = 0.0;
  for (int i = 0; 2 * i < spectrum.link_dim + 1; ++i) {
    auto it = spectrum.harmonic_traces.find(i);
    if (it == spectrum.harmonic_traces.end()) {
      auto dim = spectrum.harmonic_dims.find(i);
      if (dim != spectrum.harmonic_dims.end() && dim->second == 0) continue;
      throw MissingDataError("topological_singular_contribution: harmonic trace in degree " + std::to_string(i) +
                             " is missing");
    }
    sum += (i % 2 == 0 ? 1.0 : -1.0) * it->second;
  }
  return sum;
}

bool is_witt(const LinkSpectrum& spectrum) {
  const int m = spectrum.link_dim;
  if ((m + 1) % 2 == 0) return true;
  auto it = spectrum.harmonic_dims.find(m / 2);
  return it == spectrum.harmonic_dims.end() || it->second == 0;
}

}  // namespace conelef
