#pragma once

#include <map>
#include <string>
#include <vector>

namespace conelef {

/// One eigenspace of the link Laplacian in a fixed degree.
struct EigenBlock {
  double mu = 0.0;              ///< eigenvalue, >= 0
  double pullback_trace = 0.0;  ///< trace of B^* restricted to the eigenspace
  int multiplicity = 1;

  bool operator==(const EigenBlock&) const = default;
};

/// Spectral data of a closed link manifold L of dimension m together with the
/// action of the link map B.
///
/// `blocks_by_degree[i]` holds the coexact eigenforms of degree i, harmonic
/// forms included as mu = 0 blocks. Exact eigenforms are not stored: in degree
/// i they are d(phi)/sqrt(mu) for the mu > 0 coexact blocks of degree i - 1
/// and carry the same eigenvalue and pullback trace (see full_spectrum).
struct LinkSpectrum {
  int link_dim = 0;
  std::map<int, std::vector<EigenBlock>> blocks_by_degree;
  std::map<int, int> harmonic_dims;
  std::map<int, double> harmonic_traces;
  int truncation_K = 1;

  /// Coexact blocks of degree i; empty for degrees without data.
  const std::vector<EigenBlock>& coexact(int degree) const;

  /// Every eigenform of degree i: coexact blocks of degree i followed by the
  /// exact blocks obtained from degree i - 1, sorted by eigenvalue.
  std::vector<EigenBlock> full_spectrum(int degree) const;

  double max_abs_trace() const;

  bool operator==(const LinkSpectrum&) const = default;
};

/// Eigenvalue of the tangential operator S of a first-order cone operator.
struct ShortComplexBlock {
  double lambda = 0.0;
  double pullback_trace = 0.0;
  int multiplicity = 1;

  bool operator==(const ShortComplexBlock&) const = default;
};

struct ShortComplexSpectrum {
  std::vector<ShortComplexBlock> lambdas;
  int link_dim = 0;         ///< n
  double weight_nu = 1.0;   ///< cone operator weight

  bool operator==(const ShortComplexSpectrum&) const = default;
};

/// Link S^1 with B a rotation by `alpha`, Fourier modes k = 0..K.
///
/// Degree 0: (0, 1, 1) and (k^2, 2 cos(k alpha), 2). Degree 1 carries only the
/// harmonic form dtheta, so its full spectrum mirrors degree 0 through
/// d(phi_k)/k.
LinkSpectrum circle_spectrum(double alpha, int K);

/// Smallest distance between p and B(p) on the unit circle for a rotation.
double circle_displacement(double alpha);

/// All invariant violations; an empty result means the spectrum is valid.
std::vector<std::string> validate(const LinkSpectrum& spectrum);
std::vector<std::string> validate(const ShortComplexSpectrum& spectrum);

/// The subset of validate() about |pullback trace| > multiplicity. Generated
/// spectra must be free of these; for user-supplied spectra they are warnings.
std::vector<std::string> trace_bound_violations(const LinkSpectrum& spectrum);

/// validate() without the trace-bound warnings.
std::vector<std::string> blocking_violations(const LinkSpectrum& spectrum);

/// Sum over i < (m+1)/2 of (-1)^i Tr(B^* : H^i(L) -> H^i(L)).
/// Throws MissingDataError when a required harmonic trace is absent.
double topological_singular_contribution(const LinkSpectrum& spectrum);

/// A cone of dimension m + 1 is Witt when m + 1 is even or H^{m/2}(L) = 0.
/// An absent middle-degree entry counts as zero-dimensional.
bool is_witt(const LinkSpectrum& spectrum);

}  // namespace conelef
