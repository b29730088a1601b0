#include "conelef/fixedpoints.hpp"

#include <cmath>
#include <sstream>

#include "conelef/errors.hpp"

namespace conelef {
namespace {

constexpr int kMaxMinorDim = 20;

void require_square(const RegularFixedPoint& p) {
  if (p.jacobian.rows() != p.jacobian.cols() || p.jacobian.rows() == 0) {
    std::ostringstream os;
    os << "jacobian of '" << p.name << "' is " << p.jacobian.rows() << "x" << p.jacobian.cols()
       << ", expected a non-empty square matrix";
    throw DomainError(os.str());
  }
  if (!p.jacobian.allFinite()) throw DomainError("jacobian of '" + p.name + "' has non-finite entries");
}

void require_simple(const RegularFixedPoint& p) {
  const auto s = regular_simplicity(p);
  if (!s.simple) throw NotSimpleError(p.name, s.diagnostic);
}

}  // namespace

std::string_view to_string(FixedPointClass cls) {
  switch (cls) {
    case FixedPointClass::RegularSimple:
      return "RegularSimple";
    case FixedPointClass::SingularAttractive:
      return "SingularAttractive";
    case FixedPointClass::SingularRepulsive:
      return "SingularRepulsive";
    case FixedPointClass::SingularRotational:
      return "SingularRotational";
    case FixedPointClass::NotSimple:
      return "NotSimple";
  }
  return "?";
}

int SingularFixedPoint::link_dim() const {
  return std::visit([](const auto& s) { return s.link_dim; }, spectrum);
}

Simplicity regular_simplicity(const RegularFixedPoint& p) {
  require_square(p);
  const auto n = p.jacobian.rows();
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - p.jacobian;
  Simplicity s;
  s.determinant = a.determinant();
  s.threshold = 1e-12 * std::pow(a.norm(), static_cast<double>(n));
  s.simple = std::abs(s.determinant) > s.threshold;
  if (!s.simple) {
    std::ostringstream os;
    os << "|det(I - J)| = " << std::abs(s.determinant) << " is not above the threshold " << s.threshold;
    s.diagnostic = os.str();
  }
  return s;
}

FixedPointClass classify_regular(const RegularFixedPoint& p) {
  return regular_simplicity(p).simple ? FixedPointClass::RegularSimple : FixedPointClass::NotSimple;
}

FixedPointClass classify_singular(const SingularFixedPoint& q) {
  if (!(q.c > 0.0) || !std::isfinite(q.c)) throw DomainError("scaling factor c of '" + q.name + "' must be positive");
  if (q.c < 1.0) return FixedPointClass::SingularAttractive;
  if (q.c > 1.0) return FixedPointClass::SingularRepulsive;
  return q.link_map_displacement > 0.0 ? FixedPointClass::SingularRotational : FixedPointClass::NotSimple;
}

std::vector<double> exterior_power_traces(const Eigen::MatrixXd& jacobian) {
  const int n = static_cast<int>(jacobian.rows());
  if (jacobian.cols() != n) throw DomainError("exterior_power_traces: matrix must be square");
  if (n > kMaxMinorDim) throw DomainError("exterior_power_traces: dimension too large for minor expansion");
  std::vector<double> traces(static_cast<std::size_t>(n) + 1, 0.0);
  traces[0] = 1.0;
  std::vector<int> idx;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    idx.clear();
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) idx.push_back(j);
    }
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd minor(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) minor(r, c) = jacobian(idx[r], idx[c]);
    }
    traces[idx.size()] += minor.determinant();
  }
  return traces;
}

double regular_contribution_general(const RegularFixedPoint& p) {
  require_simple(p);
  if (!p.endo_traces) throw MissingDataError("regular point '" + p.name + "' has no endomorphism traces");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.endo_traces->size(); ++i) sum += (i % 2 == 0 ? 1.0 : -1.0) * (*p.endo_traces)[i];
  const auto n = p.jacobian.rows();
  const double det = (Eigen::MatrixXd::Identity(n, n) - p.jacobian).determinant();
  return sum / std::abs(det);
}

int regular_contribution_derham(const RegularFixedPoint& p) {
  const auto s = regular_simplicity(p);
  if (!s.simple) throw NotSimpleError(p.name, s.diagnostic);
  return s.determinant > 0.0 ? 1 : -1;
}

}  // namespace conelef
