#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pbpois/numeric.hpp"

namespace pbpois {

enum class PmfMethod { dp, dft, contour, poisson, bruteforce };
enum class SupportKind { exact_finite, truncated };

std::string to_string(PmfMethod m);
PmfMethod parse_pmf_method(const std::string& text);

/// A distribution on {0, 1, ...} stored as log-probabilities.
/// A value of -infinity encodes an exact zero.
template <class Real>
struct BasicLogPmf {
  std::vector<Real> log_mass;
  SupportKind support = SupportKind::exact_finite;
  PmfMethod method = PmfMethod::dp;
  /// Upper bound on the probability mass beyond the stored entries.
  double tail_bound = 0.0;

  std::size_t size() const noexcept { return log_mass.size(); }

  Real mass(std::size_t k) const {
    using std::exp;
    return k < log_mass.size() ? Real(exp(log_mass[k])) : Real(0);
  }

  /// Compensated sum of the stored masses (excludes tail_bound).
  Real stored_mass() const {
    CompensatedSum<Real> acc;
    for (const Real& l : log_mass) {
      using std::exp;
      acc.add(Real(exp(l)));
    }
    return acc.value();
  }
};

using LogPmf = BasicLogPmf<double>;

/// Converts log values to binary64. Safe because logs do not underflow.
template <class Real>
LogPmf to_binary64(const BasicLogPmf<Real>& pmf) {
  LogPmf out;
  out.support = pmf.support;
  out.method = pmf.method;
  out.tail_bound = pmf.tail_bound;
  out.log_mass.reserve(pmf.size());
  for (const Real& l : pmf.log_mass) out.log_mass.push_back(num::to_double(l));
  return out;
}

}  // namespace pbpois
