#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pbpois/bernoulli.hpp"
#include "pbpois/log_pmf.hpp"
#include "pbpois/numeric.hpp"

namespace pbpois {

/// Largest n accepted by pmf_bruteforce.
inline constexpr std::size_t kBruteforceMaxSize = 20;

/// Poisson-binomial pmf by iterated two-term convolution, O(n^2) time and
/// O(n) space. Zeros are dropped and ones applied as a shift up front.
/// Runs in Real arithmetic; for Extended the caller must hold an ExtendedScope.
template <class Real>
BasicLogPmf<Real> pmf_dp_as(const BernoulliVector& p);

LogPmf poisson_binomial_pmf_dp(const BernoulliVector& p,
                               const PrecisionPolicy& policy = PrecisionPolicy::binary64());

/// Evaluates the generating function g(w) = prod (q_j + p_j w) at node_count
/// equispaced points on |w| = radius and inverts the transform. Radix-2 FFT
/// when node_count is a power of two, a direct transform otherwise.
/// Coefficients above n are exactly zero; negative round-off is clamped to 0
/// and the result is not renormalized.
/// Throws ResolutionError when node_count < n + 1, InputError when radius <= 0.
template <class Real>
BasicLogPmf<Real> pmf_dft_as(const BernoulliVector& p, double radius, std::size_t node_count);

LogPmf poisson_binomial_pmf_dft(const BernoulliVector& p, double radius, std::size_t node_count,
                                const PrecisionPolicy& policy = PrecisionPolicy::binary64());

/// Smallest power of two that is at least n + 1.
std::size_t default_dft_nodes(std::size_t n);

/// Literal sum over all 2^n outcome sequences. Throws SizeLimitError for n > 20.
LogPmf pmf_bruteforce(const BernoulliVector& p);

/// log P{Z = k} for Z ~ Poisson(lambda). At lambda = 0: 0 for k = 0, -inf otherwise.
template <class Real>
Real poisson_log_pmf_as(const Real& lambda, std::uint64_t k);

double poisson_log_pmf(double lambda, std::uint64_t k);

/// Poisson(lambda) log-pmf on {0..last}. In binary64 each entry is split as
/// -log sqrt(2 pi k) - (Stirling remainder) - (k log(k/lambda) + lambda - k)
/// so large lambda does not cancel digits away.
template <class Real>
std::vector<Real> poisson_log_pmf_range(const Real& lambda, std::size_t last);

/// Log-space bounds sqrt(2 pi) k^{k+1/2} e^{-k} <= k! <= e k^{k+1/2} e^{-k}.
struct StirlingSandwich {
  std::uint64_t k = 0;
  double log_lower = 0.0;
  double log_upper = 0.0;
  double log_factorial = 0.0;
  double lower() const;
  double upper() const;
  bool holds() const { return log_lower <= log_factorial && log_factorial <= log_upper; }
};

/// Throws InputError for k == 0.
StirlingSandwich stirling_sandwich(std::uint64_t k);

/// One side of a Poisson pmf estimate, evaluated in log space.
struct PmfBound {
  bool applicable = false;
  double log_value = 0.0;
};

/// Bounds on f(k) = P{Z = k}, Z ~ Poisson(lambda), lambda > 0, k >= 1:
///   f(k) <= 1/sqrt(2 pi k)                                   always
///   e^{-(k-l)^2/l}/(e sqrt k) <= f(k) <= e^{-(k-l)^2/(3l)}/sqrt(2 pi k)
///                                                            1 <= k <= 2 lambda
///   f(k) >= e^{-(k-l)^2/(2l)}/(e sqrt k)                     k >= lambda
struct PoissonSandwich {
  double lambda = 0.0;
  std::uint64_t k = 0;
  double log_pmf = 0.0;
  PmfBound universal_upper;
  PmfBound central_lower;
  PmfBound central_upper;
  PmfBound right_lower;

  /// True when every applicable bound contains log_pmf (with 1e-12 relative slack).
  bool holds() const;
};

/// Throws InputError unless lambda > 0 and k >= 1.
PoissonSandwich poisson_pmf_sandwich(double lambda, std::uint64_t k);

}  // namespace pbpois
