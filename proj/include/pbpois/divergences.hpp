#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pbpois/bernoulli.hpp"
#include "pbpois/log_pmf.hpp"
#include "pbpois/numeric.hpp"

namespace pbpois {

/// {0.5, 1, 1.5, 2, 3, 4}
const std::vector<double>& default_alpha_grid();

/// Where infinite Poisson-support sums stop.
///
/// The cut K is the first index >= n (and >= lambda) at which the geometric
/// bounds on the omitted mass, v_K rho/(1 - rho), and on the omitted entropy
/// terms, 2.17 sqrt(v_K) sqrt(rho)/(1 - sqrt(rho)) with rho = lambda/(K+1),
/// both fall below tail_epsilon; or the cap, whichever comes first. The cap
/// never cuts into the support {0..n} of W.
struct TruncationPolicy {
  double tail_epsilon = 1e-15;
  /// Defaults to lambda + 50 sqrt(lambda + 1) + 200.
  std::optional<double> hard_cap;

  double cap_for(double lambda) const;
  /// Throws InputError unless tail_epsilon > 0 and any hard_cap is >= 0.
  void validate() const;
};

/// All distances between W and its matched Poisson law Z for one instance.
/// tv is the full sum |w_k - v_k| (no factor 1/2).
struct DivergenceReport {
  double lambda = 0.0;
  std::size_t n = 0;

  double tv = 0.0;
  double kl = 0.0;
  double chi2 = 0.0;
  std::map<double, double> renyi;    ///< D_alpha; alpha = 1 holds kl
  std::map<double, double> tsallis;  ///< T_alpha; alpha = 1 holds kl
  std::map<double, double> vajda;    ///< chi_alpha for alpha >= 1
  double h_w = 0.0;
  double h_z = 0.0;
  double h2_z = 0.0;
  double entropy_diff = 0.0;  ///< H(Z) - H(W)

  /// -sum_{w_k < v_k} w_k log(w_k/v_k); at most 1.
  double kl_negative_part = 0.0;
  /// (1/2) sum (w_k - v_k)^2 / max(w_k, v_k); at most kl.
  double kl_quadratic_lower = 0.0;

  /// Bound on the omitted Poisson terms of h_z, h2_z^2 and entropy_diff.
  double truncation_tail_budget = 0.0;
  /// Last index K included explicitly.
  std::size_t support_end = 0;

  PrecisionMode precision = PrecisionMode::binary64;
  bool escalated = false;
  std::string escalation_reason;
  /// Largest exponent of any term w^a v^{1-a} (a = 2 and grid a > 1) in the sums.
  double max_exponent = 0.0;
  std::vector<std::string> notes;

  double renyi_at(double alpha) const;
  double tsallis_at(double alpha) const;
  double vajda_at(double alpha) const;
};

/// Distances between the Poisson-binomial law of p and Poisson(lambda).
///
/// In binary64 the result is recomputed in extended precision when chi2 > 1e12,
/// when an exponent above 600 appears, or when the estimated relative rounding
/// error of kl/chi2/tv exceeds 1e-10 (tiny distances on long vectors).
/// Throws InputError for alpha <= 0 and EscalationError if the extended rerun
/// still produces non-finite values.
DivergenceReport divergence_report(const BernoulliVector& p,
                                   const std::vector<double>& alphas = default_alpha_grid(),
                                   const PrecisionPolicy& policy = PrecisionPolicy::binary64(),
                                   const TruncationPolicy& truncation = {});

/// Poisson(lambda) truncated at index K chosen by the policy (at least min_last).
/// tail_bound is the omitted mass P{Z > K}, summed explicitly.
LogPmf poisson_pmf(double lambda, std::size_t min_last = 0, const TruncationPolicy& truncation = {});

// Pairwise distances between general laws on {0, 1, ...}. Entries beyond the
// stored range count as zero, except that v.tail_bound is taken as v's omitted
// mass. Absolute-continuity violations give +infinity.

double total_variation(const LogPmf& w, const LogPmf& v);
double relative_entropy(const LogPmf& w, const LogPmf& v);
double chi_squared(const LogPmf& w, const LogPmf& v);
/// Throws std::invalid_argument for alpha == 1 (use relative_entropy) or alpha <= 0.
double renyi(const LogPmf& w, const LogPmf& v, double alpha);
double tsallis(const LogPmf& w, const LogPmf& v, double alpha);
/// Throws std::invalid_argument for alpha < 1.
double vajda_pearson(const LogPmf& w, const LogPmf& v, double alpha);

double shannon_entropy(const LogPmf& pmf);
/// (sum p_k (log p_k)^2)^{1/2}
double second_log_moment(const LogPmf& pmf);
/// H(v) - H(w)
double entropy_difference(const LogPmf& w, const LogPmf& v);

struct KlDiagnostics {
  double negative_part = 0.0;
  double quadratic_lower = 0.0;
};
KlDiagnostics kl_diagnostics(const LogPmf& w, const LogPmf& v);

}  // namespace pbpois
