#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pbpois/bernoulli.hpp"
#include "pbpois/divergences.hpp"
#include "pbpois/numeric.hpp"

namespace pbpois {

enum class BoundSide { lower, upper, relation };
std::string to_string(BoundSide side);

/// Outcome of one inequality. lhs is always the computed quantity and rhs
/// the bound; margin = rhs - lhs for upper/relation rows, lhs - rhs for
/// lower rows. holds is meaningful only when applicable.
struct BoundCheckResult {
  std::string name;
  BoundSide side = BoundSide::upper;
  bool applicable = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = false;
  PrecisionMode precision = PrecisionMode::binary64;
  std::string note;

  bool violated() const noexcept { return applicable && !holds; }
};

/// margin >= -1e-12 max(1, |lhs|, |rhs|)
bool within_tolerance(double lhs, double rhs, double margin);

BoundCheckResult make_check(std::string name, BoundSide side, double lhs, double rhs,
                            PrecisionMode precision = PrecisionMode::binary64);
BoundCheckResult not_applicable(std::string name, BoundSide side, std::string note = {});

/// A quantity divided by the shape it is claimed to be proportional to,
/// for bounds whose constant is not specified. No verdict.
struct RatioRecord {
  std::string name;
  bool applicable = false;
  double value = 0.0;
  std::string note;
};

/// Fixed constants used by the checks.
namespace bound_constants {
inline constexpr double kEnvelopeLow = 1e-8;
inline constexpr double kEnvelopeHigh = 5.6e7;
inline constexpr double kSmallLambdaChi2 = 15.0;
inline constexpr double kKappaChi2 = 7e6;
inline constexpr double kModerateChi2 = 19.0;
inline constexpr double kModerateKl = 23.0;
inline constexpr double kChi2Floor = 2.5e-6;
inline constexpr double kZacharovasHwangConstant = 6.74;
/// log of the lambda threshold of the large-lambda relative entropy floor
inline constexpr double kLargeLambdaLogThreshold = 2e7;
inline constexpr double kLargeLambdaKlFactorLog = -14.0;
}  // namespace bound_constants

/// One row of the exported catalog.
struct BoundSpec {
  std::string name;
  BoundSide side;
  std::string statement;
  std::vector<std::pair<std::string, double>> constants;
  std::string applicability;
  /// Ratio recorders carry no verdict.
  bool verdict = true;
};
const std::vector<BoundSpec>& bound_catalog();

// Individual checks. Each takes the instance moments and a report for the
// same instance; rows that do not apply come back with applicable = false.

/// (1/32) min(1, 1/lambda) lambda2 <= tv/2 <= (1 - e^-lambda) lambda2 / lambda
std::array<BoundCheckResult, 2> barbour_hall(const Moments& m, const DivergenceReport& r);
/// kl >= (lambda2/lambda)^2 / 4
BoundCheckResult hjk_lower(const Moments& m, const DivergenceReport& r);
/// chi2 <= 2 (sqrt(e) - 1)^2 s^2 (1 - s)^-3, s = lambda2/lambda < 1; plus
/// chi2 <= 6.74 s^2 when s <= 1/2.
std::array<BoundCheckResult, 2> zacharovas_hwang_upper(const Moments& m, const DivergenceReport& r);
/// c1 s^2 (1 + log F) <= kl <= c2 s^2 (1 + log F) and
/// c1 s^2 sqrt(F) <= chi2 <= c2 s^2 sqrt(F).
std::array<BoundCheckResult, 4> envelope_checks(const Moments& m, const DivergenceReport& r);
/// For max p <= 1/2: s^2/4 <= kl <= chi2, and chi2 <= 15 s^2 when lambda <= 1/2.
std::array<BoundCheckResult, 3> small_probability_checks(const Moments& m, double max_p,
                                                         const DivergenceReport& r);
/// chi2 <= 7e6 (1 - kappa)^-3 s^2 for lambda >= 1/2 and lambda2 <= kappa lambda.
/// Throws InputError unless 0 < kappa < 1.
BoundCheckResult kappa_chi2_upper(const Moments& m, const DivergenceReport& r, double kappa);
/// lambda2/lambda rounded up to the grid {0.1, ..., 0.9}; nullopt above 0.9.
std::optional<double> kappa_grid_point(double ratio);
/// chi2 <= 19 sqrt(Q) and kl <= 23 log(eQ) for lambda >= 1/2.
std::array<BoundCheckResult, 2> moderate_lambda_checks(const Moments& m, const DivergenceReport& r);
/// 1 + chi2 >= c0 sqrt(Q) for lambda >= 1/2, and chi2 >= (c0/9) sqrt(Q)
/// when in addition lambda2 >= (1 - c0^2/4) lambda.
std::array<BoundCheckResult, 2> chi2_floor_checks(const Moments& m, const DivergenceReport& r);
/// kl >= e^-14 log(eQ) for lambda >= e^(2e7) and lambda2 >= (1 - e^(-2e7)) lambda.
/// Never applicable in binary64.
BoundCheckResult large_lambda_kl_lower(const Moments& m, const DivergenceReport& r);
/// The same inequality evaluated for the all-ones vector of length n, where
/// kl = log(n! e^n / n^n) and Q = n, ignoring the lambda threshold.
BoundCheckResult large_lambda_kl_formula(std::size_t n);
/// T_alpha <= 2^alpha / (alpha - 1) (T_2 + chi_alpha) for alpha >= 2.
BoundCheckResult tsallis_vajda_relation(const DivergenceReport& r, double alpha);
/// H(Z) - H(W) <= chi2 + H2(Z) sqrt(chi2)
BoundCheckResult entropy_gap_upper(const DivergenceReport& r);
/// H2(Z) <= sqrt(50) log(1 + lambda) for lambda >= 1, 5 sqrt(lambda) log(e/lambda) for lambda <= 1.
BoundCheckResult poisson_h2_upper(double lambda, double h2);
/// Negative part of the kl sum is at most 1; the quadratic lower bound is at most kl.
std::array<BoundCheckResult, 2> kl_decomposition_checks(const DivergenceReport& r);
/// Relative entropy subadditivity and chi2 + 1 submultiplicativity under
/// independent sums, realized by concatenating the two vectors.
std::array<BoundCheckResult, 2> convolution_checks(const BernoulliVector& a, const BernoulliVector& b,
                                                   const PrecisionPolicy& policy = PrecisionPolicy::binary64());

// Ratio recorders.

/// kl / (s^2/4); at least 1 whenever the universal floor holds.
RatioRecord hjk_ratio(const Moments& m, const DivergenceReport& r);
/// kl / (s^2 (1 + log F)) and chi2 / (s^2 sqrt F)
std::array<RatioRecord, 2> envelope_ratios(const Moments& m, const DivergenceReport& r);
/// chi2 / s^2 for max p <= 1/2 (the lambda-dependent constant).
RatioRecord small_probability_ratio(const Moments& m, double max_p, const DivergenceReport& r);
/// T_alpha / (s^2 F^((alpha-1)/2)) for alpha > 1.
RatioRecord tsallis_shape(const Moments& m, const DivergenceReport& r, double alpha);
/// chi_alpha / (lambda2^alpha / lambda^(2(alpha-1))) for lambda <= 1/2, or
/// chi_alpha (1 - kappa)^(3 alpha/2) / s^alpha for lambda >= 1/2 with kappa from the grid.
RatioRecord vajda_shape(const Moments& m, const DivergenceReport& r, double alpha);
/// (H(Z) - H(W)) / (s log(2 + lambda)) when lambda2 <= lambda/2, otherwise
/// (H(Z) - H(W)) / s.
RatioRecord entropy_gap_shape(const Moments& m, const DivergenceReport& r);

struct BoundEvaluation {
  std::vector<BoundCheckResult> checks;
  std::vector<RatioRecord> ratios;

  std::size_t applicable_count() const;
  std::size_t violation_count() const;
};

/// Every catalog check and ratio for one instance. The kappa check uses
/// kappa_grid_point(lambda2/lambda); Tsallis/Vajda rows use the report's alphas.
BoundEvaluation evaluate_bounds(const Moments& m, double max_p, const DivergenceReport& r);
BoundEvaluation evaluate_bounds(const BernoulliVector& p, const DivergenceReport& r);

}  // namespace pbpois
