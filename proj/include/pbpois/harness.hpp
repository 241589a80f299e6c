#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pbpois/bernoulli.hpp"
#include "pbpois/bounds.hpp"
#include "pbpois/divergences.hpp"
#include "pbpois/numeric.hpp"

namespace pbpois {

enum class FamilyKind { equal, two_block, geometric_decay, one_heavy, all_ones, random_seeded };

std::string to_string(FamilyKind kind);

/// A parametrized way of producing a probability vector.
///
/// Text form is "kind:key=value,key=value", for example
///   equal:n=100,p=0.01        (or lambda=1 in place of p)
///   two-block:heavy=5,light=100,heavy_p=0.9,light_p=0.01
///   geometric-decay:n=64,a=0.5,g=0.9      p_j = a g^j, j = 0..n-1
///   one-heavy:n=100,heavy_p=0.99,p=0.01    one entry heavy_p plus n entries p
///   all-ones:n=200
///   random-seeded:n=40,seed=7
/// id() gives the canonical form, which parses back to the same spec.
struct FamilySpec {
  FamilyKind kind = FamilyKind::equal;
  std::size_t n = 0;
  double p = 0.0;
  std::size_t heavy = 0;
  std::size_t light = 0;
  double heavy_p = 0.9;
  double light_p = 0.01;
  double a = 0.5;
  double g = 0.5;
  std::uint64_t seed = 0;

  std::string id() const;
  /// Throws InputError when the parameters do not give probabilities in [0, 1].
  BernoulliVector generate() const;
};

/// Throws InputError naming the offending token.
FamilySpec parse_family(std::string_view text);

namespace family {
FamilySpec equal(std::size_t n, double p);
FamilySpec two_block(std::size_t heavy, std::size_t light, double heavy_p = 0.9, double light_p = 0.01);
FamilySpec geometric_decay(std::size_t n, double a, double g);
FamilySpec one_heavy(std::size_t tail, double tail_p, double heavy_p = 0.99);
FamilySpec all_ones(std::size_t n);
FamilySpec random_seeded(std::size_t n, std::uint64_t seed);
}  // namespace family

/// Probabilities for the random-seeded family: mt19937_64 seeded with `seed`,
/// each draw mapped to u = (x >> 11) 2^-53, and every entry of the vector
/// raised to a common exponent 1 + (first draw mod 4) so that small-p
/// regimes are covered.
std::vector<double> seeded_probabilities(std::size_t n, std::uint64_t seed);

/// Equal-p grid, two-block mixes, geometric decay, one-heavy vectors,
/// all-ones n = 1..200 and `random_count` seeded random vectors with seeds
/// base_seed + 1, base_seed + 2, ...
std::vector<FamilySpec> default_corpus(std::size_t random_count = 500, std::uint64_t base_seed = 0);

struct SweepOptions {
  std::vector<double> alphas = default_alpha_grid();
  PrecisionPolicy precision = PrecisionPolicy::binary64();
  TruncationPolicy truncation;
  /// 0 means std::thread::hardware_concurrency().
  unsigned workers = 0;
};

enum class RecordError { none, input, escalation, other };

struct SweepRecord {
  std::size_t index = 0;
  FamilySpec family;
  std::size_t n = 0;
  Moments moments;
  double max_p = 0.0;
  DivergenceReport report;
  BoundEvaluation bounds;
  RecordError error_kind = RecordError::none;
  std::string error;

  bool ok() const { return error_kind == RecordError::none; }
};

SweepRecord evaluate_family(const FamilySpec& spec, const SweepOptions& options = {});

/// One record per spec, in input order. Failures are captured in the record.
std::vector<SweepRecord> run_sweep(const std::vector<FamilySpec>& specs, const SweepOptions& options = {});

struct EmpiricalConstantReport {
  std::string name;
  double min = 0.0;
  std::string argmin;
  double max = 0.0;
  std::string argmax;
  std::size_t count = 0;
};

/// Extremal ratio per recorder name, in order of first appearance.
std::vector<EmpiricalConstantReport> empirical_constants(const std::vector<SweepRecord>& records);

/// chi2 / (lambda2/lambda)^2 on binomial(n, lambda/n); expected within 5% of
/// 1/2 once lambda^6 lambda2 <= 1e-6.
struct LimitRow {
  double lambda = 0.0;
  std::size_t n = 0;
  double lambda2 = 0.0;
  double regime = 0.0;  ///< lambda^6 lambda2
  bool in_regime = false;
  double ratio = 0.0;
  bool holds = true;
};
std::vector<LimitRow> bv_limit_check(const std::vector<double>& lambdas, const std::vector<std::size_t>& ns,
                                     const SweepOptions& options = {});

/// All-ones vector of length n, where kl = log(n! e^n / n^n) and chi2 = e^kl - 1.
struct DegenerateRow {
  std::size_t n = 0;
  double kl = 0.0;
  double chi2 = 0.0;
  /// kl - log(2 pi n)/2, expected in (0, 1/(12n))
  double stirling_gap = 0.0;
  bool gap_holds = false;
  /// chi2 / sqrt(2 pi n)
  double chi2_ratio = 0.0;
  /// 1 + chi2 within 1e-10 relative of the enumerated value; only for n <= 200.
  bool cross_checked = false;
  bool cross_check_holds = true;
  std::size_t envelope_failures = 0;
};
std::vector<DegenerateRow> degenerate_asymptotics(const std::vector<std::size_t>& ns);

/// Every n in 1..n_max through the factorial recurrence in extended precision.
struct DegenerateSummary {
  std::size_t n_max = 0;
  std::size_t gap_failures = 0;
  std::size_t first_gap_failure = 0;
  std::size_t envelope_failures = 0;
  /// Extremes of chi2/sqrt(2 pi n) over 100 <= n <= n_max.
  double min_ratio_from_100 = 0.0;
  double max_ratio_from_100 = 0.0;
  bool ratio_increasing_from_100 = true;
};
DegenerateSummary degenerate_sweep(std::size_t n_max);

/// Concavity of the Poisson-binomial entropy under averaging of two vectors,
/// and H(binomial(n, lambda/n)) <= H(Poisson(lambda)).
struct StructureCheck {
  BoundCheckResult check;
  std::string instance;
};
std::vector<StructureCheck> entropy_structure_checks(std::size_t pair_count = 100, std::size_t length = 16,
                                                     double lambda = 2.0, std::size_t n_min = 4,
                                                     std::size_t n_max = 64);

/// Saddle-radius facts over every admissible k of each instance: bracket and
/// refinement membership, the modulus floor, the oscillatory floor and the
/// local lower bound on P{W = k} against the exact pmf.
struct SaddleSuiteRow {
  std::string instance;
  std::size_t ks_checked = 0;
  std::size_t bracket_failures = 0;
  std::size_t refinement_checked = 0;
  std::size_t refinement_failures = 0;
  std::size_t modulus_checked = 0;
  std::size_t modulus_failures = 0;
  std::size_t oscillatory_checked = 0;
  std::size_t oscillatory_failures = 0;
  std::size_t tail_checked = 0;
  std::size_t tail_failures = 0;

  std::size_t failures() const {
    return bracket_failures + refinement_failures + modulus_failures + oscillatory_failures + tail_failures;
  }
};
SaddleSuiteRow saddle_suite(const FamilySpec& spec);
std::vector<FamilySpec> default_saddle_corpus();

}  // namespace pbpois
