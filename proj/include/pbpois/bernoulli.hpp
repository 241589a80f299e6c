#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pbpois {

/// Derived moments of a Bernoulli parameter sequence.
///
///   lambda  = sum p_j           lambda2 = sum p_j^2      lambda3 = sum p_j^3
///   big_f   = max(1, lambda) / max(1, lambda - lambda2)
///   q       = lambda / max(1, lambda - lambda2)
///   q0      = 1 / max(1, lambda - lambda2)
struct Moments {
  double lambda = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double big_f = 1.0;
  double q = 0.0;
  double q0 = 1.0;

  /// lambda - lambda2 = sum p_j q_j, summed directly rather than by subtraction.
  double variance = 0.0;

  /// lambda2 / lambda, or 0 when lambda == 0.
  double ratio() const noexcept { return lambda > 0.0 ? lambda2 / lambda : 0.0; }
};

/// A run of equal probabilities strictly inside (0, 1).
struct ProbabilityGroup {
  double p;
  std::size_t count;
};

/// Success probabilities p_1..p_n of independent Bernoulli trials.
///
/// Immutable after construction. The ascending-sorted copy fixes the
/// summation and convolution order, so every derived quantity is invariant
/// under permutation of the input, bit for bit.
class BernoulliVector {
 public:
  /// Throws InputError if empty or if any entry is outside [0, 1] or not finite.
  explicit BernoulliVector(std::vector<double> p);

  std::size_t size() const noexcept { return p_.size(); }
  std::span<const double> probabilities() const noexcept { return p_; }
  std::span<const double> sorted() const noexcept { return sorted_; }

  const Moments& moments() const noexcept { return moments_; }
  double max_probability() const noexcept { return sorted_.back(); }

  std::size_t zero_count() const noexcept { return zeros_; }
  std::size_t one_count() const noexcept { return ones_; }
  /// Number of entries with p_j > 0.
  std::size_t effective_size() const noexcept { return p_.size() - zeros_; }

  /// Entries strictly inside (0, 1), run-length encoded in ascending order.
  std::span<const ProbabilityGroup> groups() const noexcept { return groups_; }

  /// True when every p_j is 0 or 1 (then lambda2 == lambda).
  bool is_degenerate() const noexcept { return groups_.empty(); }

  /// Parameters of W1 + W2 for independent W1 ~ a, W2 ~ b.
  static BernoulliVector concat(const BernoulliVector& a, const BernoulliVector& b);

 private:
  std::vector<double> p_;
  std::vector<double> sorted_;
  std::vector<ProbabilityGroup> groups_;
  std::size_t zeros_ = 0;
  std::size_t ones_ = 0;
  Moments moments_;
};

/// Moments of p, summed in compensated ascending order.
Moments moments(const BernoulliVector& p);

/// Parses the probability-vector text format: one decimal probability per
/// line, '#' starts a comment line, blank lines are ignored. Errors carry the
/// 1-based line number and `source_name`.
BernoulliVector parse_probability_text(std::string_view text,
                                       const std::string& source_name = "<input>");

BernoulliVector read_probability_file(const std::filesystem::path& path);

}  // namespace pbpois
