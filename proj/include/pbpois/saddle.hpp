#pragma once

#include <cstddef>
#include <cstdint>

#include "pbpois/bernoulli.hpp"
#include "pbpois/log_pmf.hpp"
#include "pbpois/numeric.hpp"

namespace pbpois {

/// Interval certified to contain the saddle radius.
struct Bracket {
  double low = 0.0;
  double high = 0.0;
};

/// Solution r of F(r) = sum_l p_l r / (q_l + p_l r) = k.
struct SaddleSolution {
  std::uint64_t k = 0;
  double r = 0.0;
  double f_at_r = 0.0;
  double f_prime_at_r = 0.0;
  Bracket bracket;
  /// 1 + (k - lambda) / (lambda - lambda2), the tangent-line lower bound on r.
  double tangent_lower = 0.0;
  /// log R_k(r) = -k log r + sum_l log(q_l + p_l r).
  double log_r_k = 0.0;
  int iterations = 0;

  double r_k_value() const;
  bool converged() const;
};

/// F and F' at radius r (r >= 0).
struct SaddleMap {
  double f = 0.0;
  double f_prime = 0.0;
};
SaddleMap saddle_map(const BernoulliVector& p, double r);

/// log R_k(r); -inf/+inf conventions for r = 0 follow the limit of the product.
double log_modulus_factor(const BernoulliVector& p, std::uint64_t k, double r);

/// Safeguarded Newton iteration from the left end of the bracket, with
/// bisection whenever a step stalls or leaves the bracket.
/// Throws DomainError when every p_j is 0 or 1, or when k is outside
/// [count of ones, count of positive p_j).
SaddleSolution solve_saddle(const BernoulliVector& p, std::uint64_t k);

/// Quantitative forms near the mean, valid when |k - lambda| <= (lambda - lambda2)/6:
///   5/6 <= r <= 6/5
///   r = 1 + (6/5)^2 b1 (k - lambda)/(lambda - lambda2)
///   r = 1 + x + (6/5)^9 b2 (lambda2 - lambda3)/(lambda - lambda2) x^2,  x = (k - lambda)/(lambda - lambda2)
/// with b1, b2 back-solved from the computed r and checked against [0, 1].
struct BracketRefinement {
  bool applicable = false;
  double r = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  /// Slack allowed on the [0, 1] membership from the uncertainty in r.
  double b1_tolerance = 0.0;
  double b2_tolerance = 0.0;
  bool radius_in_range = false;
  bool b1_in_unit = false;
  bool b2_in_unit = false;

  bool holds() const { return !applicable || (radius_in_range && b1_in_unit && b2_in_unit); }
};
BracketRefinement saddle_bracket_refinement(const BernoulliVector& p, std::uint64_t k);

/// P{W = k} = R_k(r) I_k(r) with I_k evaluated by the trapezoid rule on
/// the circle of radius r. The node count doubles until two estimates
/// agree to 1e-12 relative.
struct ContourEstimate {
  std::uint64_t k = 0;
  double r = 0.0;
  double log_r_k = 0.0;
  /// Contribution of |theta| <= pi/2 to I_k.
  double i_k1 = 0.0;
  /// Contribution of pi/2 < |theta| <= pi to I_k.
  double i_k2 = 0.0;
  /// (1/2 pi) integral of |integrand| over pi/2 < |theta| <= pi, same nodes.
  double i_k2_abs_bound = 0.0;
  std::size_t node_count = 0;
  /// Relative change at the last doubling.
  double last_change = 0.0;
  double probability = 0.0;
  double log_probability = 0.0;

  double i_k() const { return i_k1 + i_k2; }
};

/// max(256, 8 ceil(sqrt n)).
std::size_t default_contour_nodes(std::size_t n);

/// Throws ResolutionError if the estimates still differ by more than 1e-9
/// relative at the node cap; DomainError as for solve_saddle. With an
/// extended policy, R_k and the quadrature run at the configured precision.
ContourEstimate contour_pmf(const BernoulliVector& p, std::uint64_t k, std::size_t node_count = 0,
                            const PrecisionPolicy& policy = PrecisionPolicy::binary64());

/// Whole pmf of W with every admissible k evaluated on its saddle circle.
/// The top entry k = #{p_j > 0} is the product of the positive p_j.
/// Throws DomainError when every p_j is 0 or 1.
LogPmf poisson_binomial_pmf_contour(const BernoulliVector& p,
                                    const PrecisionPolicy& policy = PrecisionPolicy::binary64());

/// (1/(10 sqrt(v))) exp(-4 (lambda - k)^2 / v), v = lambda - lambda2, when
/// 0 <= lambda - k <= v/6 and v >= 100.
struct TailLowerBound {
  bool applicable = false;
  double value = 0.0;
  double log_value = 0.0;
};
TailLowerBound tail_lower_bound(const BernoulliVector& p, std::uint64_t k);

/// log R_k(r(k)) >= -4 (lambda - k)^2 / (lambda - lambda2) when 0 <= lambda - k <= (lambda - lambda2)/6.
struct ModulusBoundCheck {
  bool applicable = false;
  double log_r_k = 0.0;
  double bound = 0.0;
  bool holds = true;
};
ModulusBoundCheck r_k_log_lower_bound(const BernoulliVector& p, std::uint64_t k);

/// I_k(r(k)) >= 1/(10 sqrt(lambda - lambda2)) when lambda - lambda2 >= 100 and
/// 0 <= lambda - k <= (lambda - lambda2)/6.
struct OscillatoryBoundCheck {
  bool applicable = false;
  double i_k = 0.0;
  double bound = 0.0;
  bool holds = true;
};
OscillatoryBoundCheck oscillatory_factor_lower_bound(const BernoulliVector& p, std::uint64_t k);

}  // namespace pbpois
