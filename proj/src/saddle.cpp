#include "pbpois/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pbpois/errors.hpp"

namespace pbpois {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double saddle_tolerance(std::uint64_t k) { return 1e-12 * std::max(1.0, static_cast<double>(k)); }

void require_solvable(const BernoulliVector& p, std::uint64_t k) {
  if (p.is_degenerate()) {
    throw DomainError("saddle equation is degenerate: every probability is 0 or 1");
  }
  if (k < p.one_count() || k >= p.effective_size()) {
    throw DomainError("saddle equation F(r) = " + std::to_string(k) +
                      " has no solution: F ranges over [" + std::to_string(p.one_count()) + ", " +
                      std::to_string(p.effective_size()) + ")");
  }
}

double centered_offset(const BernoulliVector& p, std::uint64_t k) {
  return (static_cast<double>(k) - p.moments().lambda) / p.moments().variance;
}

bool near_mean(const BernoulliVector& p, std::uint64_t k) {
  const Moments& m = p.moments();
  return std::abs(static_cast<double>(k) - m.lambda) <= m.variance / 6.0;
}

// Trapezoid sums of Re h over the nodes of one grid, split at |theta| = pi/2.
struct NodeSums {
  double central = 0.0;
  double outer = 0.0;
  double outer_abs = 0.0;
};

template <class Real>
struct ContourKernel {
  struct Group {
    Real p_r, q, c, a, m;
  };
  std::vector<Group> groups;
  Real drift;  // F(r) - k
  Real two_pi;

  ContourKernel(const BernoulliVector& p, std::uint64_t k, double r) {
    const Real rr(r);
    CompensatedSum<Real> f;
    f.add(Real(p.one_count()));
    for (const ProbabilityGroup& g : p.groups()) {
      Group e;
      const Real pp(g.p);
      e.q = Real(1) - pp;
      e.p_r = pp * rr;
      const Real den = e.q + e.p_r;
      e.c = e.p_r / den;
      e.a = Real(4) * e.q * e.p_r / (den * den);
      e.m = Real(g.count);
      f.add(Real(e.m * e.c));
      groups.push_back(e);
    }
    f.add(Real(-Real(k)));
    drift = f.value();
    two_pi = Real(2 * num::pi<Real>());
  }

  // Integrand h(theta) = prod_l (q_l + p_l r e^{i theta})/(q_l + p_l r) e^{-i k theta}.
  void eval(std::size_t index, std::size_t grid, Real& re, Real& modulus) const {
    using std::atan2;
    using std::cos;
    using std::exp;
    using std::log1p;
    using std::sin;
    const Real theta = two_pi * Real(index) / Real(grid);
    const Real half = theta / 2;
    const Real s_half = sin(half);
    const Real s2 = s_half * s_half;
    const Real st = sin(theta), ct = cos(theta);
    Real log_mod = 0, phase = drift * theta;
    for (const Group& g : groups) {
      log_mod += g.m * log1p(Real(-g.a * s2)) / 2;
      phase += g.m * (atan2(Real(g.p_r * st), Real(g.q + g.p_r * ct)) - g.c * theta);
    }
    modulus = exp(log_mod);
    re = modulus * cos(phase);
  }

  // Adds nodes index = first, first + stride, ... below grid/2 (inclusive).
  void accumulate(std::size_t grid, std::size_t first, std::size_t stride, NodeSums& out) const {
    Real re, mod;
    CompensatedSum<Real> central, outer, outer_abs;
    for (std::size_t i = first; 2 * i <= grid; i += stride) {
      eval(i, grid, re, mod);
      // weight 1 at theta = 0 and theta = pi, 2 elsewhere (conjugate symmetry)
      const bool endpoint = i == 0 || 2 * i == grid;
      const Real w = endpoint ? Real(1) : Real(2);
      if (4 * i < grid) {
        central.add(Real(w * re));
      } else if (4 * i > grid) {
        outer.add(Real(w * re));
        outer_abs.add(Real(w * mod));
      } else {
        central.add(re);
        outer.add(re);
        outer_abs.add(mod);
      }
    }
    out.central += num::to_double(central.value());
    out.outer += num::to_double(outer.value());
    out.outer_abs += num::to_double(outer_abs.value());
  }
};

template <class Real>
Real log_modulus_factor_as(const BernoulliVector& p, std::uint64_t k, double r) {
  using std::log;
  CompensatedSum<Real> acc;
  const Real rr(r);
  for (const ProbabilityGroup& g : p.groups()) {
    const Real pp(g.p);
    acc.add(Real(Real(g.count) * log(Real(Real(1) - pp + pp * rr))));
  }
  const double shift = static_cast<double>(p.one_count()) - static_cast<double>(k);
  if (shift != 0.0) {
    if (r == 0.0) return shift > 0 ? num::neg_inf<Real>() : num::pos_inf<Real>();
    acc.add(Real(Real(shift) * log(rr)));
  }
  return acc.value();
}

template <class Real>
ContourEstimate contour_as(const BernoulliVector& p, const SaddleSolution& s, std::size_t nodes0) {
  ContourEstimate est;
  est.k = s.k;
  est.r = s.r;
  est.log_r_k = num::to_double(log_modulus_factor_as<Real>(p, s.k, s.r));
  if (s.r == 0.0) {
    // k equals the number of sure successes: I_k = 1 exactly
    est.i_k1 = 1.0;
    est.probability = std::exp(est.log_r_k);
    est.log_probability = est.log_r_k;
    return est;
  }
  const ContourKernel<Real> kernel(p, s.k, s.r);
  std::size_t grid = std::max<std::size_t>(8, (nodes0 + 3) / 4 * 4);
  const std::size_t cap = std::max<std::size_t>(std::size_t{1} << 16, 64 * grid);

  NodeSums sums;
  kernel.accumulate(grid, 0, 1, sums);
  double previous = (sums.central + sums.outer) / static_cast<double>(grid);
  double change = 1.0;
  while (true) {
    // new midpoints are the odd indices of the doubled grid
    kernel.accumulate(2 * grid, 1, 2, sums);
    grid *= 2;
    const double current = (sums.central + sums.outer) / static_cast<double>(grid);
    change = std::abs(current - previous) / std::max(std::abs(current), 1e-300);
    previous = current;
    if (change <= 1e-12) break;
    if (grid >= cap) {
      if (change > 1e-9) {
        throw ResolutionError("contour quadrature for k = " + std::to_string(s.k) +
                              " did not converge: relative change " + std::to_string(change) +
                              " at " + std::to_string(grid) + " nodes");
      }
      break;
    }
  }
  const double g = static_cast<double>(grid);
  est.node_count = grid;
  est.last_change = change;
  est.i_k1 = sums.central / g;
  est.i_k2 = sums.outer / g;
  est.i_k2_abs_bound = sums.outer_abs / g;
  const double ik = est.i_k();
  if (ik > 0.0) {
    est.log_probability = est.log_r_k + std::log(ik);
    est.probability = std::exp(est.log_probability);
  } else {
    est.log_probability = num::neg_inf<double>();
    est.probability = 0.0;
  }
  return est;
}

}  // namespace

double SaddleSolution::r_k_value() const { return std::exp(log_r_k); }

bool SaddleSolution::converged() const {
  return std::abs(f_at_r - static_cast<double>(k)) <= saddle_tolerance(k);
}

SaddleMap saddle_map(const BernoulliVector& p, double r) {
  CompensatedSum<double> f, fp;
  f.add(static_cast<double>(p.one_count()));
  for (const ProbabilityGroup& g : p.groups()) {
    const double q = 1.0 - g.p;
    const double den = q + g.p * r;
    const double m = static_cast<double>(g.count);
    f.add(m * g.p * r / den);
    fp.add(m * g.p * q / (den * den));
  }
  return {f.value(), fp.value()};
}

double log_modulus_factor(const BernoulliVector& p, std::uint64_t k, double r) {
  return log_modulus_factor_as<double>(p, k, r);
}

SaddleSolution solve_saddle(const BernoulliVector& p, std::uint64_t k) {
  require_solvable(p, k);
  const Moments& mom = p.moments();
  const double kd = static_cast<double>(k);
  const double ones = static_cast<double>(p.one_count());
  const double n_eff = static_cast<double>(p.effective_size());

  SaddleSolution s;
  s.k = k;
  s.tangent_lower = 1.0 + (kd - mom.lambda) / mom.variance;

  if (k == p.one_count()) {
    const SaddleMap at0 = saddle_map(p, 0.0);
    s.f_at_r = at0.f;
    s.f_prime_at_r = at0.f_prime;
    s.log_r_k = log_modulus_factor(p, k, 0.0);
    return s;
  }

  // F(r) <= ones + r sum p/q and F(r) >= n_eff - (sum q/p)/r
  CompensatedSum<double> sum_odds, sum_inv_odds;
  for (const ProbabilityGroup& g : p.groups()) {
    sum_odds.add(static_cast<double>(g.count) * g.p / (1.0 - g.p));
    sum_inv_odds.add(static_cast<double>(g.count) * (1.0 - g.p) / g.p);
  }
  double lo = std::max({0.0, s.tangent_lower, (kd - ones) / sum_odds.value()});
  double hi = kd <= mom.lambda ? 1.0 : std::max(1.0, sum_inv_odds.value() / (n_eff - kd));
  // rounding in the closed-form upper bound must not exclude the root
  if (hi > 1.0) hi *= 1.0 + 8 * kEps;
  s.bracket = {lo, hi};

  const double tol = saddle_tolerance(k);
  double r = kd == mom.lambda ? 1.0 : std::max(lo, std::numeric_limits<double>::min());
  double prev_residual = std::numeric_limits<double>::infinity();
  SaddleMap fm = saddle_map(p, r);
  int it = 0;
  for (; it < 400; ++it) {
    const double residual = fm.f - kd;
    if (std::abs(residual) <= tol) break;
    if (residual < 0) {
      lo = std::max(lo, r);
    } else {
      hi = std::min(hi, r);
    }
    double next = r - residual / fm.f_prime;
    const bool stalled = std::abs(residual) > 0.5 * prev_residual;
    if (!(next > lo && next < hi) || stalled) {
      next = (lo > 0 && hi > 4 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    }
    prev_residual = std::abs(residual);
    if (next == r) break;
    r = next;
    fm = saddle_map(p, r);
  }
  // a few unguarded Newton steps, kept only if they improve the residual
  for (int polish = 0; polish < 3; ++polish) {
    const double next = r - (fm.f - kd) / fm.f_prime;
    if (!(next > 0)) break;
    const SaddleMap nm = saddle_map(p, next);
    if (std::abs(nm.f - kd) >= std::abs(fm.f - kd)) break;
    r = next;
    fm = nm;
  }
  s.r = r;
  s.f_at_r = fm.f;
  s.f_prime_at_r = fm.f_prime;
  s.iterations = it;
  s.log_r_k = log_modulus_factor(p, k, r);
  return s;
}

BracketRefinement saddle_bracket_refinement(const BernoulliVector& p, std::uint64_t k) {
  BracketRefinement out;
  if (p.is_degenerate() || k < p.one_count() || k >= p.effective_size() || !near_mean(p, k)) {
    return out;
  }
  out.applicable = true;
  const SaddleSolution s = solve_saddle(p, k);
  out.r = s.r;
  const double x = centered_offset(p, k);
  const double dr = std::abs(s.f_at_r - static_cast<double>(k)) / s.f_prime_at_r +
                    4 * kEps * std::max(1.0, s.r);
  out.radius_in_range = s.r >= 5.0 / 6.0 - dr && s.r <= 6.0 / 5.0 + dr;

  const Moments& mom = p.moments();
  if (static_cast<double>(k) == mom.lambda) {
    out.b1 = out.b2 = 0.0;
    out.b1_in_unit = out.b2_in_unit = std::abs(s.r - 1.0) <= dr;
    return out;
  }
  CompensatedSum<double> l2_minus_l3;
  for (const ProbabilityGroup& g : p.groups()) {
    l2_minus_l3.add(static_cast<double>(g.count) * g.p * g.p * (1.0 - g.p));
  }
  const double c1 = 1.44 * x;
  const double c2 = std::pow(1.2, 9) * l2_minus_l3.value() / mom.variance * x * x;
  out.b1 = (s.r - 1.0) / c1;
  out.b2 = (s.r - 1.0 - x) / c2;
  out.b1_tolerance = dr / std::abs(c1);
  out.b2_tolerance = (dr + 4 * kEps * (1.0 + std::abs(x))) / c2;
  out.b1_in_unit = out.b1 >= -out.b1_tolerance && out.b1 <= 1.0 + out.b1_tolerance;
  out.b2_in_unit = out.b2 >= -out.b2_tolerance && out.b2 <= 1.0 + out.b2_tolerance;
  return out;
}

std::size_t default_contour_nodes(std::size_t n) {
  const auto root = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  return std::max<std::size_t>(256, 8 * root);
}

ContourEstimate contour_pmf(const BernoulliVector& p, std::uint64_t k, std::size_t node_count,
                            const PrecisionPolicy& policy) {
  policy.validate();
  const SaddleSolution s = solve_saddle(p, k);
  const std::size_t nodes = node_count == 0 ? default_contour_nodes(p.size()) : node_count;
  if (!policy.is_extended()) return contour_as<double>(p, s, nodes);
  ExtendedScope scope(policy.extended_digits);
  return contour_as<Extended>(p, s, nodes);
}

LogPmf poisson_binomial_pmf_contour(const BernoulliVector& p, const PrecisionPolicy& policy) {
  if (p.is_degenerate()) throw DomainError("contour method needs at least one p_j strictly inside (0, 1)");
  policy.validate();
  LogPmf out;
  out.method = PmfMethod::contour;
  out.log_mass.assign(p.size() + 1, num::neg_inf<double>());
  const std::size_t top = p.effective_size();
  for (std::size_t k = p.one_count(); k < top; ++k) out.log_mass[k] = contour_pmf(p, k, 0, policy).log_probability;
  CompensatedSum<double> log_product;
  for (const ProbabilityGroup& g : p.groups()) log_product.add(static_cast<double>(g.count) * std::log(g.p));
  out.log_mass[top] = log_product.value();
  return out;
}

TailLowerBound tail_lower_bound(const BernoulliVector& p, std::uint64_t k) {
  TailLowerBound out;
  const Moments& m = p.moments();
  const double gap = m.lambda - static_cast<double>(k);
  if (m.variance < 100.0 || gap < 0.0 || gap > m.variance / 6.0) return out;
  out.applicable = true;
  out.log_value = -std::log(10.0 * std::sqrt(m.variance)) - 4.0 * gap * gap / m.variance;
  out.value = std::exp(out.log_value);
  return out;
}

ModulusBoundCheck r_k_log_lower_bound(const BernoulliVector& p, std::uint64_t k) {
  ModulusBoundCheck out;
  const Moments& m = p.moments();
  const double gap = m.lambda - static_cast<double>(k);
  if (p.is_degenerate() || gap < 0.0 || gap > m.variance / 6.0 || k < p.one_count() ||
      k >= p.effective_size()) {
    return out;
  }
  out.applicable = true;
  out.log_r_k = solve_saddle(p, k).log_r_k;
  out.bound = -4.0 * gap * gap / m.variance;
  out.holds = out.log_r_k >= out.bound - 1e-12 * std::max(1.0, std::abs(out.bound));
  return out;
}

OscillatoryBoundCheck oscillatory_factor_lower_bound(const BernoulliVector& p, std::uint64_t k) {
  OscillatoryBoundCheck out;
  const Moments& m = p.moments();
  const double gap = m.lambda - static_cast<double>(k);
  if (m.variance < 100.0 || gap < 0.0 || gap > m.variance / 6.0) return out;
  out.applicable = true;
  out.i_k = contour_pmf(p, k).i_k();
  out.bound = 1.0 / (10.0 * std::sqrt(m.variance));
  out.holds = out.i_k >= out.bound * (1.0 - 1e-12);
  return out;
}

}  // namespace pbpois
