#include "pbpois/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pbpois/distributions.hpp"
#include "pbpois/errors.hpp"

namespace pbpois {

const std::vector<double>& default_alpha_grid() {
  static const std::vector<double> grid = {0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
  return grid;
}

double TruncationPolicy::cap_for(double lambda) const {
  return hard_cap ? *hard_cap : lambda + 50.0 * std::sqrt(lambda + 1.0) + 200.0;
}

void TruncationPolicy::validate() const {
  if (!(tail_epsilon > 0.0)) throw InputError("tail_epsilon must be positive");
  if (hard_cap && !(*hard_cap >= 0.0)) throw InputError("hard_cap must be nonnegative");
}

namespace {

double lookup(const std::map<double, double>& m, double alpha, const char* what) {
  const auto it = m.find(alpha);
  if (it == m.end()) {
    std::ostringstream os;
    os << what << " was not evaluated at alpha = " << alpha;
    throw std::out_of_range(os.str());
  }
  return it->second;
}

// psi(d) = e^d d - expm1(d), the v-weighted relative entropy term; psi(-inf) = 1.
template <class Real>
Real kl_term(const Real& d, const Real& e) {
  using std::abs;
  if (abs(d) < 0.05) {
    const double eps = num::epsilon<Real>();
    Real p = d * d / 2;  // d^j / j!
    Real sum = p;
    for (int j = 3; j < 400; ++j) {
      p *= d;
      p /= j;
      const Real t = p * (j - 1);
      sum += t;
      if (abs(t) <= eps * abs(sum)) break;
    }
    return sum;
  }
  return Real((1 + e) * d - e);
}

// phi_a(d) = expm1(a d) - a expm1(d), so that sum v phi_a = sum w^a v^{1-a} - 1.
template <class Real>
Real power_term(const Real& d, const Real& e, double alpha) {
  using std::abs;
  using std::expm1;
  if (abs(d) < 0.05 && std::abs(alpha) * num::to_double(abs(d)) < 0.5) {
    const double eps = num::epsilon<Real>();
    Real p = d * d / 2;
    Real a_pow = Real(alpha) * alpha;
    Real sum = p * (a_pow - alpha);
    for (int j = 3; j < 400; ++j) {
      p *= d;
      p /= j;
      a_pow *= alpha;
      const Real t = p * (a_pow - alpha);
      sum += t;
      if (abs(t) <= eps * abs(sum)) break;
    }
    return sum;
  }
  return Real(expm1(Real(alpha * d)) - alpha * e);
}

// log |e^d - 1|, -inf at d = 0
template <class Real>
Real log_abs_expm1(const Real& d) {
  using std::exp;
  using std::log1p;
  if (d == 0) return num::neg_inf<Real>();
  if (d > 0) return Real(d + log1p(Real(-exp(Real(-d)))));
  return Real(log1p(Real(-exp(d))));
}

template <class Real>
struct PairSums {
  CompensatedSum<Real> tv, kl, chi2, h_w, h_z, h2, cross, neg, quad;
  std::vector<CompensatedSum<Real>> power;  // per alpha != 1
  std::vector<CompensatedSum<Real>> vajda;  // per alpha >= 1
  bool violation = false;
  double max_exponent = -std::numeric_limits<double>::infinity();
};

template <class Real>
PairSums<Real> accumulate(const std::vector<Real>& lw, const std::vector<Real>& lv,
                          const Real& v_tail, const std::vector<double>& alphas) {
  using std::abs;
  using std::exp;
  using std::expm1;
  using std::pow;
  PairSums<Real> s;
  s.power.resize(alphas.size());
  s.vajda.resize(alphas.size());
  double top_alpha = 2.0;
  for (double a : alphas) top_alpha = std::max(top_alpha, a);

  const std::size_t len = std::max(lw.size(), lv.size());
  const Real neg_inf = num::neg_inf<Real>();
  Real w, v, d, e, t;
  for (std::size_t k = 0; k < len; ++k) {
    const Real& lwk = k < lw.size() ? lw[k] : neg_inf;
    const Real& lvk = k < lv.size() ? lv[k] : neg_inf;
    const bool w_zero = num::is_neg_inf(lwk);
    const bool v_zero = num::is_neg_inf(lvk);
    if (w_zero && v_zero) continue;
    if (v_zero) {
      s.violation = true;
      w = exp(lwk);
      s.tv.add(w);
      s.h_w.add(Real(-w * lwk));
      continue;
    }
    v = exp(lvk);
    s.h_z.add(Real(-v * lvk));
    s.h2.add(Real(v * lvk * lvk));
    if (w_zero) {
      s.tv.add(v);
      s.chi2.add(v);
      s.kl.add(v);
      s.quad.add(Real(v / 2));
      s.cross.add(Real(-v * lvk));
      for (std::size_t i = 0; i < alphas.size(); ++i) {
        s.power[i].add(Real(v * (alphas[i] - 1)));
        s.vajda[i].add(v);
      }
      continue;
    }
    w = exp(lwk);
    s.h_w.add(Real(-w * lwk));
    d = lwk - lvk;
    s.max_exponent = std::max(s.max_exponent, num::to_double(Real(lwk + (top_alpha - 1) * d)));
    if (d < 0) s.neg.add(Real(-w * d));

    if (lvk >= -700) {
      e = expm1(d);
      const Real ae = abs(e);
      s.tv.add(Real(v * ae));
      s.chi2.add(Real(v * e * e));
      s.kl.add(Real(v * kl_term(d, e)));
      s.quad.add(Real(v * e * e / (e > 0 ? Real(1 + e) : Real(1)) / 2));
      s.cross.add(Real(v * e * lvk));
      for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i] != 1.0) s.power[i].add(Real(v * power_term(d, e, alphas[i])));
        if (alphas[i] >= 1.0) s.vajda[i].add(Real(v * pow(ae, alphas[i])));
      }
    } else {
      // v underflows binary64 here; evaluate products in log space
      const Real diff = w - v;
      const Real log_ae = log_abs_expm1(d);  // log |w/v - 1|
      const Real top = lwk > lvk ? lwk : lvk;
      s.tv.add(abs(diff));
      s.chi2.add(Real(exp(Real(lvk + 2 * log_ae))));
      s.kl.add(Real(w * (d - 1) + v));
      s.quad.add(Real(exp(Real(2 * (lvk + log_ae) - top)) / 2));
      s.cross.add(Real(diff * lvk));
      for (std::size_t i = 0; i < alphas.size(); ++i) {
        const double a = alphas[i];
        if (a != 1.0) {
          t = exp(Real(lwk + (a - 1) * d));
          s.power[i].add(Real(t - a * w + (a - 1) * v));
        }
        if (a >= 1.0) s.vajda[i].add(Real(exp(Real(lvk + a * log_ae))));
      }
    }
  }
  if (v_tail > 0) {
    s.tv.add(v_tail);
    s.chi2.add(v_tail);
    s.kl.add(v_tail);
    s.quad.add(Real(v_tail / 2));
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      s.power[i].add(Real(v_tail * (alphas[i] - 1)));
      s.vajda[i].add(v_tail);
    }
  }
  return s;
}

// sum_{w_k > 0, v_k > 0} w_k^a v_k^{1-a}, for a < 1 when the laws are not comparable.
template <class Real>
Real direct_power_sum(const std::vector<Real>& lw, const std::vector<Real>& lv, double alpha) {
  using std::exp;
  std::vector<Real> logs;
  for (std::size_t k = 0; k < std::min(lw.size(), lv.size()); ++k) {
    if (num::is_neg_inf(lw[k]) || num::is_neg_inf(lv[k])) continue;
    logs.push_back(Real(alpha * lw[k] + (1 - alpha) * lv[k]));
  }
  if (logs.empty()) return Real(0);
  const Real top = *std::max_element(logs.begin(), logs.end());
  CompensatedSum<Real> acc;
  for (const Real& l : logs) acc.add(Real(exp(Real(l - top))));
  return Real(acc.value() * exp(top));
}

struct TruncationCut {
  std::size_t last = 0;
  double mass_bound = 0.0;
  double entropy_bound = 0.0;
};

TruncationCut choose_cut(double lambda, std::size_t n, const TruncationPolicy& policy) {
  const double cap_value = std::floor(policy.cap_for(lambda));
  const std::size_t cap = std::max<std::size_t>(n, static_cast<std::size_t>(std::max(0.0, cap_value)));
  TruncationCut cut;
  cut.last = std::max<std::size_t>(n, static_cast<std::size_t>(std::ceil(lambda)));
  const double inf = std::numeric_limits<double>::infinity();
  while (true) {
    const double rho = lambda / (static_cast<double>(cut.last) + 1.0);
    if (rho < 1.0) {
      const double lv = poisson_log_pmf(lambda, cut.last);
      const double sr = std::sqrt(rho);
      cut.mass_bound = std::exp(lv) * rho / (1.0 - rho);
      cut.entropy_bound = 2.17 * std::exp(lv / 2) * sr / (1.0 - sr);
    } else {
      cut.mass_bound = cut.entropy_bound = inf;
    }
    const bool small = cut.mass_bound < policy.tail_epsilon && cut.entropy_bound < policy.tail_epsilon;
    if (small || cut.last >= cap) return cut;
    ++cut.last;
  }
}

// P{Z > last} by explicit summation of the decreasing terms beyond the cut.
template <class Real>
Real poisson_tail_mass(const Real& lambda, const Real& log_v_last, std::size_t last) {
  using std::exp;
  using std::log;
  if (lambda == 0) return Real(0);
  const double eps = num::epsilon<Real>();
  const Real log_lambda = log(lambda);
  Real lt = log_v_last;
  CompensatedSum<Real> acc;
  Real sum = 0;
  for (std::size_t j = last + 1; j < last + 10000000; ++j) {
    lt += log_lambda - log(Real(j));
    const Real t = exp(lt);
    acc.add(t);
    sum = acc.value();
    if (t == 0 || (Real(j) > lambda && t <= sum * eps / 4)) break;
  }
  return sum;
}

template <class Real>
void fill_from_sums(DivergenceReport& r, const PairSums<Real>& s, const std::vector<double>& alphas) {
  using std::log1p;
  using std::sqrt;
  r.tv = num::to_double(s.tv.value());
  r.kl = num::to_double(s.kl.value());
  r.chi2 = num::to_double(s.chi2.value());
  r.h_w = num::to_double(s.h_w.value());
  r.h_z = num::to_double(s.h_z.value());
  r.h2_z = num::to_double(Real(sqrt(s.h2.value())));
  r.entropy_diff = num::to_double(Real(s.kl.value() + s.cross.value()));
  r.kl_negative_part = num::to_double(s.neg.value());
  r.kl_quadratic_lower = num::to_double(s.quad.value());
  r.max_exponent = s.max_exponent;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double a = alphas[i];
    if (a == 1.0) {
      r.renyi[a] = r.kl;
      r.tsallis[a] = r.kl;
      r.notes.push_back("alpha = 1 evaluated as relative entropy");
    } else {
      const Real sm1 = s.power[i].value();
      r.tsallis[a] = num::to_double(Real(sm1 / (a - 1)));
      r.renyi[a] = num::to_double(Real(log1p(sm1) / (a - 1)));
    }
    if (a >= 1.0) r.vajda[a] = num::to_double(s.vajda[i].value());
  }
}

template <class Real>
Real exact_lambda(const BernoulliVector& p) {
  if constexpr (std::is_same_v<Real, double>) {
    return p.moments().lambda;
  } else {
    CompensatedSum<Real> acc;
    for (double x : p.sorted()) acc.add(Real(x));
    return acc.value();
  }
}

template <class Real>
DivergenceReport compute_report(const BernoulliVector& p, const std::vector<double>& alphas,
                                const TruncationPolicy& truncation, PrecisionMode mode) {
  DivergenceReport r;
  r.lambda = p.moments().lambda;
  r.n = p.size();
  r.precision = mode;
  const TruncationCut cut = choose_cut(r.lambda, r.n, truncation);
  r.support_end = cut.last;
  r.truncation_tail_budget = cut.entropy_bound;

  const BasicLogPmf<Real> w = pmf_dp_as<Real>(p);
  const Real lambda = exact_lambda<Real>(p);
  const std::vector<Real> lv = poisson_log_pmf_range<Real>(lambda, cut.last);
  const Real tail = poisson_tail_mass<Real>(lambda, lv.back(), cut.last);
  const PairSums<Real> s = accumulate(w.log_mass, lv, tail, alphas);
  fill_from_sums(r, s, alphas);
  return r;
}

DivergenceReport zero_report(const BernoulliVector& p, const std::vector<double>& alphas,
                             PrecisionMode mode) {
  DivergenceReport r;
  r.n = p.size();
  r.precision = mode;
  r.max_exponent = 0.0;
  for (double a : alphas) {
    r.renyi[a] = 0.0;
    r.tsallis[a] = 0.0;
    if (a >= 1.0) r.vajda[a] = 0.0;
  }
  r.notes.push_back("lambda = 0: both laws are the point mass at 0");
  return r;
}

std::string escalation_trigger(const DivergenceReport& r) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (!(r.chi2 <= 1e12)) return "chi2 above 1e12";
  if (r.max_exponent > 600.0) return "exponent above 600";
  for (const auto& [a, t] : r.tsallis) {
    if (!std::isfinite(t)) return "non-finite tsallis value";
  }
  // per-entry rounding of d = log w - log v in binary64
  const double err_d = eps * (4.0 * (static_cast<double>(r.n) + 1.0) +
                              2.0 * static_cast<double>(r.support_end) + 16.0);
  const double rel_chi = r.chi2 > 0 ? 2.0 * err_d / std::sqrt(r.chi2) : 0.0;
  const double rel_tv = r.tv > 0 ? err_d / r.tv : 0.0;
  if (std::max(rel_chi, rel_tv) > 1e-10) return "binary64 resolution insufficient for distance size";
  return {};
}

bool all_finite(const DivergenceReport& r) {
  bool ok = std::isfinite(r.tv) && std::isfinite(r.kl) && std::isfinite(r.chi2) &&
            std::isfinite(r.h_w) && std::isfinite(r.h_z) && std::isfinite(r.entropy_diff);
  for (const auto& m : {&r.renyi, &r.tsallis, &r.vajda}) {
    for (const auto& [a, x] : *m) ok = ok && std::isfinite(x);
  }
  return ok;
}

void validate_alphas(const std::vector<double>& alphas) {
  for (double a : alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw InputError("alpha must be positive and finite, got " + std::to_string(a));
    }
  }
}

}  // namespace

double DivergenceReport::renyi_at(double alpha) const { return lookup(renyi, alpha, "renyi"); }
double DivergenceReport::tsallis_at(double alpha) const { return lookup(tsallis, alpha, "tsallis"); }
double DivergenceReport::vajda_at(double alpha) const { return lookup(vajda, alpha, "vajda"); }

DivergenceReport divergence_report(const BernoulliVector& p, const std::vector<double>& alphas,
                                   const PrecisionPolicy& policy,
                                   const TruncationPolicy& truncation) {
  validate_alphas(alphas);
  policy.validate();
  truncation.validate();
  if (p.moments().lambda == 0.0) return zero_report(p, alphas, policy.mode);

  if (policy.is_extended()) {
    ExtendedScope scope(policy.extended_digits);
    return compute_report<Extended>(p, alphas, truncation, PrecisionMode::extended);
  }
  DivergenceReport fast = compute_report<double>(p, alphas, truncation, PrecisionMode::binary64);
  const std::string reason = escalation_trigger(fast);
  if (reason.empty()) return fast;

  DivergenceReport slow;
  {
    ExtendedScope scope(std::max(policy.extended_digits, PrecisionPolicy::kDefaultExtendedDigits));
    slow = compute_report<Extended>(p, alphas, truncation, PrecisionMode::extended);
  }
  slow.escalated = true;
  slow.escalation_reason = reason;
  if (!all_finite(slow)) {
    throw EscalationError("extended-precision rerun (" + reason +
                          ") still produced values outside the binary64 range");
  }
  return slow;
}

LogPmf poisson_pmf(double lambda, std::size_t min_last, const TruncationPolicy& truncation) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InputError("Poisson mean must be nonnegative");
  truncation.validate();
  LogPmf out;
  out.method = PmfMethod::poisson;
  if (lambda == 0.0) {
    out.log_mass.assign(min_last + 1, num::neg_inf<double>());
    out.log_mass[0] = 0.0;
    return out;
  }
  const TruncationCut cut = choose_cut(lambda, min_last, truncation);
  out.support = SupportKind::truncated;
  out.log_mass = poisson_log_pmf_range<double>(lambda, cut.last);
  out.tail_bound = poisson_tail_mass<double>(lambda, out.log_mass.back(), cut.last);
  return out;
}

namespace {

PairSums<double> pair(const LogPmf& w, const LogPmf& v, const std::vector<double>& alphas = {}) {
  return accumulate<double>(w.log_mass, v.log_mass, v.tail_bound, alphas);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (alpha == 1.0) {
    throw std::invalid_argument("alpha = 1 is the relative entropy; call relative_entropy");
  }
}

}  // namespace

double total_variation(const LogPmf& w, const LogPmf& v) { return pair(w, v).tv.value(); }

double relative_entropy(const LogPmf& w, const LogPmf& v) {
  const PairSums<double> s = pair(w, v);
  return s.violation ? kInf : s.kl.value();
}

double chi_squared(const LogPmf& w, const LogPmf& v) {
  const PairSums<double> s = pair(w, v);
  return s.violation ? kInf : s.chi2.value();
}

double renyi(const LogPmf& w, const LogPmf& v, double alpha) {
  check_alpha(alpha);
  const PairSums<double> s = pair(w, v, {alpha});
  if (s.violation) {
    if (alpha > 1.0) return kInf;
    return std::log(direct_power_sum(w.log_mass, v.log_mass, alpha)) / (alpha - 1.0);
  }
  return std::log1p(s.power[0].value()) / (alpha - 1.0);
}

double tsallis(const LogPmf& w, const LogPmf& v, double alpha) {
  check_alpha(alpha);
  const PairSums<double> s = pair(w, v, {alpha});
  if (s.violation) {
    if (alpha > 1.0) return kInf;
    return (direct_power_sum(w.log_mass, v.log_mass, alpha) - 1.0) / (alpha - 1.0);
  }
  return s.power[0].value() / (alpha - 1.0);
}

double vajda_pearson(const LogPmf& w, const LogPmf& v, double alpha) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("Vajda-Pearson distance needs alpha >= 1");
  const PairSums<double> s = pair(w, v, {alpha});
  return s.violation ? kInf : s.vajda[0].value();
}

double shannon_entropy(const LogPmf& pmf) {
  CompensatedSum<double> acc;
  for (double l : pmf.log_mass) {
    if (!num::is_neg_inf(l)) acc.add(-std::exp(l) * l);
  }
  return acc.value();
}

double second_log_moment(const LogPmf& pmf) {
  CompensatedSum<double> acc;
  for (double l : pmf.log_mass) {
    if (!num::is_neg_inf(l)) acc.add(std::exp(l) * l * l);
  }
  return std::sqrt(acc.value());
}

double entropy_difference(const LogPmf& w, const LogPmf& v) {
  const PairSums<double> s = pair(w, v);
  if (s.violation) return shannon_entropy(v) - shannon_entropy(w);
  return s.kl.value() + s.cross.value();
}

KlDiagnostics kl_diagnostics(const LogPmf& w, const LogPmf& v) {
  const PairSums<double> s = pair(w, v);
  return {s.neg.value(), s.quad.value()};
}

}  // namespace pbpois
