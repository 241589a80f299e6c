#include "pbpois/distributions.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <numbers>
#include <type_traits>

#include "pbpois/errors.hpp"

namespace pbpois {

std::string to_string(PmfMethod m) {
  switch (m) {
    case PmfMethod::dp: return "dp";
    case PmfMethod::dft: return "dft";
    case PmfMethod::contour: return "contour";
    case PmfMethod::poisson: return "poisson";
    case PmfMethod::bruteforce: return "bruteforce";
  }
  return "?";
}

PmfMethod parse_pmf_method(const std::string& text) {
  if (text == "dp") return PmfMethod::dp;
  if (text == "dft") return PmfMethod::dft;
  if (text == "contour") return PmfMethod::contour;
  if (text == "bruteforce") return PmfMethod::bruteforce;
  throw InputError("unknown pmf method '" + text + "' (expected dp, dft, contour or bruteforce)");
}

namespace {

template <class Real>
struct Cplx {
  Real re, im;
};

// log w for w = mass, mapping non-positive values to -inf.
template <class Real>
Real log_or_neg_inf(const Real& x) {
  using std::log;
  if (!(x > 0)) return num::neg_inf<Real>();
  return Real(log(x));
}

// In-place iterative radix-2 transform computing sum_j a_j e^{-2 pi i jk/N}.
template <class Real>
void fft_forward(std::vector<Cplx<Real>>& a) {
  using std::cos;
  using std::sin;
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const Real two_pi = Real(2 * num::pi<Real>());
  std::vector<Cplx<Real>> tw(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const Real ang = Real(two_pi * Real(k) / Real(n));
    tw[k] = {Real(cos(ang)), Real(-sin(ang))};
  }
  Real tr, ti;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const Cplx<Real>& w = tw[j * step];
        Cplx<Real>& u = a[i + j];
        Cplx<Real>& v = a[i + j + half];
        tr = v.re * w.re - v.im * w.im;
        ti = v.re * w.im + v.im * w.re;
        v.re = u.re - tr;
        v.im = u.im - ti;
        u.re += tr;
        u.im += ti;
      }
    }
  }
}

// Direct transform, only the real parts of outputs 0..last are needed.
template <class Real>
std::vector<Real> dft_real_parts(const std::vector<Cplx<Real>>& a, std::size_t last) {
  using std::cos;
  using std::sin;
  const std::size_t n = a.size();
  const Real two_pi = Real(2 * num::pi<Real>());
  std::vector<Real> c(n), s(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Real ang = Real(two_pi * Real(k) / Real(n));
    c[k] = cos(ang);
    s[k] = sin(ang);
  }
  std::vector<Real> out(last + 1);
  for (std::size_t k = 0; k <= last; ++k) {
    CompensatedSum<Real> acc;
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n; ++j) {
      // e^{-i t} = cos t - i sin t; real part of a_j e^{-i t}
      acc.add(Real(a[j].re * c[idx] + a[j].im * s[idx]));
      idx += k;
      if (idx >= n) idx %= n;
    }
    out[k] = acc.value();
  }
  return out;
}

// k log(k/lambda) + lambda - k without cancellation near k = lambda.
double deviance_term(double k, double lambda) {
  if (std::abs(k - lambda) < 0.1 * (k + lambda)) {
    const double v = (k - lambda) / (k + lambda);
    double s = (k - lambda) * v;
    double ej = 2.0 * k * v;
    const double v2 = v * v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v2;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return k * std::log(k / lambda) + lambda - k;
}

// log k! - [(k + 1/2) log k - k + log sqrt(2 pi)]
double stirling_error(double k) {
  constexpr double s0 = 1.0 / 12, s1 = 1.0 / 360, s2 = 1.0 / 1260, s3 = 1.0 / 1680,
                   s4 = 1.0 / 1188;
  if (k <= 15.0) {
    return log_factorial(static_cast<std::uint64_t>(k)) - (k + 0.5) * std::log(k) + k -
           0.5 * std::log(2 * M_PI);
  }
  const double k2 = k * k;
  return (s0 - (s1 - (s2 - (s3 - s4 / k2) / k2) / k2) / k2) / k;
}

}  // namespace

template <class Real>
std::vector<Real> binomial_weights(std::size_t m, const Real& pr, const Real& qr) {
  std::vector<Real> b(m + 1);
  b[0] = pow(qr, Real(m));
  const Real odds = pr / qr;
  for (std::size_t k = 0; k < m; ++k) {
    b[k + 1] = b[k] * Real(m - k) / Real(k + 1) * odds;
  }
  return b;
}

template <class Real>
BasicLogPmf<Real> pmf_dp_as(const BernoulliVector& p) {
  const std::size_t n = p.size();
  const std::size_t ones = p.one_count();
  std::vector<Real> w;
  w.reserve(n + 1);
  w.emplace_back(1);
  Real pr, qr, tmp;
  if constexpr (std::is_same_v<Real, double>) {
    // value = mant[k] * 2^expo[k]; entries are renormalized before they reach
    // the subnormal range so deep tails keep full relative precision
    constexpr double kRescaleBelow = 0x1.0p-600;
    std::vector<double> mant{1.0};
    std::vector<long> expo{0};
    mant.reserve(n + 1);
    expo.reserve(n + 1);
    auto add = [](double a, long ea, double b, long eb, double& m, long& e) {
      if (a == 0.0) {
        m = b;
        e = eb;
      } else if (b == 0.0) {
        m = a;
        e = ea;
      } else if (ea == eb) {
        m = a + b;
        e = ea;
      } else if (ea > eb) {
        m = a + (ea - eb > 1100 ? 0.0 : std::ldexp(b, static_cast<int>(eb - ea)));
        e = ea;
      } else {
        m = b + (eb - ea > 1100 ? 0.0 : std::ldexp(a, static_cast<int>(ea - eb)));
        e = eb;
      }
      if (m != 0.0 && m < kRescaleBelow) {
        int shift = 0;
        m = std::frexp(m, &shift);
        e += shift;
      }
    };
    for (double pj : p.sorted()) {
      if (pj == 0.0 || pj == 1.0) continue;
      const double qj = 1.0 - pj;
      mant.push_back(0.0);
      expo.push_back(0);
      for (std::size_t k = mant.size() - 1; k >= 1; --k) {
        add(mant[k] * qj, expo[k], mant[k - 1] * pj, expo[k - 1], mant[k], expo[k]);
      }
      add(mant[0] * qj, expo[0], 0.0, 0, mant[0], expo[0]);
    }
    BasicLogPmf<Real> out;
    out.method = PmfMethod::dp;
    out.support = SupportKind::exact_finite;
    out.log_mass.assign(n + 1, num::neg_inf<Real>());
    for (std::size_t i = 0; i < mant.size(); ++i) {
      if (mant[i] > 0.0) out.log_mass[ones + i] = std::log(mant[i]) + static_cast<double>(expo[i]) * std::numbers::ln2;
    }
    return out;
  } else {
    // extended: each run of equal p enters as its binomial law, so long
    // equal-p vectors cost O(n) instead of O(n^2)
    std::vector<Real> next;
    for (const ProbabilityGroup& g : p.groups()) {
      pr = Real(g.p);
      qr = Real(1) - pr;
      const std::vector<Real> b = binomial_weights<Real>(g.count, pr, qr);
      next.assign(w.size() + g.count, Real(0));
      for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
          tmp = w[i];
          tmp *= b[j];
          next[i + j] += tmp;
        }
      }
      w.swap(next);
    }
  }
  BasicLogPmf<Real> out;
  out.method = PmfMethod::dp;
  out.support = SupportKind::exact_finite;
  out.log_mass.assign(n + 1, num::neg_inf<Real>());
  for (std::size_t i = 0; i < w.size(); ++i) out.log_mass[ones + i] = log_or_neg_inf(w[i]);
  return out;
}

LogPmf poisson_binomial_pmf_dp(const BernoulliVector& p, const PrecisionPolicy& policy) {
  policy.validate();
  if (!policy.is_extended()) return pmf_dp_as<double>(p);
  ExtendedScope scope(policy.extended_digits);
  return to_binary64(pmf_dp_as<Extended>(p));
}

std::size_t default_dft_nodes(std::size_t n) { return std::bit_ceil(n + 1); }

template <class Real>
BasicLogPmf<Real> pmf_dft_as(const BernoulliVector& p, double radius, std::size_t node_count) {
  using std::atan2;
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  const std::size_t n = p.size();
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InputError("dft radius must be positive and finite");
  }
  if (node_count < n + 1) {
    throw ResolutionError("dft needs at least n + 1 = " + std::to_string(n + 1) +
                          " nodes, got " + std::to_string(node_count));
  }
  const std::size_t nodes = node_count;
  const std::size_t ones = p.one_count();
  const Real two_pi = Real(2 * num::pi<Real>());
  const Real log_r = Real(log(Real(radius)));
  const Real rad = Real(radius);

  std::vector<Real> log_mod(nodes), phase(nodes);
  Real theta, a, b, pr, qr;
  for (std::size_t j = 0; j < nodes; ++j) {
    theta = two_pi * Real(j) / Real(nodes);
    // ones contribute w^ones; reduce the angle exactly before scaling
    const std::size_t turns = (ones % nodes) * j % nodes;
    log_mod[j] = Real(ones) * log_r;
    phase[j] = two_pi * Real(turns) / Real(nodes);
    for (const ProbabilityGroup& g : p.groups()) {
      pr = Real(g.p);
      qr = Real(1) - pr;
      a = qr + pr * rad * cos(theta);
      b = pr * rad * sin(theta);
      log_mod[j] += Real(g.count) * Real(log(Real(a * a + b * b))) / 2;
      phase[j] += Real(g.count) * Real(atan2(b, a));
    }
  }
  Real shift = num::neg_inf<Real>();
  for (const Real& l : log_mod) {
    if (l > shift) shift = l;
  }
  std::vector<Cplx<Real>> vals(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const Real m = Real(exp(Real(log_mod[j] - shift)));
    vals[j] = {Real(m * cos(phase[j])), Real(m * sin(phase[j]))};
  }

  std::vector<Real> re(n + 1);
  if (std::has_single_bit(nodes)) {
    fft_forward(vals);
    for (std::size_t k = 0; k <= n; ++k) re[k] = vals[k].re;
  } else {
    re = dft_real_parts(vals, n);
  }

  BasicLogPmf<Real> out;
  out.method = PmfMethod::dft;
  out.support = SupportKind::exact_finite;
  out.log_mass.assign(nodes, num::neg_inf<Real>());
  const Real log_nodes = Real(log(Real(nodes)));
  for (std::size_t k = 0; k <= n; ++k) {
    if (re[k] > 0) {
      out.log_mass[k] = Real(log(re[k])) - log_nodes + shift - Real(k) * log_r;
    }
  }
  return out;
}

LogPmf poisson_binomial_pmf_dft(const BernoulliVector& p, double radius, std::size_t node_count,
                                const PrecisionPolicy& policy) {
  policy.validate();
  if (!policy.is_extended()) return pmf_dft_as<double>(p, radius, node_count);
  ExtendedScope scope(policy.extended_digits);
  return to_binary64(pmf_dft_as<Extended>(p, radius, node_count));
}

LogPmf pmf_bruteforce(const BernoulliVector& p) {
  const std::size_t n = p.size();
  if (n > kBruteforceMaxSize) {
    throw SizeLimitError("bruteforce enumeration is limited to n <= " +
                         std::to_string(kBruteforceMaxSize) + ", got n = " + std::to_string(n));
  }
  const auto probs = p.probabilities();
  std::vector<CompensatedSum<double>> acc(n + 1);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double prod = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      prod *= (mask >> j) & 1u ? probs[j] : 1.0 - probs[j];
    }
    acc[static_cast<std::size_t>(std::popcount(mask))].add(prod);
  }
  LogPmf out;
  out.method = PmfMethod::bruteforce;
  out.log_mass.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out.log_mass[k] = log_or_neg_inf(acc[k].value());
  return out;
}

template <>
double poisson_log_pmf_as<double>(const double& lambda, std::uint64_t k) {
  if (lambda == 0.0) return k == 0 ? 0.0 : num::neg_inf<double>();
  if (k == 0) return -lambda;
  const double kd = static_cast<double>(k);
  return -0.5 * std::log(2 * M_PI * kd) - stirling_error(kd) - deviance_term(kd, lambda);
}

template <>
Extended poisson_log_pmf_as<Extended>(const Extended& lambda, std::uint64_t k) {
  if (lambda == 0) return k == 0 ? Extended(0) : num::neg_inf<Extended>();
  if (k == 0) return Extended(-lambda);
  return Extended(Extended(k) * log(lambda) - lambda - log_factorial_as<Extended>(k));
}

double poisson_log_pmf(double lambda, std::uint64_t k) {
  if (!(lambda >= 0.0)) throw InputError("Poisson mean must be nonnegative");
  return poisson_log_pmf_as<double>(lambda, k);
}

template <class Real>
std::vector<Real> poisson_log_pmf_range(const Real& lambda, std::size_t last) {
  std::vector<Real> out;
  out.reserve(last + 1);
  for (std::size_t k = 0; k <= last; ++k) out.push_back(poisson_log_pmf_as<Real>(lambda, k));
  return out;
}

// With guard digits to spare, the running recurrence is cheaper than lgamma per entry.
template <>
std::vector<Extended> poisson_log_pmf_range<Extended>(const Extended& lambda, std::size_t last) {
  std::vector<Extended> out;
  out.reserve(last + 1);
  if (lambda == 0) {
    out.emplace_back(0);
    out.resize(last + 1, num::neg_inf<Extended>());
    return out;
  }
  const Extended log_lambda = log(lambda);
  out.emplace_back(-lambda);
  for (std::size_t k = 1; k <= last; ++k) {
    out.emplace_back(out.back() + log_lambda - log(Extended(k)));
  }
  return out;
}

double StirlingSandwich::lower() const { return std::exp(log_lower); }
double StirlingSandwich::upper() const { return std::exp(log_upper); }

StirlingSandwich stirling_sandwich(std::uint64_t k) {
  if (k == 0) throw InputError("Stirling sandwich needs k >= 1");
  const double kd = static_cast<double>(k);
  const double core = (kd + 0.5) * std::log(kd) - kd;
  StirlingSandwich s;
  s.k = k;
  s.log_lower = 0.5 * std::log(2 * M_PI) + core;
  s.log_upper = 1.0 + core;
  s.log_factorial = log_factorial(k);
  return s;
}

bool PoissonSandwich::holds() const {
  const double tol = 1e-12 * std::max(1.0, std::abs(log_pmf));
  const auto below = [&](const PmfBound& b) { return !b.applicable || log_pmf <= b.log_value + tol; };
  const auto above = [&](const PmfBound& b) { return !b.applicable || log_pmf >= b.log_value - tol; };
  return below(universal_upper) && below(central_upper) && above(central_lower) &&
         above(right_lower);
}

PoissonSandwich poisson_pmf_sandwich(double lambda, std::uint64_t k) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InputError("Poisson sandwich needs lambda > 0");
  }
  if (k == 0) throw InputError("Poisson sandwich needs k >= 1");
  const double kd = static_cast<double>(k);
  const double dev2 = (kd - lambda) * (kd - lambda);
  const double log_sqrt_k = 0.5 * std::log(kd);
  const double log_norm = -0.5 * std::log(2 * M_PI * kd);
  PoissonSandwich s;
  s.lambda = lambda;
  s.k = k;
  s.log_pmf = poisson_log_pmf(lambda, k);
  s.universal_upper = {true, log_norm};
  if (kd <= 2 * lambda) {
    s.central_lower = {true, -1.0 - log_sqrt_k - dev2 / lambda};
    s.central_upper = {true, log_norm - dev2 / (3 * lambda)};
  }
  if (kd >= lambda) s.right_lower = {true, -1.0 - log_sqrt_k - dev2 / (2 * lambda)};
  return s;
}

template BasicLogPmf<double> pmf_dp_as<double>(const BernoulliVector&);
template BasicLogPmf<Extended> pmf_dp_as<Extended>(const BernoulliVector&);
template BasicLogPmf<double> pmf_dft_as<double>(const BernoulliVector&, double, std::size_t);
template BasicLogPmf<Extended> pmf_dft_as<Extended>(const BernoulliVector&, double, std::size_t);
template std::vector<double> poisson_log_pmf_range<double>(const double&, std::size_t);

}  // namespace pbpois
