#include "pbpois/bounds.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "pbpois/errors.hpp"

namespace pbpois {

namespace bc = bound_constants;

namespace {

constexpr double kTolerance = 1e-12;

std::string alpha_label(double alpha) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, alpha);
  (void)ec;
  return std::string(buf, end);
}

std::string with_alpha(const std::string& base, double alpha) {
  return base + "(alpha=" + alpha_label(alpha) + ")";
}

// 1 - lambda2/lambda without the subtraction
double complement_ratio(const Moments& m) { return m.variance / m.lambda; }

RatioRecord ratio(std::string name, double numerator, double denominator, std::string note = {}) {
  RatioRecord rec{std::move(name), true, 0.0, std::move(note)};
  rec.value = numerator / denominator;
  if (!std::isfinite(rec.value)) {
    rec.applicable = false;
    rec.note = "undefined ratio";
  }
  return rec;
}

RatioRecord no_ratio(std::string name, std::string note) {
  return RatioRecord{std::move(name), false, 0.0, std::move(note)};
}

const char* const kNeedsLambda = "lambda = 0";

}  // namespace

std::string to_string(BoundSide side) {
  switch (side) {
    case BoundSide::lower: return "lower";
    case BoundSide::upper: return "upper";
    case BoundSide::relation: return "relation";
  }
  return "?";
}

bool within_tolerance(double lhs, double rhs, double margin) {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return margin >= -kTolerance * scale;
}

BoundCheckResult make_check(std::string name, BoundSide side, double lhs, double rhs, PrecisionMode precision) {
  BoundCheckResult out;
  out.name = std::move(name);
  out.side = side;
  out.applicable = true;
  out.lhs = lhs;
  out.rhs = rhs;
  out.margin = side == BoundSide::lower ? lhs - rhs : rhs - lhs;
  out.precision = precision;
  // an infinite bound on the permissive side always holds
  if (std::isinf(rhs) && ((side == BoundSide::lower) == (rhs < 0))) {
    out.holds = !std::isnan(lhs);
  } else {
    out.holds = std::isfinite(out.margin) ? within_tolerance(lhs, rhs, out.margin) : out.margin > 0;
  }
  return out;
}

BoundCheckResult not_applicable(std::string name, BoundSide side, std::string note) {
  BoundCheckResult out;
  out.name = std::move(name);
  out.side = side;
  out.note = std::move(note);
  return out;
}

std::array<BoundCheckResult, 2> barbour_hall(const Moments& m, const DivergenceReport& r) {
  if (!(m.lambda > 0)) {
    return {not_applicable("barbour_hall.lower", BoundSide::lower, kNeedsLambda),
            not_applicable("barbour_hall.upper", BoundSide::upper, kNeedsLambda)};
  }
  const double half_tv = 0.5 * r.tv;
  const double lower = std::min(1.0, 1.0 / m.lambda) * m.lambda2 / 32.0;
  const double upper = -std::expm1(-m.lambda) * m.lambda2 / m.lambda;
  return {make_check("barbour_hall.lower", BoundSide::lower, half_tv, lower, r.precision),
          make_check("barbour_hall.upper", BoundSide::upper, half_tv, upper, r.precision)};
}

BoundCheckResult hjk_lower(const Moments& m, const DivergenceReport& r) {
  if (!(m.lambda > 0)) return not_applicable("hjk.lower", BoundSide::lower, kNeedsLambda);
  const double s = m.ratio();
  return make_check("hjk.lower", BoundSide::lower, r.kl, 0.25 * s * s, r.precision);
}

std::array<BoundCheckResult, 2> zacharovas_hwang_upper(const Moments& m, const DivergenceReport& r) {
  std::array<BoundCheckResult, 2> out{
      not_applicable("zacharovas_hwang.upper", BoundSide::upper, "requires lambda2 < lambda"),
      not_applicable("zacharovas_hwang.constant", BoundSide::upper, "requires lambda2 <= lambda/2")};
  if (!(m.lambda > 0) || !(m.variance > 0)) return out;
  const double s = m.ratio();
  const double root = std::expm1(0.5);
  const double comp = complement_ratio(m);
  out[0] = make_check("zacharovas_hwang.upper", BoundSide::upper, r.chi2,
                      2.0 * root * root * s * s / (comp * comp * comp), r.precision);
  if (s <= 0.5) {
    out[1] = make_check("zacharovas_hwang.constant", BoundSide::upper, r.chi2,
                        bc::kZacharovasHwangConstant * s * s, r.precision);
  }
  return out;
}

std::array<BoundCheckResult, 4> envelope_checks(const Moments& m, const DivergenceReport& r) {
  if (!(m.lambda > 0)) {
    return {not_applicable("envelope.kl.lower", BoundSide::lower, kNeedsLambda),
            not_applicable("envelope.kl.upper", BoundSide::upper, kNeedsLambda),
            not_applicable("envelope.chi2.lower", BoundSide::lower, kNeedsLambda),
            not_applicable("envelope.chi2.upper", BoundSide::upper, kNeedsLambda)};
  }
  const double s2 = m.ratio() * m.ratio();
  const double kl_shape = s2 * (1.0 + std::log(m.big_f));
  const double chi2_shape = s2 * std::sqrt(m.big_f);
  return {make_check("envelope.kl.lower", BoundSide::lower, r.kl, bc::kEnvelopeLow * kl_shape, r.precision),
          make_check("envelope.kl.upper", BoundSide::upper, r.kl, bc::kEnvelopeHigh * kl_shape, r.precision),
          make_check("envelope.chi2.lower", BoundSide::lower, r.chi2, bc::kEnvelopeLow * chi2_shape, r.precision),
          make_check("envelope.chi2.upper", BoundSide::upper, r.chi2, bc::kEnvelopeHigh * chi2_shape, r.precision)};
}

std::array<BoundCheckResult, 3> small_probability_checks(const Moments& m, double max_p,
                                                         const DivergenceReport& r) {
  std::array<BoundCheckResult, 3> out{
      not_applicable("small_p.kl_lower", BoundSide::lower, "requires max p <= 1/2"),
      not_applicable("small_p.kl_below_chi2", BoundSide::upper, "requires max p <= 1/2"),
      not_applicable("small_p.chi2_upper", BoundSide::upper, "requires max p <= 1/2 and lambda <= 1/2")};
  if (!(m.lambda > 0) || max_p > 0.5) return out;
  const double s2 = m.ratio() * m.ratio();
  out[0] = make_check("small_p.kl_lower", BoundSide::lower, r.kl, 0.25 * s2, r.precision);
  out[1] = make_check("small_p.kl_below_chi2", BoundSide::upper, r.kl, r.chi2, r.precision);
  if (m.lambda <= 0.5) {
    out[2] = make_check("small_p.chi2_upper", BoundSide::upper, r.chi2, bc::kSmallLambdaChi2 * s2, r.precision);
  }
  return out;
}

std::optional<double> kappa_grid_point(double ratio) {
  for (int i = 1; i <= 9; ++i) {
    const double kappa = i / 10.0;
    if (ratio <= kappa) return kappa;
  }
  return std::nullopt;
}

BoundCheckResult kappa_chi2_upper(const Moments& m, const DivergenceReport& r, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw InputError("kappa must lie in (0, 1)");
  const std::string name = "kappa.chi2_upper(kappa=" + alpha_label(kappa) + ")";
  if (!(m.lambda >= 0.5)) return not_applicable(name, BoundSide::upper, "requires lambda >= 1/2");
  if (m.lambda2 > kappa * m.lambda) return not_applicable(name, BoundSide::upper, "requires lambda2 <= kappa lambda");
  const double s = m.ratio();
  const double c = bc::kKappaChi2 / std::pow(1.0 - kappa, 3);
  return make_check(name, BoundSide::upper, r.chi2, c * s * s, r.precision);
}

std::array<BoundCheckResult, 2> moderate_lambda_checks(const Moments& m, const DivergenceReport& r) {
  if (!(m.lambda >= 0.5)) {
    return {not_applicable("moderate.chi2_upper", BoundSide::upper, "requires lambda >= 1/2"),
            not_applicable("moderate.kl_upper", BoundSide::upper, "requires lambda >= 1/2")};
  }
  return {make_check("moderate.chi2_upper", BoundSide::upper, r.chi2, bc::kModerateChi2 * std::sqrt(m.q), r.precision),
          make_check("moderate.kl_upper", BoundSide::upper, r.kl, bc::kModerateKl * (1.0 + std::log(m.q)),
                     r.precision)};
}

std::array<BoundCheckResult, 2> chi2_floor_checks(const Moments& m, const DivergenceReport& r) {
  std::array<BoundCheckResult, 2> out{
      not_applicable("chi2_floor.shifted", BoundSide::lower, "requires lambda >= 1/2"),
      not_applicable("chi2_floor.degenerate", BoundSide::lower,
                     "requires lambda >= 1/2 and lambda2 >= (1 - c0^2/4) lambda")};
  if (!(m.lambda >= 0.5)) return out;
  const double root_q = std::sqrt(m.q);
  out[0] = make_check("chi2_floor.shifted", BoundSide::lower, 1.0 + r.chi2, bc::kChi2Floor * root_q, r.precision);
  if (m.variance <= 0.25 * bc::kChi2Floor * bc::kChi2Floor * m.lambda) {
    out[1] = make_check("chi2_floor.degenerate", BoundSide::lower, r.chi2, bc::kChi2Floor / 9.0 * root_q,
                        r.precision);
  }
  return out;
}

BoundCheckResult large_lambda_kl_lower(const Moments& m, const DivergenceReport& r) {
  const char* name = "large_lambda.kl_lower";
  if (!(m.lambda > 0) || std::log(m.lambda) < bc::kLargeLambdaLogThreshold) {
    return not_applicable(name, BoundSide::lower, "requires lambda >= exp(2e7)");
  }
  // unreachable for finite binary64 lambda; kept for completeness
  if (m.variance > std::exp(-bc::kLargeLambdaLogThreshold) * m.lambda) {
    return not_applicable(name, BoundSide::lower, "requires lambda2 >= (1 - exp(-2e7)) lambda");
  }
  return make_check(name, BoundSide::lower, r.kl,
                    std::exp(bc::kLargeLambdaKlFactorLog) * (1.0 + std::log(m.q)), r.precision);
}

BoundCheckResult large_lambda_kl_formula(std::size_t n) {
  if (n == 0) return not_applicable("large_lambda.kl_formula", BoundSide::lower, "n = 0");
  ExtendedScope scope(PrecisionPolicy::kDefaultExtendedDigits);
  const Extended nn(static_cast<double>(n));
  const Extended kl = log_factorial_as<Extended>(n) + nn - nn * log(nn);
  BoundCheckResult out = make_check("large_lambda.kl_formula", BoundSide::lower, num::to_double(kl),
                                    std::exp(bc::kLargeLambdaKlFactorLog) * (1.0 + std::log(static_cast<double>(n))),
                                    PrecisionMode::extended);
  out.note = "all-ones closed form; lambda threshold not imposed";
  return out;
}

BoundCheckResult tsallis_vajda_relation(const DivergenceReport& r, double alpha) {
  const std::string name = with_alpha("tsallis_vajda", alpha);
  if (!(alpha >= 2.0)) return not_applicable(name, BoundSide::relation, "requires alpha >= 2");
  if (!(r.lambda > 0)) return not_applicable(name, BoundSide::relation, kNeedsLambda);
  const auto t = r.tsallis.find(alpha);
  const auto v = r.vajda.find(alpha);
  if (t == r.tsallis.end() || v == r.vajda.end()) {
    return not_applicable(name, BoundSide::relation, "alpha not in the report");
  }
  const double factor = std::exp2(alpha) / (alpha - 1.0);
  return make_check(name, BoundSide::relation, t->second, factor * (r.chi2 + v->second), r.precision);
}

BoundCheckResult entropy_gap_upper(const DivergenceReport& r) {
  if (!std::isfinite(r.h_w) || !std::isfinite(r.h_z) || !std::isfinite(r.h2_z)) {
    return not_applicable("entropy_gap.upper", BoundSide::upper, "infinite entropy");
  }
  return make_check("entropy_gap.upper", BoundSide::upper, r.entropy_diff, r.chi2 + r.h2_z * std::sqrt(r.chi2),
                    r.precision);
}

BoundCheckResult poisson_h2_upper(double lambda, double h2) {
  if (!(lambda > 0)) return not_applicable("poisson_h2.upper", BoundSide::upper, kNeedsLambda);
  const double rhs = lambda >= 1.0 ? std::sqrt(50.0) * std::log1p(lambda)
                                   : 5.0 * std::sqrt(lambda) * (1.0 - std::log(lambda));
  return make_check("poisson_h2.upper", BoundSide::upper, h2, rhs);
}

std::array<BoundCheckResult, 2> kl_decomposition_checks(const DivergenceReport& r) {
  return {make_check("kl_split.negative_part", BoundSide::upper, r.kl_negative_part, 1.0, r.precision),
          make_check("kl_split.quadratic", BoundSide::upper, r.kl_quadratic_lower, r.kl, r.precision)};
}

std::array<BoundCheckResult, 2> convolution_checks(const BernoulliVector& a, const BernoulliVector& b,
                                                   const PrecisionPolicy& policy) {
  const std::vector<double> alphas{2.0};
  const DivergenceReport ra = divergence_report(a, alphas, policy);
  const DivergenceReport rb = divergence_report(b, alphas, policy);
  const DivergenceReport rab = divergence_report(BernoulliVector::concat(a, b), alphas, policy);
  const bool any_extended = ra.precision == PrecisionMode::extended || rb.precision == PrecisionMode::extended ||
                            rab.precision == PrecisionMode::extended;
  const PrecisionMode mode = any_extended ? PrecisionMode::extended : PrecisionMode::binary64;
  return {make_check("convolution.kl_subadditive", BoundSide::relation, rab.kl, ra.kl + rb.kl, mode),
          make_check("convolution.chi2_submultiplicative", BoundSide::relation, 1.0 + rab.chi2,
                     (1.0 + ra.chi2) * (1.0 + rb.chi2), mode)};
}

RatioRecord hjk_ratio(const Moments& m, const DivergenceReport& r) {
  if (!(m.lambda > 0)) return no_ratio("hjk.ratio", kNeedsLambda);
  return ratio("hjk.ratio", r.kl, 0.25 * m.ratio() * m.ratio());
}

std::array<RatioRecord, 2> envelope_ratios(const Moments& m, const DivergenceReport& r) {
  if (!(m.lambda > 0)) return {no_ratio("envelope.kl.ratio", kNeedsLambda), no_ratio("envelope.chi2.ratio", kNeedsLambda)};
  const double s2 = m.ratio() * m.ratio();
  return {ratio("envelope.kl.ratio", r.kl, s2 * (1.0 + std::log(m.big_f))),
          ratio("envelope.chi2.ratio", r.chi2, s2 * std::sqrt(m.big_f))};
}

RatioRecord small_probability_ratio(const Moments& m, double max_p, const DivergenceReport& r) {
  if (!(m.lambda > 0) || max_p > 0.5) return no_ratio("small_p.chi2_ratio", "requires max p <= 1/2");
  return ratio("small_p.chi2_ratio", r.chi2, m.ratio() * m.ratio());
}

RatioRecord tsallis_shape(const Moments& m, const DivergenceReport& r, double alpha) {
  const std::string name = with_alpha("tsallis.shape", alpha);
  if (!(alpha > 1.0)) return no_ratio(name, "requires alpha > 1");
  if (!(m.lambda > 0)) return no_ratio(name, kNeedsLambda);
  const auto t = r.tsallis.find(alpha);
  if (t == r.tsallis.end()) return no_ratio(name, "alpha not in the report");
  const double s2 = m.ratio() * m.ratio();
  return ratio(name, t->second, s2 * std::pow(m.big_f, 0.5 * (alpha - 1.0)));
}

RatioRecord vajda_shape(const Moments& m, const DivergenceReport& r, double alpha) {
  const std::string name = with_alpha("vajda.shape", alpha);
  if (!(alpha > 1.0)) return no_ratio(name, "requires alpha > 1");
  if (!(m.lambda > 0)) return no_ratio(name, kNeedsLambda);
  const auto v = r.vajda.find(alpha);
  if (v == r.vajda.end()) return no_ratio(name, "alpha not in the report");
  if (m.lambda <= 0.5) {
    const double log_shape = alpha * std::log(m.lambda2) - 2.0 * (alpha - 1.0) * std::log(m.lambda);
    return ratio(name, v->second, std::exp(log_shape), "small lambda");
  }
  const auto kappa = kappa_grid_point(m.ratio());
  if (!kappa) return no_ratio(name, "lambda2/lambda above 0.9");
  const double shape = std::pow(m.ratio(), alpha) / std::pow(1.0 - *kappa, 1.5 * alpha);
  return ratio(name, v->second, shape, "kappa=" + alpha_label(*kappa));
}

RatioRecord entropy_gap_shape(const Moments& m, const DivergenceReport& r) {
  if (!(m.lambda > 0)) return no_ratio("entropy_gap.shape", kNeedsLambda);
  const double s = m.ratio();
  if (s <= 0.5) return ratio("entropy_gap.shape", r.entropy_diff, s * std::log(2.0 + m.lambda), "log(2+lambda) form");
  return ratio("entropy_gap.shape", r.entropy_diff, s, "general form");
}

std::size_t BoundEvaluation::applicable_count() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.applicable; }));
}

std::size_t BoundEvaluation::violation_count() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.violated(); }));
}

BoundEvaluation evaluate_bounds(const Moments& m, double max_p, const DivergenceReport& r) {
  BoundEvaluation out;
  auto add = [&](const auto& rows) { out.checks.insert(out.checks.end(), rows.begin(), rows.end()); };
  add(barbour_hall(m, r));
  out.checks.push_back(hjk_lower(m, r));
  add(zacharovas_hwang_upper(m, r));
  add(envelope_checks(m, r));
  add(small_probability_checks(m, max_p, r));
  if (const auto kappa = kappa_grid_point(m.ratio())) {
    out.checks.push_back(kappa_chi2_upper(m, r, *kappa));
  } else {
    out.checks.push_back(not_applicable("kappa.chi2_upper", BoundSide::upper, "lambda2/lambda above 0.9"));
  }
  add(moderate_lambda_checks(m, r));
  add(chi2_floor_checks(m, r));
  out.checks.push_back(large_lambda_kl_lower(m, r));
  for (const auto& [alpha, value] : r.tsallis) {
    if (alpha >= 2.0) out.checks.push_back(tsallis_vajda_relation(r, alpha));
  }
  out.checks.push_back(entropy_gap_upper(r));
  out.checks.push_back(poisson_h2_upper(m.lambda, r.h2_z));
  add(kl_decomposition_checks(r));

  out.ratios.push_back(hjk_ratio(m, r));
  const auto env = envelope_ratios(m, r);
  out.ratios.insert(out.ratios.end(), env.begin(), env.end());
  out.ratios.push_back(small_probability_ratio(m, max_p, r));
  for (const auto& [alpha, value] : r.tsallis) {
    if (alpha > 1.0) out.ratios.push_back(tsallis_shape(m, r, alpha));
  }
  for (const auto& [alpha, value] : r.vajda) {
    if (alpha > 1.0) out.ratios.push_back(vajda_shape(m, r, alpha));
  }
  out.ratios.push_back(entropy_gap_shape(m, r));

  if (!(m.lambda > 0)) {
    for (auto& c : out.checks) c = not_applicable(c.name, c.side, kNeedsLambda);
  }
  return out;
}

BoundEvaluation evaluate_bounds(const BernoulliVector& p, const DivergenceReport& r) {
  return evaluate_bounds(p.moments(), p.max_probability(), r);
}

const std::vector<BoundSpec>& bound_catalog() {
  static const std::vector<BoundSpec> catalog = {
      {"barbour_hall.lower", BoundSide::lower, "tv/2 >= min(1, 1/lambda) lambda2 / 32", {{"c", 1.0 / 32}},
       "lambda > 0"},
      {"barbour_hall.upper", BoundSide::upper, "tv/2 <= (1 - exp(-lambda)) lambda2 / lambda", {}, "lambda > 0"},
      {"hjk.lower", BoundSide::lower, "kl >= (lambda2/lambda)^2 / 4", {{"c", 0.25}}, "lambda > 0"},
      {"zacharovas_hwang.upper", BoundSide::upper,
       "chi2 <= 2 (sqrt(e) - 1)^2 s^2 (1 - s)^-3, s = lambda2/lambda", {}, "lambda2 < lambda"},
      {"zacharovas_hwang.constant", BoundSide::upper, "chi2 <= 6.74 s^2", {{"c", bc::kZacharovasHwangConstant}},
       "lambda2 <= lambda/2"},
      {"envelope.kl.lower", BoundSide::lower, "kl >= c1 s^2 (1 + log F)", {{"c1", bc::kEnvelopeLow}}, "lambda > 0"},
      {"envelope.kl.upper", BoundSide::upper, "kl <= c2 s^2 (1 + log F)", {{"c2", bc::kEnvelopeHigh}}, "lambda > 0"},
      {"envelope.chi2.lower", BoundSide::lower, "chi2 >= c1 s^2 sqrt(F)", {{"c1", bc::kEnvelopeLow}}, "lambda > 0"},
      {"envelope.chi2.upper", BoundSide::upper, "chi2 <= c2 s^2 sqrt(F)", {{"c2", bc::kEnvelopeHigh}}, "lambda > 0"},
      {"small_p.kl_lower", BoundSide::lower, "kl >= s^2 / 4", {{"c", 0.25}}, "max p <= 1/2"},
      {"small_p.kl_below_chi2", BoundSide::upper, "kl <= chi2", {}, "max p <= 1/2"},
      {"small_p.chi2_upper", BoundSide::upper, "chi2 <= 15 s^2", {{"c", bc::kSmallLambdaChi2}},
       "max p <= 1/2 and lambda <= 1/2"},
      {"kappa.chi2_upper", BoundSide::upper, "chi2 <= c (1 - kappa)^-3 s^2", {{"c", bc::kKappaChi2}},
       "lambda >= 1/2 and lambda2 <= kappa lambda, kappa = s rounded up to a tenth"},
      {"moderate.chi2_upper", BoundSide::upper, "chi2 <= 19 sqrt(Q)", {{"c", bc::kModerateChi2}}, "lambda >= 1/2"},
      {"moderate.kl_upper", BoundSide::upper, "kl <= 23 log(e Q)", {{"c", bc::kModerateKl}}, "lambda >= 1/2"},
      {"chi2_floor.shifted", BoundSide::lower, "1 + chi2 >= c0 sqrt(Q)", {{"c0", bc::kChi2Floor}}, "lambda >= 1/2"},
      {"chi2_floor.degenerate", BoundSide::lower, "chi2 >= (c0/9) sqrt(Q)", {{"c0", bc::kChi2Floor}},
       "lambda >= 1/2 and lambda2 >= (1 - c0^2/4) lambda"},
      {"large_lambda.kl_lower", BoundSide::lower, "kl >= c0 log(e Q)",
       {{"log c0", bc::kLargeLambdaKlFactorLog}, {"log lambda0", bc::kLargeLambdaLogThreshold}},
       "lambda >= lambda0 and lambda2 >= (1 - 1/lambda0) lambda"},
      {"large_lambda.kl_formula", BoundSide::lower, "log(n! e^n / n^n) >= c0 log(e n)",
       {{"log c0", bc::kLargeLambdaKlFactorLog}}, "all-ones vector of length n, threshold not imposed"},
      {"tsallis_vajda", BoundSide::relation, "T_alpha <= 2^alpha / (alpha - 1) (chi2 + chi_alpha)", {},
       "alpha >= 2"},
      {"entropy_gap.upper", BoundSide::upper, "H(Z) - H(W) <= chi2 + H2(Z) sqrt(chi2)", {}, "finite entropies"},
      {"poisson_h2.upper", BoundSide::upper,
       "H2(Z) <= sqrt(50) log(1 + lambda) if lambda >= 1, 5 sqrt(lambda) log(e/lambda) if lambda <= 1", {},
       "lambda > 0"},
      {"kl_split.negative_part", BoundSide::upper, "-sum_{w<v} w log(w/v) <= 1", {}, "always"},
      {"kl_split.quadratic", BoundSide::upper, "(1/2) sum (w - v)^2 / max(w, v) <= kl", {}, "always"},
      {"convolution.kl_subadditive", BoundSide::relation, "kl(W1 + W2) <= kl(W1) + kl(W2)", {},
       "pairs of vectors"},
      {"convolution.chi2_submultiplicative", BoundSide::relation,
       "1 + chi2(W1 + W2) <= (1 + chi2(W1)) (1 + chi2(W2))", {}, "pairs of vectors"},
      {"hjk.ratio", BoundSide::relation, "kl / (s^2 / 4)", {}, "lambda > 0", false},
      {"envelope.kl.ratio", BoundSide::relation, "kl / (s^2 (1 + log F))", {}, "lambda > 0", false},
      {"envelope.chi2.ratio", BoundSide::relation, "chi2 / (s^2 sqrt(F))", {}, "lambda > 0", false},
      {"small_p.chi2_ratio", BoundSide::relation, "chi2 / s^2", {}, "max p <= 1/2", false},
      {"tsallis.shape", BoundSide::relation, "T_alpha / (s^2 F^((alpha - 1)/2))", {}, "alpha > 1", false},
      {"vajda.shape", BoundSide::relation,
       "chi_alpha lambda^(2(alpha - 1)) / lambda2^alpha if lambda <= 1/2, "
       "chi_alpha (1 - kappa)^(3 alpha/2) / s^alpha otherwise",
       {}, "alpha > 1", false},
      {"entropy_gap.shape", BoundSide::relation,
       "(H(Z) - H(W)) / (s log(2 + lambda)) if s <= 1/2, (H(Z) - H(W)) / s otherwise", {}, "lambda > 0", false},
  };
  return catalog;
}

}  // namespace pbpois
