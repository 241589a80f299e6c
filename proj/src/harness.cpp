#include "pbpois/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <thread>

#include "pbpois/distributions.hpp"
#include "pbpois/errors.hpp"
#include "pbpois/saddle.hpp"

namespace pbpois {

namespace {

std::string format_number(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, end);
}

double parse_double(std::string_view key, std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw InputError("family parameter " + std::string(key) + ": not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_count(std::string_view key, std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("family parameter " + std::string(key) + ": not a non-negative integer: '" +
                     std::string(text) + "'");
  }
  return value;
}

FamilyKind parse_kind(std::string_view text) {
  static const std::pair<std::string_view, FamilyKind> kinds[] = {
      {"equal", FamilyKind::equal},         {"two-block", FamilyKind::two_block},
      {"geometric-decay", FamilyKind::geometric_decay}, {"one-heavy", FamilyKind::one_heavy},
      {"all-ones", FamilyKind::all_ones},   {"random-seeded", FamilyKind::random_seeded}};
  for (const auto& [name, kind] : kinds) {
    if (name == text) return kind;
  }
  throw InputError("unknown family kind '" + std::string(text) + "'");
}

// unit interval draw with a fixed 53-bit mapping
double unit_draw(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::equal: return "equal";
    case FamilyKind::two_block: return "two-block";
    case FamilyKind::geometric_decay: return "geometric-decay";
    case FamilyKind::one_heavy: return "one-heavy";
    case FamilyKind::all_ones: return "all-ones";
    case FamilyKind::random_seeded: return "random-seeded";
  }
  return "?";
}

std::string FamilySpec::id() const {
  std::string out = to_string(kind) + ":";
  switch (kind) {
    case FamilyKind::equal:
      out += "n=" + std::to_string(n) + ",p=" + format_number(p);
      break;
    case FamilyKind::two_block:
      out += "heavy=" + std::to_string(heavy) + ",light=" + std::to_string(light) +
             ",heavy_p=" + format_number(heavy_p) + ",light_p=" + format_number(light_p);
      break;
    case FamilyKind::geometric_decay:
      out += "n=" + std::to_string(n) + ",a=" + format_number(a) + ",g=" + format_number(g);
      break;
    case FamilyKind::one_heavy:
      out += "n=" + std::to_string(n) + ",heavy_p=" + format_number(heavy_p) + ",p=" + format_number(p);
      break;
    case FamilyKind::all_ones:
      out += "n=" + std::to_string(n);
      break;
    case FamilyKind::random_seeded:
      out += "n=" + std::to_string(n) + ",seed=" + std::to_string(seed);
      break;
  }
  return out;
}

std::vector<double> seeded_probabilities(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const int exponent = 1 + static_cast<int>(gen() % 4);
  std::vector<double> p(n);
  for (double& x : p) {
    const double u = unit_draw(gen);
    x = exponent == 1 ? u : std::pow(u, exponent);
  }
  return p;
}

BernoulliVector FamilySpec::generate() const {
  std::vector<double> p_out;
  switch (kind) {
    case FamilyKind::equal:
      p_out.assign(n, p);
      break;
    case FamilyKind::two_block:
      p_out.assign(heavy, heavy_p);
      p_out.insert(p_out.end(), light, light_p);
      break;
    case FamilyKind::geometric_decay: {
      if (!(g > 0.0 && g <= 1.0)) throw InputError("geometric-decay needs 0 < g <= 1");
      p_out.reserve(n);
      double x = a;
      for (std::size_t j = 0; j < n; ++j, x *= g) p_out.push_back(x);
      break;
    }
    case FamilyKind::one_heavy:
      p_out.push_back(heavy_p);
      p_out.insert(p_out.end(), n, p);
      break;
    case FamilyKind::all_ones:
      p_out.assign(n, 1.0);
      break;
    case FamilyKind::random_seeded:
      p_out = seeded_probabilities(n, seed);
      break;
  }
  return BernoulliVector(std::move(p_out));
}

FamilySpec parse_family(std::string_view text) {
  const auto colon = text.find(':');
  FamilySpec spec;
  spec.kind = parse_kind(text.substr(0, colon));
  if (spec.kind == FamilyKind::one_heavy) spec.heavy_p = 0.99;
  std::optional<double> lambda;
  bool have_n = false;
  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InputError("family parameter without '=': '" + std::string(item) + "'");
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    if (key == "n") {
      spec.n = parse_count(key, value);
      have_n = true;
    } else if (key == "p") {
      spec.p = parse_double(key, value);
    } else if (key == "lambda") {
      lambda = parse_double(key, value);
    } else if (key == "heavy") {
      spec.heavy = parse_count(key, value);
    } else if (key == "light") {
      spec.light = parse_count(key, value);
    } else if (key == "heavy_p") {
      spec.heavy_p = parse_double(key, value);
    } else if (key == "light_p") {
      spec.light_p = parse_double(key, value);
    } else if (key == "a") {
      spec.a = parse_double(key, value);
    } else if (key == "g") {
      spec.g = parse_double(key, value);
    } else if (key == "seed") {
      spec.seed = parse_count(key, value);
    } else {
      throw InputError("unknown family parameter '" + std::string(key) + "'");
    }
  }
  const bool needs_n = spec.kind != FamilyKind::two_block && spec.kind != FamilyKind::one_heavy;
  if (needs_n && !have_n) throw InputError(to_string(spec.kind) + " family needs n");
  if (lambda) {
    if (spec.kind != FamilyKind::equal) throw InputError("lambda is only accepted by the equal family");
    if (spec.n == 0) throw InputError("equal family with lambda needs n >= 1");
    spec.p = *lambda / static_cast<double>(spec.n);
  }
  return spec;
}

namespace family {
FamilySpec equal(std::size_t n, double p) {
  FamilySpec s;
  s.kind = FamilyKind::equal;
  s.n = n;
  s.p = p;
  return s;
}
FamilySpec two_block(std::size_t heavy, std::size_t light, double heavy_p, double light_p) {
  FamilySpec s;
  s.kind = FamilyKind::two_block;
  s.heavy = heavy;
  s.light = light;
  s.heavy_p = heavy_p;
  s.light_p = light_p;
  return s;
}
FamilySpec geometric_decay(std::size_t n, double a, double g) {
  FamilySpec s;
  s.kind = FamilyKind::geometric_decay;
  s.n = n;
  s.a = a;
  s.g = g;
  return s;
}
FamilySpec one_heavy(std::size_t tail, double tail_p, double heavy_p) {
  FamilySpec s;
  s.kind = FamilyKind::one_heavy;
  s.n = tail;
  s.p = tail_p;
  s.heavy_p = heavy_p;
  return s;
}
FamilySpec all_ones(std::size_t n) {
  FamilySpec s;
  s.kind = FamilyKind::all_ones;
  s.n = n;
  return s;
}
FamilySpec random_seeded(std::size_t n, std::uint64_t seed) {
  FamilySpec s;
  s.kind = FamilyKind::random_seeded;
  s.n = n;
  s.seed = seed;
  return s;
}
}  // namespace family

std::vector<FamilySpec> default_corpus(std::size_t random_count, std::uint64_t base_seed) {
  std::vector<FamilySpec> out;
  for (int j = 0; j <= 12; ++j) {
    const std::size_t n = std::size_t{1} << j;
    for (int i = 0; i <= 12; ++i) {
      const double lambda = std::pow(10.0, -3.0 + 0.5 * i);
      if (lambda <= static_cast<double>(n)) out.push_back(family::equal(n, lambda / static_cast<double>(n)));
    }
  }
  for (std::size_t heavy : {1, 2, 5, 20}) {
    for (std::size_t light : {0, 10, 100, 1000}) out.push_back(family::two_block(heavy, light));
  }
  for (double a : {0.5, 0.9}) {
    for (double g : {0.5, 0.9}) {
      for (std::size_t n : {8, 64, 512}) out.push_back(family::geometric_decay(n, a, g));
    }
  }
  out.push_back(family::one_heavy(0, 0.01));
  for (std::size_t tail : {10, 100, 1000}) {
    for (double p : {0.001, 0.01}) out.push_back(family::one_heavy(tail, p));
  }
  for (std::size_t n = 1; n <= 200; ++n) out.push_back(family::all_ones(n));
  for (std::uint64_t i = 1; i <= random_count; ++i) {
    const std::uint64_t seed = base_seed + i;
    out.push_back(family::random_seeded(1 + (seed * 37) % 200, seed));
  }
  return out;
}

SweepRecord evaluate_family(const FamilySpec& spec, const SweepOptions& options) {
  SweepRecord rec;
  rec.family = spec;
  try {
    const BernoulliVector p = spec.generate();
    rec.n = p.size();
    rec.moments = p.moments();
    rec.max_p = p.max_probability();
    rec.report = divergence_report(p, options.alphas, options.precision, options.truncation);
    rec.bounds = evaluate_bounds(rec.moments, rec.max_p, rec.report);
  } catch (const InputError& e) {
    rec.error_kind = RecordError::input;
    rec.error = e.what();
  } catch (const EscalationError& e) {
    rec.error_kind = RecordError::escalation;
    rec.error = e.what();
  } catch (const std::exception& e) {
    rec.error_kind = RecordError::other;
    rec.error = e.what();
  }
  return rec;
}

std::vector<SweepRecord> run_sweep(const std::vector<FamilySpec>& specs, const SweepOptions& options) {
  std::vector<SweepRecord> out(specs.size());
  if (specs.empty()) return out;
  unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, specs.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      out[i] = evaluate_family(specs[i], options);
      out[i].index = i;
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return out;
}

std::vector<EmpiricalConstantReport> empirical_constants(const std::vector<SweepRecord>& records) {
  std::vector<EmpiricalConstantReport> out;
  std::map<std::string, std::size_t> slot;
  for (const SweepRecord& rec : records) {
    if (!rec.ok()) continue;
    for (const RatioRecord& r : rec.bounds.ratios) {
      if (!r.applicable) continue;
      auto [it, inserted] = slot.emplace(r.name, out.size());
      if (inserted) {
        out.push_back({r.name, r.value, rec.family.id(), r.value, rec.family.id(), 0});
      }
      EmpiricalConstantReport& e = out[it->second];
      if (r.value < e.min) {
        e.min = r.value;
        e.argmin = rec.family.id();
      }
      if (r.value > e.max) {
        e.max = r.value;
        e.argmax = rec.family.id();
      }
      ++e.count;
    }
  }
  return out;
}

std::vector<LimitRow> bv_limit_check(const std::vector<double>& lambdas, const std::vector<std::size_t>& ns,
                                     const SweepOptions& options) {
  std::vector<LimitRow> out;
  for (double lambda : lambdas) {
    for (std::size_t n : ns) {
      const double p = lambda / static_cast<double>(n);
      if (!(p > 0.0 && p <= 1.0)) continue;
      const BernoulliVector vec(std::vector<double>(n, p));
      const Moments m = vec.moments();
      const DivergenceReport r = divergence_report(vec, {2.0}, options.precision, options.truncation);
      LimitRow row;
      row.lambda = m.lambda;
      row.n = n;
      row.lambda2 = m.lambda2;
      row.regime = std::pow(m.lambda, 6) * m.lambda2;
      row.in_regime = row.regime <= 1e-6;
      row.ratio = r.chi2 / (m.ratio() * m.ratio());
      row.holds = !row.in_regime || std::abs(row.ratio - 0.5) <= 0.025;
      out.push_back(row);
    }
  }
  return out;
}

namespace {

Moments all_ones_moments(std::size_t n) {
  const double nd = static_cast<double>(n);
  Moments m;
  m.lambda = nd;
  m.lambda2 = nd;
  m.lambda3 = nd;
  m.big_f = nd;
  m.q = nd;
  m.q0 = 1.0;
  m.variance = 0.0;
  return m;
}

std::size_t envelope_failures(std::size_t n, double kl, double chi2) {
  DivergenceReport r;
  r.lambda = static_cast<double>(n);
  r.n = n;
  r.kl = kl;
  r.chi2 = chi2;
  r.precision = PrecisionMode::extended;
  const auto rows = envelope_checks(all_ones_moments(n), r);
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& c) { return c.violated(); }));
}

}  // namespace

std::vector<DegenerateRow> degenerate_asymptotics(const std::vector<std::size_t>& ns) {
  std::vector<DegenerateRow> out;
  for (std::size_t n : ns) {
    if (n == 0) continue;
    DegenerateRow row;
    row.n = n;
    {
      ExtendedScope scope(PrecisionPolicy::kDefaultExtendedDigits);
      const Extended nn(static_cast<double>(n));
      const Extended kl = log_factorial_as<Extended>(n) + nn - nn * log(nn);
      const Extended gap = kl - log(2 * num::pi<Extended>() * nn) / 2;
      row.kl = num::to_double(kl);
      row.chi2 = num::to_double(expm1(kl));
      row.stirling_gap = num::to_double(gap);
      row.gap_holds = gap > 0 && gap * 12 * nn < 1;
    }
    row.chi2_ratio = row.chi2 / std::sqrt(2.0 * num::pi<double>() * static_cast<double>(n));
    row.envelope_failures = envelope_failures(n, row.kl, row.chi2);
    if (n <= 200) {
      const DivergenceReport r = divergence_report(BernoulliVector(std::vector<double>(n, 1.0)), {2.0});
      row.cross_checked = true;
      row.cross_check_holds = relative_gap(r.kl, row.kl) <= 1e-10 && relative_gap(r.chi2, row.chi2) <= 1e-10;
    }
    out.push_back(row);
  }
  return out;
}

DegenerateSummary degenerate_sweep(std::size_t n_max) {
  namespace bc = bound_constants;
  DegenerateSummary s;
  s.n_max = n_max;
  s.min_ratio_from_100 = INFINITY;
  s.max_ratio_from_100 = -INFINITY;
  const double two_pi = 2.0 * num::pi<double>();
  double previous_ratio = -INFINITY;

  // the gap margin near n = 1e6 is about 1/(360 n^3) ~ 3e-21 against kl ~ 8
  ExtendedScope scope(30);
  const Extended half_log_two_pi = log(2 * num::pi<Extended>()) / 2;
  Extended log_fact = 0, log_n, gap, nn, scaled;
  for (std::size_t n = 1; n <= n_max; ++n) {
    nn = static_cast<double>(n);
    log_n = log(nn);
    log_fact += log_n;
    // gap = log n! + n - (n + 1/2) log n - log(2 pi)/2
    gap = log_fact + nn - (nn + 0.5) * log_n - half_log_two_pi;
    scaled = gap * nn;
    if (!(gap > 0 && scaled * 12 < 1)) {
      if (s.gap_failures++ == 0) s.first_gap_failure = n;
    }
    const double nd = static_cast<double>(n);
    const double kl = num::to_double(gap) + 0.5 * std::log(two_pi * nd);
    const double chi2 = std::expm1(kl);
    // all-ones: lambda2/lambda = 1 and F = n
    const double kl_shape = 1.0 + std::log(nd);
    const double chi2_shape = std::sqrt(nd);
    const double bounds[4][2] = {{kl, bc::kEnvelopeLow * kl_shape},
                                 {bc::kEnvelopeHigh * kl_shape, kl},
                                 {chi2, bc::kEnvelopeLow * chi2_shape},
                                 {bc::kEnvelopeHigh * chi2_shape, chi2}};
    for (const auto& [big, small] : bounds) {
      if (!within_tolerance(big, small, big - small)) ++s.envelope_failures;
    }
    if (n >= 100) {
      const double ratio = chi2 / std::sqrt(two_pi * nd);
      s.min_ratio_from_100 = std::min(s.min_ratio_from_100, ratio);
      s.max_ratio_from_100 = std::max(s.max_ratio_from_100, ratio);
      if (!(ratio > previous_ratio)) s.ratio_increasing_from_100 = false;
      previous_ratio = ratio;
    }
  }
  return s;
}

std::vector<StructureCheck> entropy_structure_checks(std::size_t pair_count, std::size_t length, double lambda,
                                                     std::size_t n_min, std::size_t n_max) {
  std::vector<StructureCheck> out;
  auto entropy_of = [](const std::vector<double>& p) {
    return shannon_entropy(poisson_binomial_pmf_dp(BernoulliVector(p)));
  };
  for (std::size_t i = 0; i < pair_count; ++i) {
    const std::uint64_t seed_a = 2 * i + 1, seed_b = 2 * i + 2;
    const std::vector<double> a = seeded_probabilities(length, seed_a);
    const std::vector<double> b = seeded_probabilities(length, seed_b);
    std::vector<double> mid(length);
    for (std::size_t j = 0; j < length; ++j) mid[j] = 0.5 * (a[j] + b[j]);
    const double average = 0.5 * (entropy_of(a) + entropy_of(b));
    out.push_back({make_check("entropy_concavity", BoundSide::lower, entropy_of(mid), average),
                   "random-seeded:n=" + std::to_string(length) + ",seed=" + std::to_string(seed_a) + " + seed=" +
                       std::to_string(seed_b)});
  }
  const double h_z = shannon_entropy(poisson_pmf(lambda));
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const FamilySpec spec = family::equal(n, lambda / static_cast<double>(n));
    const double h_w = entropy_of(std::vector<double>(n, spec.p));
    out.push_back({make_check("entropy_domination", BoundSide::upper, h_w, h_z), spec.id()});
  }
  return out;
}

SaddleSuiteRow saddle_suite(const FamilySpec& spec) {
  SaddleSuiteRow row;
  row.instance = spec.id();
  const BernoulliVector p = spec.generate();
  const LogPmf w = poisson_binomial_pmf_dp(p);
  const std::size_t lo = p.one_count();
  const std::size_t hi = p.size() - p.zero_count();
  for (std::size_t k = lo; k < hi; ++k) {
    const SaddleSolution s = solve_saddle(p, k);
    ++row.ks_checked;
    const bool in_bracket = s.converged() && s.r >= s.bracket.low && s.r <= s.bracket.high &&
                            (k == lo || s.r >= s.tangent_lower * (1 - 1e-12));
    if (!in_bracket) ++row.bracket_failures;

    const BracketRefinement refine = saddle_bracket_refinement(p, k);
    if (refine.applicable) {
      ++row.refinement_checked;
      if (!refine.holds()) ++row.refinement_failures;
    }
    const ModulusBoundCheck modulus = r_k_log_lower_bound(p, k);
    if (modulus.applicable) {
      ++row.modulus_checked;
      if (!modulus.holds) ++row.modulus_failures;
    }
    const OscillatoryBoundCheck osc = oscillatory_factor_lower_bound(p, k);
    if (osc.applicable) {
      ++row.oscillatory_checked;
      if (!osc.holds) ++row.oscillatory_failures;
    }
    const TailLowerBound tail = tail_lower_bound(p, k);
    if (tail.applicable) {
      ++row.tail_checked;
      if (!(w.log_mass[k] >= tail.log_value - 1e-12 * std::max(1.0, std::abs(tail.log_value)))) ++row.tail_failures;
    }
  }
  return row;
}

std::vector<FamilySpec> default_saddle_corpus() {
  std::vector<FamilySpec> out;
  for (std::size_t n : {400, 800, 1600}) out.push_back(family::equal(n, 0.5));
  out.push_back(family::equal(1000, 0.2));
  out.push_back(family::two_block(100, 1000, 0.9, 0.3));
  out.push_back(family::random_seeded(600, 11));
  out.push_back(family::random_seeded(50, 3));
  out.push_back(family::geometric_decay(64, 0.9, 0.9));
  return out;
}

}  // namespace pbpois
