#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pbpois/distributions.hpp"
#include "pbpois/errors.hpp"
#include "pbpois/harness.hpp"
#include "support.hpp"

using namespace pbpois;
using testing_support::rel;

TEST_CASE("family text round-trips through id") {
  for (const char* text : {"equal:n=100,p=0.01", "two-block:heavy=5,light=100,heavy_p=0.9,light_p=0.01",
                           "geometric-decay:n=64,a=0.5,g=0.9", "one-heavy:n=100,heavy_p=0.99,p=0.01",
                           "all-ones:n=200", "random-seeded:n=40,seed=7"}) {
    const FamilySpec spec = parse_family(text);
    CHECK(spec.id() == text);
    CHECK(parse_family(spec.id()).id() == spec.id());
  }
  for (const FamilySpec& spec : default_corpus(20)) {
    CAPTURE(spec.id());
    CHECK(parse_family(spec.id()).generate().probabilities().size() == spec.generate().size());
  }
}

TEST_CASE("family parameters and defaults") {
  const FamilySpec eq = parse_family("equal:n=4,lambda=2");
  CHECK(eq.p == 0.5);
  CHECK(parse_family("one-heavy:n=3,p=0.1").heavy_p == 0.99);
  const BernoulliVector oh = parse_family("one-heavy:n=3,p=0.1").generate();
  CHECK(oh.size() == 4);
  CHECK(oh.max_probability() == 0.99);
  const BernoulliVector geo = family::geometric_decay(3, 0.8, 0.5).generate();
  CHECK(geo.probabilities()[2] == doctest::Approx(0.2));
  CHECK(family::two_block(2, 3).generate().size() == 5);
  CHECK(family::all_ones(7).generate().one_count() == 7);
}

TEST_CASE("malformed family text is an input error") {
  CHECK_THROWS_AS(parse_family("bogus:n=3"), InputError);
  CHECK_THROWS_AS(parse_family("equal:n=3,q=1"), InputError);
  CHECK_THROWS_AS(parse_family("equal:n=x,p=0.1"), InputError);
  CHECK_THROWS_AS(parse_family("equal:p=0.1"), InputError);
  CHECK_THROWS_AS(parse_family("equal:n=3,p"), InputError);
  CHECK_THROWS_AS(parse_family("all-ones:n=3,lambda=2"), InputError);
  CHECK_THROWS_AS(parse_family("equal:n=3,p=1.5").generate(), InputError);
  CHECK_THROWS_AS(parse_family("geometric-decay:n=3,a=0.5,g=0").generate(), InputError);
}

TEST_CASE("seeded probabilities are reproducible and in range") {
  const auto a = seeded_probabilities(50, 9);
  CHECK(a == seeded_probabilities(50, 9));
  CHECK(a != seeded_probabilities(50, 10));
  for (double x : a) {
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("default corpus composition") {
  const auto corpus = default_corpus();
  CHECK(corpus.size() == 867);
  std::size_t ones = 0, random = 0;
  for (const FamilySpec& s : corpus) {
    ones += s.kind == FamilyKind::all_ones;
    random += s.kind == FamilyKind::random_seeded;
  }
  CHECK(ones == 200);
  CHECK(random == 500);
}

TEST_CASE("empty sweep") { CHECK(run_sweep({}).empty()); }

TEST_CASE("sweep keeps input order and records failures") {
  FamilySpec bad = family::equal(3, 2.0);
  const std::vector<FamilySpec> specs = {family::equal(10, 0.1), bad, family::all_ones(5)};
  SweepOptions opts;
  opts.workers = 3;
  const auto recs = run_sweep(specs, opts);
  REQUIRE(recs.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(recs[i].index == i);
  CHECK(recs[0].ok());
  CHECK(recs[1].error_kind == RecordError::input);
  CHECK_FALSE(recs[1].error.empty());
  CHECK(recs[2].ok());
  CHECK(recs[2].report.kl == doctest::Approx(1.7403021806115442).epsilon(1e-12));
}

TEST_CASE("sweep is deterministic across worker counts") {
  const auto corpus = default_corpus(30);
  std::vector<FamilySpec> sample;
  for (std::size_t i = 0; i < corpus.size(); i += 7) sample.push_back(corpus[i]);
  SweepOptions one, many;
  one.workers = 1;
  many.workers = 4;
  const auto a = run_sweep(sample, one);
  const auto b = run_sweep(sample, many);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].report.kl == b[i].report.kl);
    CHECK(a[i].report.chi2 == b[i].report.chi2);
    CHECK(a[i].report.tv == b[i].report.tv);
    CHECK(a[i].bounds.violation_count() == b[i].bounds.violation_count());
  }
}

TEST_CASE("equal-p grid sweep has no violations") {
  std::vector<FamilySpec> specs;
  for (double lambda : {0.1, 0.3, 1.0, 3.0, 10.0}) {
    for (std::size_t n = 2; n <= 256; n *= 2) {
      if (lambda <= static_cast<double>(n)) specs.push_back(family::equal(n, lambda / static_cast<double>(n)));
    }
  }
  for (const SweepRecord& r : run_sweep(specs)) {
    CAPTURE(r.family.id());
    REQUIRE(r.ok());
    CHECK(r.bounds.violation_count() == 0);
    CHECK(r.bounds.applicable_count() > 0);
  }
}

TEST_CASE("empirical constants") {
  const auto single = run_sweep({family::equal(20, 0.1)});
  for (const auto& e : empirical_constants(single)) {
    CHECK(e.min == e.max);
    CHECK(e.count == 1);
    CHECK(e.argmin == e.argmax);
  }
  const auto recs = run_sweep({family::equal(64, 1.0 / 64), family::equal(8, 0.125), family::equal(2, 0.5)});
  for (const auto& e : empirical_constants(recs)) {
    CHECK(e.min <= e.max);
    if (e.name == "hjk.ratio") {
      CHECK(e.min >= 1.0);
      CHECK(e.argmin == "equal:n=64,p=0.015625");
    }
  }
}

TEST_CASE("limit of chi2 over the squared ratio") {
  const auto rows = bv_limit_check({0.05, 5.0, 0.01}, {1000, 10, 10000});
  for (const LimitRow& r : rows) {
    CAPTURE(r.lambda);
    CAPTURE(r.n);
    CHECK(r.holds);
    if (r.n == 1000 && std::abs(r.lambda - 0.05) < 1e-12) {
      CHECK(r.in_regime);
      CHECK(r.ratio >= 0.475);
      CHECK(r.ratio <= 0.525);
    }
    if (r.n == 10 && std::abs(r.lambda - 5.0) < 1e-12) CHECK_FALSE(r.in_regime);
    if (r.n == 10000 && std::abs(r.lambda - 0.01) < 1e-12) CHECK(std::abs(r.ratio - 0.5) <= 0.005);
  }
}

TEST_CASE("degenerate rows") {
  const auto rows = degenerate_asymptotics({1, 5, 100, 200, 1000});
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].kl == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rows[0].chi2 == doctest::Approx(std::numbers::e - 1).epsilon(1e-15));
  CHECK(rows[1].stirling_gap == doctest::Approx(0.016645).epsilon(1e-4));
  CHECK(rows[1].stirling_gap < 1.0 / 60);
  for (const DegenerateRow& r : rows) {
    CAPTURE(r.n);
    CHECK(r.gap_holds);
    CHECK(r.envelope_failures == 0);
    CHECK(r.cross_check_holds);
    CHECK(r.cross_checked == (r.n <= 200));
    if (r.n >= 100) {
      CHECK(r.chi2_ratio >= 0.9);
      CHECK(r.chi2_ratio <= 1.1);
    }
  }
  CHECK(rows[2].chi2_ratio < rows[3].chi2_ratio);
  CHECK(rows[3].chi2_ratio < rows[4].chi2_ratio);
}

TEST_CASE("degenerate sweep summary") {
  const DegenerateSummary s = degenerate_sweep(5000);
  CHECK(s.gap_failures == 0);
  CHECK(s.envelope_failures == 0);
  CHECK(s.ratio_increasing_from_100);
  CHECK(s.min_ratio_from_100 >= 0.9);
  CHECK(s.max_ratio_from_100 <= 1.1);
  // independent closed form: chi2/sqrt(2 pi n) = (n! e^n / n^n - 1)/sqrt(2 pi n) at n = 100
  const double n = 100;
  const double kl = std::lgamma(n + 1) + n - n * std::log(n);
  CHECK(s.min_ratio_from_100 == doctest::Approx(std::expm1(kl) / std::sqrt(2 * std::numbers::pi * n)).epsilon(1e-12));
}

TEST_CASE("entropy structure checks") {
  const auto checks = entropy_structure_checks(20, 16, 2.0, 4, 64);
  CHECK(checks.size() == 20 + 61);
  for (const StructureCheck& c : checks) {
    CAPTURE(c.instance);
    CHECK(c.check.applicable);
    CHECK(c.check.holds);
  }
  // identical vectors give equality in the concavity comparison
  const auto p = seeded_probabilities(16, 5);
  const double h = shannon_entropy(poisson_binomial_pmf_dp(BernoulliVector(p)));
  CHECK(make_check("entropy_concavity", BoundSide::lower, h, 0.5 * (h + h)).margin == 0.0);
}

TEST_CASE("saddle suite on a moderate instance") {
  const SaddleSuiteRow row = saddle_suite(family::equal(400, 0.5));
  CHECK(row.ks_checked == 400);
  CHECK(row.failures() == 0);
  CHECK(row.tail_checked > 0);
  CHECK(row.modulus_checked > 0);
  CHECK(row.oscillatory_checked > 0);
  const SaddleSuiteRow small = saddle_suite(family::random_seeded(30, 4));
  CHECK(small.failures() == 0);
  CHECK(small.tail_checked == 0);
}

TEST_CASE("escalation soundness on a sample") {
  const auto corpus = default_corpus(40);
  SweepOptions ext;
  ext.precision = PrecisionPolicy::extended();
  for (std::size_t i = 0; i < corpus.size(); i += 23) {
    const FamilySpec& spec = corpus[i];
    if (spec.generate().size() > 600) continue;
    CAPTURE(spec.id());
    const SweepRecord a = evaluate_family(spec);
    const SweepRecord b = evaluate_family(spec, ext);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    if (a.report.escalated) continue;
    CHECK(rel(a.report.kl, b.report.kl) < 1e-9);
    CHECK(rel(a.report.chi2, b.report.chi2) < 1e-9);
    CHECK(rel(a.report.tv, b.report.tv) < 1e-9);
  }
}
