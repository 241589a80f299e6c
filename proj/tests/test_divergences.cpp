#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracle.hpp"
#include "pbpois/distributions.hpp"
#include "pbpois/divergences.hpp"
#include "pbpois/errors.hpp"
#include "support.hpp"

using namespace pbpois;
using testing_support::equal;
using testing_support::random_probabilities;
using testing_support::rel;

namespace {

const std::vector<double> kAlphas = {0.5, 1.5, 2.0, 3.0, 4.0};

void compare_with_oracle(const DivergenceReport& r, const oracle::Distances& o, double tol) {
  CHECK(rel(r.tv, o.tv) <= tol);
  CHECK(rel(r.kl, o.kl) <= tol);
  CHECK(rel(r.chi2, o.chi2) <= tol);
  CHECK(rel(r.h_w, o.h_w) <= tol);
  CHECK(rel(r.h_z, o.h_z) <= tol);
  CHECK(rel(r.h2_z, o.h2_z) <= tol);
  CHECK(rel(r.entropy_diff, o.entropy_diff) <= 1e3 * tol);
  CHECK(rel(r.kl_negative_part, o.negative_part) <= tol);
  CHECK(rel(r.kl_quadratic_lower, o.quadratic_lower) <= tol);
  for (const auto& [a, value] : o.renyi) {
    CHECK(rel(r.renyi_at(a), value) <= tol);
    CHECK(rel(r.tsallis_at(a), o.tsallis.at(a)) <= tol);
    if (a >= 1.0) CHECK(rel(r.vajda_at(a), o.vajda.at(a)) <= tol);
  }
}

}  // namespace

TEST_CASE("single fair coin against Poisson(1/2)") {
  const DivergenceReport r = divergence_report(BernoulliVector({0.5}));
  CHECK(r.tv == doctest::Approx(0.3934693402873666).epsilon(1e-14));
  CHECK(r.tv == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-14));
  CHECK(r.kl == doctest::Approx(0.15342640972002736).epsilon(1e-14));
  CHECK(r.chi2 == doctest::Approx(0.23654095302509612).epsilon(1e-14));
  CHECK(r.vajda_at(3.0) == doctest::Approx(0.17628407293441242).epsilon(1e-14));
  CHECK(r.tsallis_at(3.0) == doctest::Approx(0.3494630713934516).epsilon(1e-14));
  CHECK(r.renyi_at(2.0) == doctest::Approx(std::log1p(0.23654095302509612)).epsilon(1e-14));
  CHECK(r.renyi_at(2.0) >= r.kl);
  CHECK(r.renyi_at(1.0) == r.kl);
  CHECK(r.h_w == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(r.h_z == doctest::Approx(0.9276374674957973).epsilon(1e-14));
  CHECK(r.entropy_diff == doctest::Approx(0.23449028693585205).epsilon(1e-13));
  CHECK(r.kl_negative_part == doctest::Approx(0.09657359027997266).epsilon(1e-14));
  CHECK(r.kl_quadratic_lower <= r.kl);
  CHECK_FALSE(r.escalated);
}

TEST_CASE("all-ones vectors have closed-form distances") {
  const DivergenceReport r = divergence_report(equal(5, 1.0));
  CHECK(r.kl == doctest::Approx(std::log(120.0) + 5.0 - 5.0 * std::log(5.0)).epsilon(1e-14));
  CHECK(r.kl == doctest::Approx(1.7403021806115442).epsilon(1e-13));
  CHECK(r.chi2 == doctest::Approx(120.0 * std::exp(5.0) / 3125.0 - 1.0).epsilon(1e-14));
  CHECK(r.chi2 == doctest::Approx(4.6990653095389416).epsilon(1e-13));
  const DivergenceReport one = divergence_report(equal(1, 1.0));
  CHECK(one.kl == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(one.chi2 == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
}

TEST_CASE("lambda = 0 gives identically zero distances") {
  const DivergenceReport r = divergence_report(BernoulliVector({0.0, 0.0, 0.0}));
  CHECK(r.tv == 0.0);
  CHECK(r.kl == 0.0);
  CHECK(r.chi2 == 0.0);
  CHECK(r.entropy_diff == 0.0);
  for (const auto& [a, x] : r.renyi) CHECK(x == 0.0);
  for (const auto& [a, x] : r.vajda) CHECK(x == 0.0);
}

TEST_CASE("reports match the literal-definition oracle") {
  pbpois::ExtendedScope scope(60);
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto raw = random_probabilities(seed, 1 + (seed * 13) % 90);
    const oracle::Distances o = oracle::distances(oracle::product_pmf(raw), kAlphas);
    compare_with_oracle(divergence_report(BernoulliVector(raw), kAlphas), o, 1e-10);
  }
}

TEST_CASE("tiny distances on long vectors stay accurate through escalation") {
  pbpois::ExtendedScope scope(60);
  for (auto [n, lambda] : {std::pair<std::size_t, double>{4096, 1e-3}, {1000, 0.05}, {2048, 1.0}}) {
    const double p = lambda / static_cast<double>(n);
    const oracle::Distances o = oracle::distances(oracle::binomial_pmf(n, p), kAlphas);
    const DivergenceReport r = divergence_report(equal(n, p), kAlphas);
    compare_with_oracle(r, o, 1e-10);
  }
  CHECK(divergence_report(equal(4096, 1e-3 / 4096)).escalated);
}

TEST_CASE("alpha = 2 specializations") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const DivergenceReport r = divergence_report(BernoulliVector(random_probabilities(seed, 1 + seed % 40)));
    CHECK(rel(r.tsallis_at(2.0), r.chi2) <= 1e-12);
    CHECK(rel(r.vajda_at(2.0), r.chi2) <= 1e-12);
    CHECK(rel(r.vajda_at(1.0), r.tv) <= 1e-12);
  }
}

TEST_CASE("hierarchy invariants") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto raw = random_probabilities(seed, 1 + seed % 70);
    if (seed % 3 == 0) {
      for (double& x : raw) x = x * x * x;
    }
    const DivergenceReport r = divergence_report(BernoulliVector(raw));
    CHECK(r.tv >= 0.0);
    CHECK(r.tv <= 2.0);
    CHECK(r.kl >= 0.0);
    CHECK(r.kl <= r.chi2);
    double previous = -1.0;
    for (const auto& [a, d] : r.renyi) {
      CHECK(d >= previous * (1 - 1e-12));
      previous = d;
      if (a != 1.0) {
        const double t = r.tsallis_at(a);
        CHECK(t >= 0.0);
        CHECK(rel(t, std::expm1((a - 1) * d) / (a - 1)) <= 1e-10);
      }
    }
    for (const auto& [a, x] : r.vajda) CHECK(x >= 0.0);
    CHECK(r.kl_negative_part <= 1.0);
    CHECK(r.kl_quadratic_lower <= r.kl * (1 + 1e-12));
  }
}

TEST_CASE("doubling the truncation cap changes nothing beyond tail_epsilon") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const BernoulliVector p(random_probabilities(seed, 5 + seed * 3));
    const DivergenceReport a = divergence_report(p);
    TruncationPolicy doubled;
    doubled.hard_cap = 2.0 * TruncationPolicy{}.cap_for(p.moments().lambda);
    doubled.tail_epsilon = 1e-30;
    const DivergenceReport b = divergence_report(p, default_alpha_grid(), PrecisionPolicy::binary64(), doubled);
    CHECK(b.support_end >= a.support_end);
    for (auto [x, y] : {std::pair{a.tv, b.tv}, {a.kl, b.kl}, {a.chi2, b.chi2}, {a.h_z, b.h_z},
                        {a.h2_z, b.h2_z}, {a.entropy_diff, b.entropy_diff}}) {
      CHECK(std::abs(x - y) <= 1e-15);
    }
  }
}

TEST_CASE("binary64 results agree with extended reruns when not escalated") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const BernoulliVector p(random_probabilities(seed, 10 + seed * 9));
    const DivergenceReport a = divergence_report(p);
    if (a.escalated) continue;
    const DivergenceReport b = divergence_report(p, default_alpha_grid(), PrecisionPolicy::extended(50));
    CHECK(b.precision == PrecisionMode::extended);
    CHECK(rel(a.kl, b.kl) <= 1e-9);
    CHECK(rel(a.chi2, b.chi2) <= 1e-9);
    CHECK(rel(a.tv, b.tv) <= 1e-9);
    for (const auto& [alpha, x] : a.renyi) CHECK(rel(x, b.renyi_at(alpha)) <= 1e-9);
  }
}

TEST_CASE("invalid alpha values") {
  const BernoulliVector p({0.3, 0.4});
  CHECK_THROWS_AS(divergence_report(p, {0.0}), InputError);
  CHECK_THROWS_AS(divergence_report(p, {-1.0}), InputError);
  const LogPmf w = poisson_binomial_pmf_dp(p);
  const LogPmf v = poisson_pmf(0.7, p.size());
  CHECK_THROWS_AS(renyi(w, v, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(vajda_pearson(w, v, 0.5), std::invalid_argument);
}

TEST_CASE("pairwise functions on explicit pmfs") {
  const BernoulliVector p({0.5});
  const LogPmf w = poisson_binomial_pmf_dp(p);
  const LogPmf v = poisson_pmf(0.5, 1);
  CHECK(total_variation(w, v) == doctest::Approx(0.3934693402873666).epsilon(1e-14));
  CHECK(relative_entropy(w, v) == doctest::Approx(0.15342640972002736).epsilon(1e-14));
  CHECK(chi_squared(w, v) == doctest::Approx(0.23654095302509612).epsilon(1e-14));
  CHECK(vajda_pearson(w, v, 3.0) == doctest::Approx(0.17628407293441242).epsilon(1e-14));
  CHECK(tsallis(w, v, 2.0) == doctest::Approx(chi_squared(w, v)).epsilon(1e-14));
  CHECK(renyi(w, v, 2.0) >= relative_entropy(w, v));
  const KlDiagnostics diag = kl_diagnostics(w, v);
  CHECK(diag.negative_part == doctest::Approx(0.09657359027997266).epsilon(1e-14));

  CHECK(total_variation(w, w) == 0.0);
  CHECK(relative_entropy(w, w) == 0.0);
  CHECK(chi_squared(w, w) == 0.0);
  CHECK(renyi(w, w, 3.0) == 0.0);
  CHECK(std::abs(tsallis(v, v, 0.5)) <= 1e-15);
  CHECK(kl_diagnostics(w, w).quadratic_lower == 0.0);

  // w puts mass where v has none
  LogPmf point;
  point.log_mass = {num::neg_inf<double>(), 0.0};
  LogPmf other;
  other.log_mass = {0.0};
  CHECK(std::isinf(relative_entropy(point, other)));
  CHECK(std::isinf(chi_squared(point, other)));
  CHECK(std::isinf(renyi(point, other, 2.0)));
  CHECK(std::isinf(renyi(point, other, 0.5)));
  CHECK(total_variation(point, other) == 2.0);
}

TEST_CASE("entropy of Poisson laws") {
  const LogPmf z1 = poisson_pmf(1.0);
  CHECK(second_log_moment(z1) == doctest::Approx(1.465817516189114).epsilon(1e-13));
  CHECK(second_log_moment(z1) <= std::sqrt(50.0) * std::log(2.0));
  const LogPmf z = poisson_pmf(0.25);
  CHECK(second_log_moment(z) == doctest::Approx(0.9975737025482029).epsilon(1e-13));
  CHECK(second_log_moment(z) <= 5.0 * 0.5 * std::log(std::exp(1.0) / 0.25));
  CHECK(z1.tail_bound > 0.0);
  CHECK(z1.tail_bound < 1e-15);

  LogPmf point;
  point.log_mass = {0.0};
  CHECK(shannon_entropy(point) == 0.0);
  CHECK(second_log_moment(point) == 0.0);
}

TEST_CASE("binomial entropy is dominated by the matched Poisson entropy") {
  for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
    for (std::size_t n = 2; n <= 64; ++n) {
      if (lambda > static_cast<double>(n)) continue;
      const DivergenceReport r = divergence_report(equal(n, lambda / static_cast<double>(n)));
      CHECK(r.entropy_diff >= 0.0);
    }
  }
}

TEST_CASE("high-order Tsallis terms survive underflowing tails") {
  // w_0 = q^4096 ~ e^-1146 sits far below the binary64 range while v_0 = e^-1000,
  // so w_0^4 / v_0^3 must come out negligible rather than as a clamped subnormal
  const BernoulliVector p(std::vector<double>(4096, 0.244140625));
  const DivergenceReport a = divergence_report(p);
  const DivergenceReport b = divergence_report(p, default_alpha_grid(), PrecisionPolicy::extended(60));
  for (double alpha : {1.5, 2.0, 3.0, 4.0}) {
    CHECK(rel(a.tsallis_at(alpha), b.tsallis_at(alpha)) <= 1e-9);
    CHECK(rel(a.vajda_at(alpha), b.vajda_at(alpha)) <= 1e-9);
  }
  CHECK(a.tsallis_at(4.0) == doctest::Approx(0.05205146141).epsilon(1e-9));
}

TEST_CASE("sums stay finite where both laws underflow binary64") {
  const BernoulliVector p = equal(256, 3.0 / 256);
  const DivergenceReport a = divergence_report(p);
  const DivergenceReport b = divergence_report(p, default_alpha_grid(), PrecisionPolicy::extended());
  CHECK(std::isfinite(a.kl_quadratic_lower));
  CHECK(rel(a.kl_quadratic_lower, b.kl_quadratic_lower) < 1e-9);
  for (double alpha : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    CAPTURE(alpha);
    CHECK(std::isfinite(a.vajda_at(alpha)));
    CHECK(rel(a.vajda_at(alpha), b.vajda_at(alpha)) < 1e-9);
  }
  CHECK(rel(a.chi2, b.chi2) < 1e-9);
}
