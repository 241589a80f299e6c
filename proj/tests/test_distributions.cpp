#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "pbpois/distributions.hpp"
#include "pbpois/errors.hpp"
#include "support.hpp"

using namespace pbpois;
using testing_support::equal;
using testing_support::random_probabilities;

namespace {

void check_masses(const LogPmf& pmf, const std::vector<double>& expected, double tol) {
  REQUIRE(pmf.size() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) {
    CHECK(pmf.mass(k) == doctest::Approx(expected[k]).epsilon(0).scale(1).epsilon(tol));
  }
}

double max_abs_diff(const LogPmf& a, const LogPmf& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k) {
    worst = std::max(worst, std::abs(a.mass(k) - b.mass(k)));
  }
  return worst;
}

}  // namespace

TEST_CASE("dp on small vectors") {
  check_masses(poisson_binomial_pmf_dp(equal(2, 0.5)), {0.25, 0.5, 0.25}, 1e-15);
  const LogPmf one = poisson_binomial_pmf_dp(BernoulliVector({1.0}));
  CHECK(one.mass(0) == 0.0);
  CHECK(one.mass(1) == 1.0);
  check_masses(poisson_binomial_pmf_dp(BernoulliVector({0.0, 0.3, 0.0})), {0.7, 0.3, 0.0, 0.0},
               1e-15);
}

TEST_CASE("dp matches exhaustive enumeration") {
  for (std::uint64_t seed = 100; seed < 200; ++seed) {
    const BernoulliVector p(random_probabilities(seed, 1 + seed % 15));
    const LogPmf dp = poisson_binomial_pmf_dp(p);
    const LogPmf bf = pmf_bruteforce(p);
    CHECK(max_abs_diff(dp, bf) <= 1e-13);
    CHECK(std::abs(dp.stored_mass() - 1.0) <= 1e-12);
  }
}

TEST_CASE("bruteforce examples and size limit") {
  check_masses(pmf_bruteforce(BernoulliVector({0.3})), {0.7, 0.3}, 1e-15);
  check_masses(pmf_bruteforce(equal(3, 0.5)), {0.125, 0.375, 0.375, 0.125}, 1e-15);
  CHECK_THROWS_AS(pmf_bruteforce(equal(21, 0.5)), SizeLimitError);
}

TEST_CASE("dft examples") {
  check_masses(poisson_binomial_pmf_dft(equal(2, 0.5), 1.0, 4), {0.25, 0.5, 0.25, 0.0}, 1e-15);
  const LogPmf shifted = poisson_binomial_pmf_dft(equal(2, 1.0), 2.0, 3);
  check_masses(shifted, {0.0, 0.0, 1.0}, 1e-15);
  CHECK_THROWS_AS(poisson_binomial_pmf_dft(equal(5, 0.5), 1.0, 5), ResolutionError);
  CHECK_THROWS_AS(poisson_binomial_pmf_dft(equal(5, 0.5), -1.0, 8), InputError);
}

TEST_CASE("dft agrees with dp for n <= 64, radix-2 and direct transforms") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t n = 1 + seed % 64;
    const BernoulliVector p(random_probabilities(seed, n));
    const LogPmf dp = poisson_binomial_pmf_dp(p);
    CHECK(max_abs_diff(dp, poisson_binomial_pmf_dft(p, 1.0, default_dft_nodes(n))) <= 1e-12);
    CHECK(max_abs_diff(dp, poisson_binomial_pmf_dft(p, 1.0, n + 1)) <= 1e-12);
  }
}

TEST_CASE("extended dp and dft agree in relative terms deep in the tail") {
  const BernoulliVector p = equal(512, 0.05);
  const LogPmf dp = poisson_binomial_pmf_dp(p, PrecisionPolicy::extended(50));
  const LogPmf dft = poisson_binomial_pmf_dft(p, 1.0, 1024, PrecisionPolicy::extended(300));
  for (std::size_t k = 0; k <= 512; ++k) {
    if (dp.log_mass[k] < std::log(1e-250)) continue;
    CHECK(std::abs(std::expm1(dft.log_mass[k] - dp.log_mass[k])) <= 1e-10);
  }
}

TEST_CASE("dp is permutation invariant bit for bit") {
  auto raw = random_probabilities(42, 300);
  const LogPmf a = poisson_binomial_pmf_dp(BernoulliVector(raw));
  std::mt19937_64 gen(9);
  std::shuffle(raw.begin(), raw.end(), gen);
  const LogPmf b = poisson_binomial_pmf_dp(BernoulliVector(raw));
  CHECK(a.log_mass == b.log_mass);
}

TEST_CASE("P{W=0} <= P{Z=0}") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const BernoulliVector p(random_probabilities(seed, 1 + seed % 50));
    const LogPmf dp = poisson_binomial_pmf_dp(p);
    CHECK(dp.log_mass[0] <= -p.moments().lambda + 1e-12);
  }
}

TEST_CASE("Poisson log pmf") {
  CHECK(poisson_log_pmf(1.0, 0) == -1.0);
  CHECK(poisson_log_pmf(0.0, 0) == 0.0);
  CHECK(std::isinf(poisson_log_pmf(0.0, 3)));
  CHECK(testing_support::rel(poisson_log_pmf(200.0, 200), -3.568513882798138005063611) <= 1e-12);
  CHECK(testing_support::rel(poisson_log_pmf(1234.5, 3000), -903.2609266898451196946281) <= 1e-12);
  CHECK_THROWS_AS(poisson_log_pmf(-1.0, 0), InputError);
}

TEST_CASE("binary64 Poisson log pmf tracks the extended evaluation") {
  ExtendedScope scope(50);
  for (double lambda : {1e-3, 0.5, 3.0, 47.25, 1000.0, 1e4, 1e6}) {
    for (std::uint64_t k : {0ull, 1ull, 2ull, 10ull, 100ull, 999ull, 10000ull, 1000000ull}) {
      const double fast = poisson_log_pmf(lambda, k);
      const double slow = num::to_double(poisson_log_pmf_as<Extended>(Extended(lambda), k));
      CHECK(std::abs(fast - slow) <= 1e-13 * std::max(1.0, std::abs(slow)));
    }
  }
}

TEST_CASE("Stirling sandwich") {
  const StirlingSandwich one = stirling_sandwich(1);
  CHECK(one.lower() == doctest::Approx(0.92213700889578911688).epsilon(1e-14));
  CHECK(one.upper() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(one.holds());
  CHECK(stirling_sandwich(2).holds());
  const StirlingSandwich ten = stirling_sandwich(10);
  CHECK(ten.lower() <= 3628800.0);
  CHECK(ten.upper() >= 3628800.0);
  for (std::uint64_t k = 1; k <= 10000; ++k) CHECK(stirling_sandwich(k).holds());
  CHECK_THROWS_AS(stirling_sandwich(0), InputError);
}

TEST_CASE("Poisson pmf sandwich examples") {
  const PoissonSandwich a = poisson_pmf_sandwich(1.0, 1);
  CHECK(std::exp(a.log_pmf) == doctest::Approx(std::exp(-1.0)));
  CHECK(std::exp(a.universal_upper.log_value) == doctest::Approx(0.3989422804014327));
  CHECK(a.holds());

  const PoissonSandwich b = poisson_pmf_sandwich(4.0, 4);
  REQUIRE(b.central_lower.applicable);
  CHECK(std::exp(b.central_lower.log_value) == doctest::Approx(0.1839397205857211608));
  CHECK(std::exp(b.log_pmf) == doctest::Approx(0.1953668148131645898));
  CHECK(std::exp(b.central_upper.log_value) == doctest::Approx(0.19947114020071633897));

  const PoissonSandwich c = poisson_pmf_sandwich(4.0, 6);
  REQUIRE(c.right_lower.applicable);
  CHECK(std::exp(c.right_lower.log_value) == doctest::Approx(0.091092506431524452976));
  CHECK(std::exp(c.log_pmf) == doctest::Approx(0.10419563456702111456));

  CHECK_FALSE(poisson_pmf_sandwich(4.0, 9).central_lower.applicable);
  CHECK_FALSE(poisson_pmf_sandwich(4.0, 3).right_lower.applicable);
}

TEST_CASE("Poisson pmf sandwiches hold on a logarithmic grid") {
  std::size_t failures = 0;
  for (int e = -6; e <= 8; ++e) {
    const double lambda = std::pow(10.0, e / 2.0);
    for (std::uint64_t k = 1; k <= 10000; ++k) {
      if (!poisson_pmf_sandwich(lambda, k).holds()) ++failures;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("dp keeps relative precision far below the binary64 range") {
  const double p = 0.244140625;
  const std::size_t n = 4096;
  const LogPmf w = poisson_binomial_pmf_dp(equal(n, p));
  // closed form log C(n,k) + k log p + (n-k) log q
  for (std::size_t k : {0u, 1u, 10u, 300u, 1000u, 3000u, 4095u, 4096u}) {
    const double expected = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                            static_cast<double>(k) * std::log(p) + static_cast<double>(n - k) * std::log1p(-p);
    CHECK(w.log_mass[k] == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(w.log_mass[0] == doctest::Approx(-1146.470122).epsilon(1e-9));

  // p close to 1 drives the low end down instead
  const LogPmf heavy = poisson_binomial_pmf_dp(equal(2000, 0.999));
  CHECK(heavy.log_mass[0] == doctest::Approx(2000 * std::log1p(-0.999)).epsilon(1e-12));
}
