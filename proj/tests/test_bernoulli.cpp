#include <algorithm>
#include <random>

#include "doctest.h"
#include "pbpois/bernoulli.hpp"
#include "pbpois/errors.hpp"
#include "support.hpp"

using namespace pbpois;

TEST_CASE("moments of all-ones vectors equal n") {
  for (std::size_t n : {1u, 2u, 7u, 100u}) {
    const Moments m = testing_support::equal(n, 1.0).moments();
    CHECK(m.lambda == n);
    CHECK(m.lambda2 == n);
    CHECK(m.lambda3 == n);
    CHECK(m.big_f == doctest::Approx(double(n)));
    CHECK(m.q == doctest::Approx(double(n)));
    CHECK(m.q0 == 1.0);
  }
}

TEST_CASE("moments of small equal vectors") {
  const Moments m = testing_support::equal(2, 0.5).moments();
  CHECK(m.lambda == 1.0);
  CHECK(m.lambda2 == 0.5);
  CHECK(m.lambda3 == 0.25);
  CHECK(m.big_f == 1.0);
  CHECK(m.q == 1.0);

  const Moments big = testing_support::equal(400, 0.5).moments();
  CHECK(big.lambda == 200.0);
  CHECK(big.lambda2 == 100.0);
  CHECK(big.big_f == 2.0);
  CHECK(big.q == 2.0);
  CHECK(big.q0 == 0.01);
}

TEST_CASE("moment invariants and permutation invariance") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto p = testing_support::random_probabilities(seed, 3 + seed % 40);
    const BernoulliVector a(p);
    std::mt19937_64 gen(seed * 7);
    std::shuffle(p.begin(), p.end(), gen);
    const BernoulliVector b(p);
    const Moments ma = a.moments(), mb = b.moments();
    CHECK(ma.lambda == mb.lambda);
    CHECK(ma.lambda2 == mb.lambda2);
    CHECK(ma.lambda3 == mb.lambda3);
    CHECK(ma.lambda3 <= ma.lambda2);
    CHECK(ma.lambda2 <= ma.lambda);
    CHECK(ma.lambda2 <= ma.lambda * a.max_probability());
    CHECK(ma.lambda <= double(a.size()));
    CHECK(ma.big_f >= 1.0);
    CHECK(ma.q > 0.0);
  }
}

TEST_CASE("zeros, ones and groups") {
  const BernoulliVector v({0.0, 0.3, 1.0, 0.3, 0.0, 0.7});
  CHECK(v.zero_count() == 2);
  CHECK(v.one_count() == 1);
  CHECK(v.effective_size() == 4);
  REQUIRE(v.groups().size() == 2);
  CHECK(v.groups()[0].p == 0.3);
  CHECK(v.groups()[0].count == 2);
  CHECK_FALSE(v.is_degenerate());
  CHECK(BernoulliVector({1.0, 0.0, 1.0}).is_degenerate());
}

TEST_CASE("invalid vectors are rejected") {
  CHECK_THROWS_AS(BernoulliVector(std::vector<double>{}), InputError);
  CHECK_THROWS_AS(BernoulliVector({0.5, 1.2}), InputError);
  CHECK_THROWS_AS(BernoulliVector({-0.1}), InputError);
  CHECK_THROWS_AS(BernoulliVector({std::nan("")}), InputError);
}

TEST_CASE("probability text parsing") {
  const BernoulliVector v = parse_probability_text("# header\n0.5\n\n  0.25 \n#x\n1e-3\r\n");
  REQUIRE(v.size() == 3);
  CHECK(v.probabilities()[1] == 0.25);
  CHECK(v.probabilities()[2] == 0.001);

  try {
    parse_probability_text("1.2\n", "probs.txt");
    FAIL("expected an InputError");
  } catch (const InputError& e) {
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).find("probs.txt:1:") == 0);
  }
  try {
    parse_probability_text("0.1\n# ok\nabc\n");
    FAIL("expected an InputError");
  } catch (const InputError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_probability_text("# nothing\n\n"), InputError);
  CHECK_THROWS_AS(read_probability_file("/nonexistent/file.txt"), InputError);
}

TEST_CASE("concatenation") {
  const BernoulliVector c = BernoulliVector::concat(BernoulliVector({0.1, 0.2}), BernoulliVector({0.3}));
  CHECK(c.size() == 3);
  CHECK(c.moments().lambda == doctest::Approx(0.6));
}
