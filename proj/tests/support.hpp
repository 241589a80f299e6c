#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pbpois/bernoulli.hpp"

namespace testing_support {

inline std::vector<double> random_probabilities(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  for (double& x : p) x = u(gen);
  return p;
}

inline pbpois::BernoulliVector equal(std::size_t n, double p) {
  return pbpois::BernoulliVector(std::vector<double>(n, p));
}

inline double rel(double a, double b) {
  return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

}  // namespace testing_support
