#include "pbpois/numeric.hpp"

#include <array>

#include "pbpois/errors.hpp"

namespace pbpois {

std::string to_string(PrecisionMode mode) {
  return mode == PrecisionMode::binary64 ? "binary64" : "extended";
}

PrecisionMode parse_precision_mode(const std::string& text) {
  if (text == "binary64" || text == "double") return PrecisionMode::binary64;
  if (text == "extended") return PrecisionMode::extended;
  throw InputError("unknown precision mode '" + text + "' (expected binary64 or extended)");
}

void PrecisionPolicy::validate() const {
  if (mode == PrecisionMode::extended && extended_digits < kMinExtendedDigits) {
    throw InputError("extended precision needs at least " + std::to_string(kMinExtendedDigits) +
                     " decimal digits, got " + std::to_string(extended_digits));
  }
}

namespace {

std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}

std::array<double, kLogFactorialTableMax + 1> make_log_factorial_table() {
  std::array<double, kLogFactorialTableMax + 1> t{};
  t[0] = 0.0;
  for (std::uint64_t k = 1; k <= kLogFactorialTableMax; ++k) {
    t[k] = t[k - 1] + std::log(static_cast<double>(k));
  }
  return t;
}

}  // namespace

ExtendedScope::ExtendedScope(unsigned digits10)
    : lock_(precision_mutex()), previous_(Extended::default_precision()), digits_(digits10) {
  Extended::default_precision(digits10);
}

ExtendedScope::~ExtendedScope() { Extended::default_precision(previous_); }

double log_factorial(std::uint64_t k) {
  static const auto table = make_log_factorial_table();
  if (k <= kLogFactorialTableMax) return table[k];
  return std::lgamma(static_cast<double>(k) + 1.0);
}

template <>
double log_factorial_as<double>(std::uint64_t k) {
  return log_factorial(k);
}

template <>
Extended log_factorial_as<Extended>(std::uint64_t k) {
  if (k <= kLogFactorialTableMax) {
    Extended acc = 0;
    for (std::uint64_t j = 2; j <= k; ++j) acc += log(Extended(j));
    return acc;
  }
  return Extended(lgamma(Extended(k + 1)));
}

}  // namespace pbpois
