#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace pbpois {

/// Variable-precision binary floating point backed by MPFR. Precision is
/// taken from the active ExtendedScope when a value is first constructed.
using Extended = boost::multiprecision::mpfr_float;

enum class PrecisionMode { binary64, extended };

std::string to_string(PrecisionMode mode);
PrecisionMode parse_precision_mode(const std::string& text);

struct PrecisionPolicy {
  static constexpr unsigned kMinExtendedDigits = 30;
  static constexpr unsigned kDefaultExtendedDigits = 50;

  PrecisionMode mode = PrecisionMode::binary64;
  unsigned extended_digits = kDefaultExtendedDigits;

  static PrecisionPolicy binary64() { return {}; }
  static PrecisionPolicy extended(unsigned digits = kDefaultExtendedDigits) {
    return {PrecisionMode::extended, digits};
  }

  bool is_extended() const noexcept { return mode == PrecisionMode::extended; }

  /// Throws InputError when extended_digits is below the supported minimum.
  void validate() const;
};

/// Sets the MPFR default precision for the lifetime of the scope.
///
/// The precision is process-wide state in MPFR/Boost 1.74, so scopes are
/// serialized through a recursive mutex; nested scopes on the same thread are
/// allowed and restore the enclosing precision on exit.
class ExtendedScope {
 public:
  explicit ExtendedScope(unsigned digits10);
  ~ExtendedScope();

  ExtendedScope(const ExtendedScope&) = delete;
  ExtendedScope& operator=(const ExtendedScope&) = delete;

  unsigned digits() const noexcept { return digits_; }

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned previous_;
  unsigned digits_;
};

namespace num {

template <class Real>
inline Real neg_inf() {
  return -std::numeric_limits<Real>::infinity();
}

template <class Real>
inline Real pos_inf() {
  return std::numeric_limits<Real>::infinity();
}

template <class Real>
inline bool is_neg_inf(const Real& x) {
  return (boost::math::isinf)(x) && x < 0;
}

template <class Real>
inline bool is_finite(const Real& x) {
  return (boost::math::isfinite)(x);
}

template <class T>
inline double to_double(const T& x) {
  if constexpr (std::is_arithmetic_v<T>) {
    return static_cast<double>(x);
  } else {
    // also accepts unevaluated Extended expressions
    return Extended(x).template convert_to<double>();
  }
}

template <class Real>
inline Real pi() {
  return boost::math::constants::pi<Real>();
}

template <class Real>
inline Real from_double(double x) {
  return Real(x);
}

/// Unit roundoff of Real at the currently active precision.
template <class Real>
inline double epsilon() {
  if constexpr (std::is_same_v<Real, double>) {
    return std::numeric_limits<double>::epsilon();
  } else {
    Real e = std::numeric_limits<Real>::epsilon();
    return to_double(e);
  }
}

}  // namespace num

/// Neumaier-compensated accumulator.
template <class Real>
class CompensatedSum {
 public:
  CompensatedSum() : sum_(0), comp_(0) {}

  void add(const Real& x) {
    using std::abs;
    Real t = sum_ + x;
    if (abs(sum_) >= abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  Real value() const { return Real(sum_ + comp_); }

 private:
  Real sum_;
  Real comp_;
};

/// Compensated sum of terms taken in ascending order of magnitude.
/// The result is independent of the input order.
template <class Real>
Real sum_ascending(std::vector<Real> terms) {
  using std::abs;
  std::sort(terms.begin(), terms.end(),
            [](const Real& a, const Real& b) { return abs(a) < abs(b); });
  CompensatedSum<Real> acc;
  for (const Real& t : terms) acc.add(t);
  return acc.value();
}

/// log(k!). Cumulative log summation for k <= 20, log-gamma beyond.
double log_factorial(std::uint64_t k);

template <class Real>
Real log_factorial_as(std::uint64_t k);

/// Largest k for which log_factorial uses the cumulative table.
inline constexpr std::uint64_t kLogFactorialTableMax = 20;

/// log(exp(a) + exp(b)) without overflow.
template <class Real>
Real log_add_exp(const Real& a, const Real& b) {
  using std::exp;
  using std::log1p;
  if (num::is_neg_inf(a)) return b;
  if (num::is_neg_inf(b)) return a;
  if (a >= b) return Real(a + log1p(exp(Real(b - a))));
  return Real(b + log1p(exp(Real(a - b))));
}

/// |a - b| relative to the larger magnitude.
inline double relative_gap(double a, double b) {
  const double scale = std::max({1e-300, std::abs(a), std::abs(b)});
  return std::abs(a - b) / scale;
}

}  // namespace pbpois
