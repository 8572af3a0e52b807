#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace skewlab {

// An upper bound of the form 2^e with e a signed 64-bit integer, plus an
// exact-zero state. Tail estimates here routinely live at exponents like
// -(3 * 2^37) or 37 - v4 ~ -4.12*10^11, far below the reach of double, so
// bounds are carried symbolically and only converted to double (usually 0.0
// or +0.0-adjacent) at the reporting boundary.
//
// Arithmetic is deliberately lossy upward: plus() and times() round the
// result up to the next power of two. That keeps every operation a one-word
// exponent manipulation while preserving the "is an upper bound" contract.
class Log2Bound {
public:
  // Default-constructed bounds are exact zero.
  Log2Bound() : zero_(true), e_(0) {}

  // Exact zero, the neutral element for max_with and plus.
  static Log2Bound zero() { return Log2Bound(true, 0); }

  // The bound 2^e.
  static Log2Bound pow2(std::int64_t e) { return Log2Bound(false, e); }

  // Upper bound for a positive double: 2^ceil(log2(x)).
  static Log2Bound of_double(double x) {
    if (x <= 0.0) return zero();
    int e = 0;
    double f = std::frexp(x, &e);  // x = f * 2^e, f in [0.5, 1)
    (void)f;
    return pow2(e);
  }

  bool is_zero() const { return zero_; }

  // Exponent of a nonzero bound. Callers must check is_zero() first.
  std::int64_t exponent() const { return e_; }

  // max(this, other): the tighter envelope covering both.
  Log2Bound max_with(const Log2Bound& other) const {
    if (zero_) return other;
    if (other.zero_) return *this;
    return pow2(std::max(e_, other.e_));
  }

  // Upper bound for the sum: 2^a + 2^b <= 2^(max(a,b)+1).
  Log2Bound plus(const Log2Bound& other) const {
    if (zero_) return other;
    if (other.zero_) return *this;
    if (e_ == std::numeric_limits<std::int64_t>::max()) return *this;
    return pow2(std::max(e_, other.e_) + 1);
  }

  // Scale by 2^j (exact).
  Log2Bound shifted(std::int64_t j) const {
    if (zero_) return *this;
    return pow2(e_ + j);
  }

  // Upper bound for multiplication by a positive constant c: round c up to
  // a power of two. Used to fold factors like 2*pi/k into a tail estimate.
  Log2Bound times_const(double c) const {
    if (zero_ || c <= 0.0) return zero();
    return shifted(static_cast<std::int64_t>(std::ceil(std::log2(c))));
  }

  // True when the bound is at most 2^e.
  bool leq_pow2(std::int64_t e) const { return zero_ || e_ <= e; }

  bool leq(const Log2Bound& other) const {
    if (zero_) return true;
    if (other.zero_) return false;
    return e_ <= other.e_;
  }

  // Nearest double, flushing to 0.0 below the subnormal range. Reporting
  // only; comparisons should use leq_pow2.
  double to_double() const {
    if (zero_ || e_ < -1074) return 0.0;
    if (e_ > 1023) return std::numeric_limits<double>::infinity();
    return std::ldexp(1.0, static_cast<int>(e_));
  }

  // "0" or "2^e". The exponent is printed in full; values like
  // 2^-412316860416 are the point of this class.
  std::string to_string() const {
    if (zero_) return "0";
    return "2^" + std::to_string(e_);
  }

  friend bool operator==(const Log2Bound& a, const Log2Bound& b) {
    return a.zero_ == b.zero_ && (a.zero_ || a.e_ == b.e_);
  }

private:
  Log2Bound(bool zero, std::int64_t e) : zero_(zero), e_(e) {}

  bool zero_;
  std::int64_t e_;
};

}  // namespace skewlab
