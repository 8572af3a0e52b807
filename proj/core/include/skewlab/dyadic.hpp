#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "skewlab/errors.hpp"
#include "skewlab/log2bound.hpp"

namespace skewlab {

// An angle on the circle R/Z stored exactly as num / 2^exp with
// 0 <= num < 2^exp. Canonical form: num is odd, or the angle is exactly
// zero (num = 0, exp = 0). All arithmetic is exact and wraps mod 1.
//
// Exponents are plain int64 values and may be astronomically large
// (the tower of heights reaches v4 = 412316860454), but canonical
// numerators are capped by a global digit budget (default 2^20 bits).
// Sparse values like 2^(37 - v4) cost one word; an operation whose exact
// result would need a dense numerator wider than the budget throws
// resource_error before allocating. This keeps memory use predictable:
// every stored angle is at most budget/8 bytes, no matter its exponent.
class DyadicAngle {
public:
  // The zero angle.
  DyadicAngle() : num_(0), exp_(0) {}

  // num / 2^exp, reduced mod 1 and canonicalized. Negative num wraps
  // (floor reduction), exp <= 0 yields an integer, hence zero.
  DyadicAngle(mpz_class num, std::int64_t exp);

  DyadicAngle(std::uint64_t num, std::int64_t exp)
      : DyadicAngle(mpz_class(static_cast<unsigned long>(num)), exp) {}

  static DyadicAngle zero() { return DyadicAngle(); }

  // 2^-e mod 1 (e >= 1 gives a nonzero angle, e <= 0 wraps to zero).
  static DyadicAngle inv_pow2(std::int64_t e) { return DyadicAngle(mpz_class(1), e); }

  // Exact image of a double in [0,1). Doubles are dyadic rationals, so no
  // rounding happens here; pair with round_to for a coarser grid.
  static DyadicAngle from_double_exact(double x);

  // Parses the hex-float form produced by to_hex: "0x0p+0", "0x1p-3",
  // "0x1.8p-5", optionally without the leading "0x". Bare "0" is accepted.
  // The value must land in [0,1) after reduction; integers parse to zero.
  static DyadicAngle parse_hex(const std::string& text);

  bool is_zero() const { return num_ == 0; }
  const mpz_class& numerator() const { return num_; }
  std::int64_t exponent() const { return exp_; }

  // Number of bits in the canonical numerator (0 for the zero angle).
  std::int64_t numerator_bits() const;

  DyadicAngle add(const DyadicAngle& other) const;
  DyadicAngle sub(const DyadicAngle& other) const { return add(other.negate()); }

  // 1 - x mod 1. Dense when x is dense; sparse tiny x throws on budget
  // (its complement is a run of exp one-bits).
  DyadicAngle negate() const;

  // x * 2^j mod 1 for j >= 0. Multiplying past the exponent wraps to zero.
  DyadicAngle mul_pow2(std::int64_t j) const;

  // Nearest point of the 2^-frac_bits grid (half rounds up, 1 wraps to 0).
  // Exact values on a coarser grid pass through unchanged.
  DyadicAngle round_to(std::int64_t frac_bits) const;

  // Distance to 0 on the circle: min(x, 1-x), exact, in [0, 1/2].
  DyadicAngle dist_to_zero() const;

  // Strict comparison x < 2^e by exponent arithmetic only. This is how
  // bounds like frac(n3 * alpha) < 2^(-3 * n3) are checked: both sides sit
  // at exponents near -4*10^11, far beyond floating point.
  bool less_than_pow2(std::int64_t e) const;

  // Three-way comparison of representatives in [0,1).
  int compare(const DyadicAngle& other) const;

  bool operator==(const DyadicAngle& other) const {
    return exp_ == other.exp_ && num_ == other.num_;
  }
  bool operator!=(const DyadicAngle& other) const { return !(*this == other); }
  bool operator<(const DyadicAngle& other) const { return compare(other) < 0; }

  // Nearest double (values below the subnormal range flush to 0.0).
  double to_double() const;

  // Exact hex-float literal: "0x0p+0" for zero, else "0x1.<frac>p-<e>"
  // with trailing zero digits stripped. Round-trips through parse_hex.
  std::string to_hex() const;

  // Global numerator budget in bits. Guarded operations throw
  // resource_error instead of allocating past it.
  static std::int64_t digit_budget();
  static void set_digit_budget(std::int64_t bits);

private:
  void canonicalize();

  mpz_class num_;
  std::int64_t exp_;
};

// x * 2^j mod 1: the doubling-map orbit of an angle, used by the
// multiplicative lemma checks. Exact for any j >= 0.
inline DyadicAngle mul_pow2_mod1(const DyadicAngle& x, std::int64_t j) {
  return x.mul_pow2(j);
}

// The tower of heights: v1 = 1, v_{k+1} = k * 2^{v_k} + v_k + 1, so
// v = 1, 4, 37, 412316860454, ... and n_k = 2^{v_k}. The recursion is
// doubly exponential: v5 would need about 4*10^11 bits, so v_seq(5)
// throws resource_error.
struct VSeq {
  // values[k] is v_k for 1 <= k <= K; values[0] is unused.
  std::vector<mpz_class> values;

  int K() const { return static_cast<int>(values.size()) - 1; }

  // v_k as int64 (all reachable v_k fit: v4 < 2^39).
  std::int64_t v_int(int k) const;
};

VSeq v_seq(int K);

// Partial sum alpha_K = sum_{k<=K} 2^{-v_k}, exact, plus a symbolic bound
// for the dropped tail: sum_{k>K} 2^{-v_k} < 2^{1-v_{K+1}}.
// alpha_partial(3) = 77309411329 / 2^37 is the densest representable level;
// alpha_partial(4) exceeds any sane digit budget by design.
struct AlphaPartial {
  int K = 0;
  DyadicAngle value;
  Log2Bound tail;        // bound on alpha - alpha_K
  bool tail_known = true; // false when even the tail exponent is unrepresentable
};

AlphaPartial alpha_partial(int K);

// frac(n_k * alpha_K) = sum_{l=k+1..K} 2^{-(v_l - v_k)}, exact. The check
// against the smallness bound 2^(-k * n_k) runs purely on exponents.
// The dropped tail (from cutting alpha at K) is reported symbolically.
struct FracNAlpha {
  int k = 0;
  int K = 0;
  DyadicAngle value;
  bool bound_checkable = false;  // k * n_k fits in int64 only for k <= 3
  bool bound_holds = false;      // value < 2^(-k * n_k), exact
  std::int64_t bound_exponent = 0;  // -k * n_k when checkable
  Log2Bound cutoff_tail;         // bound on the part dropped by the cutoff
  bool cutoff_tail_known = true;
};

FracNAlpha frac_n_alpha(int k, int K);

// Orbit of a declared multiple of alpha under doubling, measured along the
// alpha-parametrized line: for y = (p/q) * 2^-N * alpha the distance from
// 2^j * y to alpha * Z is alpha * dist((p/q) * 2^(j-N), Z). The reduced
// coefficient distance is returned exactly as a rational in [0, 1/2].
// Dyadic multiples (q = 1) collapse to zero once j >= N; non-dyadic ones
// (e.g. alpha/3) stay bounded away from zero forever.
struct LemmaModRow {
  std::int64_t j = 0;
  mpq_class dist_over_alpha;  // in [0, 1/2]
  bool is_zero = false;
};

std::vector<LemmaModRow> lemma_mod_check(const mpz_class& p, const mpz_class& q,
                                         std::int64_t N, std::int64_t j_lo,
                                         std::int64_t j_hi);

}  // namespace skewlab
