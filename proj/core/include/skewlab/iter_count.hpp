#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "skewlab/errors.hpp"
#include "skewlab/log2bound.hpp"

namespace skewlab {

// One giant-scale component of an iterate count: coeff * 2^pow2 with
// pow2 >= 64 and coeff >= 1. Steering schedules and density certificates
// count blocks of T^(2^(v4-41)); those counts have ~10^11 decimal digits,
// so they are carried symbolically instead of as integers.
struct HugeTerm {
  std::int64_t pow2 = 0;
  mpz_class coeff;

  bool operator==(const HugeTerm& o) const {
    return pow2 == o.pow2 && coeff == o.coeff;
  }
};

// A nonnegative iterate count n = plain + sum_i coeff_i * 2^{pow2_i}.
// The plain part is exact and unbounded in the ordinary bignum sense
// (certificate rotation counts pass 10^9); huge terms track multiples of
// scales too large to materialize. Terms are kept sorted by scale with
// scales below 64 bits folded into the plain part.
class IterCount {
public:
  IterCount() = default;
  explicit IterCount(std::uint64_t plain)
      : plain_(static_cast<unsigned long>(plain)) {}
  explicit IterCount(mpz_class plain);

  // coeff * 2^pow2 as a count (pow2 >= 0; small scales fold into plain).
  static IterCount huge(std::int64_t pow2, mpz_class coeff);

  const mpz_class& plain() const { return plain_; }
  const std::vector<HugeTerm>& terms() const { return terms_; }
  bool is_plain() const { return terms_.empty(); }
  bool is_zero() const { return terms_.empty() && plain_ == 0; }

  IterCount add(const IterCount& other) const;
  IterCount add_plain(const mpz_class& count) const;

  // n * 2^s for s >= 0.
  IterCount shifted(std::int64_t s) const;

  // n mod 2^b, exact across both parts. Huge terms at scales >= b vanish.
  mpz_class mod_pow2(std::int64_t b) const;

  // Upper bound 2^e with n < 2^e (used for dust estimates of the
  // unrealized 2^-v4 frequency component: frac contribution < n * 2^-v4).
  Log2Bound magnitude_bound() const;

  // Decimal string of a plain count. Counts with huge terms have no
  // writable decimal form and throw domain_error; use describe().
  std::string to_decimal() const;

  // Compact exact display: "123", "2^70", "123 + 5*2^412316860413".
  std::string describe() const;

  bool operator==(const IterCount& o) const {
    return plain_ == o.plain_ && terms_ == o.terms_;
  }

private:
  void normalize();

  mpz_class plain_;
  std::vector<HugeTerm> terms_;
};

}  // namespace skewlab
