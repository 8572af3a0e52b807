#include "skewlab/iter_count.hpp"

#include <algorithm>

namespace skewlab {

namespace {

std::int64_t bit_length(const mpz_class& z) {
  if (z == 0) return 0;
  return static_cast<std::int64_t>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

}  // namespace

IterCount::IterCount(mpz_class plain) : plain_(std::move(plain)) {
  if (plain_ < 0) throw domain_error("iterate count must be nonnegative");
}

IterCount IterCount::huge(std::int64_t pow2, mpz_class coeff) {
  if (pow2 < 0) throw domain_error("huge scale must be nonnegative");
  if (coeff < 0) throw domain_error("huge coefficient must be nonnegative");
  IterCount out;
  if (coeff == 0) return out;
  HugeTerm t;
  t.pow2 = pow2;
  t.coeff = std::move(coeff);
  out.terms_.push_back(std::move(t));
  out.normalize();
  return out;
}

void IterCount::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const HugeTerm& a, const HugeTerm& b) { return a.pow2 < b.pow2; });
  std::vector<HugeTerm> merged;
  for (auto& t : terms_) {
    if (t.coeff == 0) continue;
    if (t.pow2 < 64) {
      // Small scales are ordinary integers; fold them into the plain part.
      mpz_class add = t.coeff;
      mpz_mul_2exp(add.get_mpz_t(), add.get_mpz_t(),
                   static_cast<mp_bitcnt_t>(t.pow2));
      plain_ += add;
      continue;
    }
    if (!merged.empty() && merged.back().pow2 == t.pow2)
      merged.back().coeff += t.coeff;
    else
      merged.push_back(std::move(t));
  }
  terms_ = std::move(merged);
}

IterCount IterCount::add(const IterCount& other) const {
  IterCount out;
  out.plain_ = plain_ + other.plain_;
  out.terms_ = terms_;
  out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
  out.normalize();
  return out;
}

IterCount IterCount::add_plain(const mpz_class& count) const {
  if (count < 0) throw domain_error("iterate count must be nonnegative");
  IterCount out = *this;
  out.plain_ += count;
  return out;
}

IterCount IterCount::shifted(std::int64_t s) const {
  if (s < 0) throw domain_error("shift must be nonnegative");
  IterCount out;
  out.plain_ = plain_;
  if (s > 0 && plain_ != 0)
    mpz_mul_2exp(out.plain_.get_mpz_t(), out.plain_.get_mpz_t(),
                 static_cast<mp_bitcnt_t>(s));
  out.terms_ = terms_;
  for (auto& t : out.terms_) t.pow2 += s;
  out.normalize();
  return out;
}

mpz_class IterCount::mod_pow2(std::int64_t b) const {
  if (b <= 0) return mpz_class(0);
  mpz_class r = plain_;
  for (const auto& t : terms_) {
    if (t.pow2 >= b) continue;
    mpz_class add = t.coeff;
    mpz_mul_2exp(add.get_mpz_t(), add.get_mpz_t(),
                 static_cast<mp_bitcnt_t>(t.pow2));
    r += add;
  }
  mpz_fdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(b));
  return r;
}

Log2Bound IterCount::magnitude_bound() const {
  Log2Bound b = plain_ == 0 ? Log2Bound::zero()
                            : Log2Bound::pow2(bit_length(plain_));
  for (const auto& t : terms_)
    b = b.plus(Log2Bound::pow2(t.pow2 + bit_length(t.coeff)));
  return b;
}

std::string IterCount::to_decimal() const {
  if (!terms_.empty())
    throw domain_error(
        "count has components at scale 2^" + std::to_string(terms_.back().pow2) +
        "; its decimal form is astronomically long, use describe()");
  return plain_.get_str();
}

std::string IterCount::describe() const {
  if (is_zero()) return "0";
  std::string out;
  if (plain_ != 0 || terms_.empty()) out = plain_.get_str();
  for (const auto& t : terms_) {
    if (!out.empty()) out += " + ";
    if (t.coeff != 1) out += t.coeff.get_str() + "*";
    out += "2^" + std::to_string(t.pow2);
  }
  return out;
}

}  // namespace skewlab
