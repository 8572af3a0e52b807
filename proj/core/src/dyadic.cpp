#include "skewlab/dyadic.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <utility>

namespace skewlab {

namespace {

std::int64_t g_digit_budget = std::int64_t(1) << 20;

std::int64_t bit_length(const mpz_class& z) {
  if (z == 0) return 0;
  return static_cast<std::int64_t>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

[[noreturn]] void budget_error(const std::string& what, std::int64_t needed) {
  throw resource_error(what + " needs about " + std::to_string(needed) +
                       " numerator bits, digit budget is " +
                       std::to_string(g_digit_budget));
}

}  // namespace

std::int64_t DyadicAngle::digit_budget() { return g_digit_budget; }

void DyadicAngle::set_digit_budget(std::int64_t bits) {
  if (bits < 64) throw domain_error("digit budget must be at least 64 bits");
  g_digit_budget = bits;
}

DyadicAngle::DyadicAngle(mpz_class num, std::int64_t exp)
    : num_(std::move(num)), exp_(exp) {
  if (exp_ <= 0) {
    // num * 2^-exp is an integer, which is zero on the circle.
    num_ = 0;
    exp_ = 0;
    return;
  }
  // Reduce mod 1 by keeping the low exp bits. Floor semantics wrap
  // negative numerators onto [0, 2^exp). Masking never allocates beyond
  // the numerator already present.
  mpz_fdiv_r_2exp(num_.get_mpz_t(), num_.get_mpz_t(),
                  static_cast<mp_bitcnt_t>(exp_));
  canonicalize();
}

void DyadicAngle::canonicalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  const mp_bitcnt_t t = mpz_scan1(num_.get_mpz_t(), 0);
  if (t > 0) {
    mpz_fdiv_q_2exp(num_.get_mpz_t(), num_.get_mpz_t(), t);
    exp_ -= static_cast<std::int64_t>(t);
  }
  const std::int64_t bits = bit_length(num_);
  if (bits > g_digit_budget) budget_error("canonical numerator", bits);
}

std::int64_t DyadicAngle::numerator_bits() const { return bit_length(num_); }

DyadicAngle DyadicAngle::from_double_exact(double x) {
  if (!(x >= 0.0) || x >= 1.0)
    throw domain_error("angle must lie in [0,1), got " + std::to_string(x));
  if (x == 0.0) return zero();
  int e = 0;
  const double f = std::frexp(x, &e);  // x = f * 2^e with f in [0.5, 1)
  // f * 2^53 is an exact 53-bit integer for any double, subnormals included.
  const auto m = static_cast<long>(std::ldexp(f, 53));
  return DyadicAngle(mpz_class(m), 53 - static_cast<std::int64_t>(e));
}

DyadicAngle DyadicAngle::add(const DyadicAngle& other) const {
  if (is_zero()) return other;
  if (other.is_zero()) return *this;
  const std::int64_t e = std::max(exp_, other.exp_);
  // Width the aligned sum needs: top bit position relative to the common
  // exponent, plus one carry bit. Checked before any shift is materialized,
  // so mixing a dense angle with one at an astronomical exponent fails
  // cleanly instead of allocating terabytes.
  const std::int64_t needed =
      std::max(bit_length(num_) + (e - exp_),
               bit_length(other.num_) + (e - other.exp_)) + 1;
  if (needed > g_digit_budget) budget_error("sum", needed);
  mpz_class na = num_, nb = other.num_;
  if (e > exp_)
    mpz_mul_2exp(na.get_mpz_t(), na.get_mpz_t(),
                 static_cast<mp_bitcnt_t>(e - exp_));
  if (e > other.exp_)
    mpz_mul_2exp(nb.get_mpz_t(), nb.get_mpz_t(),
                 static_cast<mp_bitcnt_t>(e - other.exp_));
  return DyadicAngle(na + nb, e);
}

DyadicAngle DyadicAngle::negate() const {
  if (is_zero()) return *this;
  // 1 - num/2^exp = (2^exp - num)/2^exp. The complement numerator is as
  // wide as the exponent, so sparse angles at huge exponents are refused.
  if (exp_ > g_digit_budget) budget_error("complement", exp_);
  mpz_class c(0);
  mpz_setbit(c.get_mpz_t(), static_cast<mp_bitcnt_t>(exp_));
  c -= num_;
  return DyadicAngle(c, exp_);
}

DyadicAngle DyadicAngle::mul_pow2(std::int64_t j) const {
  if (j < 0) throw domain_error("mul_pow2 needs j >= 0");
  if (is_zero() || j >= exp_) return zero();
  return DyadicAngle(num_, exp_ - j);
}

DyadicAngle DyadicAngle::round_to(std::int64_t frac_bits) const {
  if (frac_bits < 1) throw domain_error("round_to needs frac_bits >= 1");
  if (exp_ <= frac_bits) return *this;
  const std::int64_t shift = exp_ - frac_bits;
  // Below half a grid cell the result is zero. Checking by bit length
  // avoids materializing 2^(shift-1) when the exponent is astronomical.
  if (bit_length(num_) <= shift - 1) return zero();
  mpz_class r = num_;
  mpz_class half(0);
  mpz_setbit(half.get_mpz_t(), static_cast<mp_bitcnt_t>(shift - 1));
  r += half;
  mpz_fdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(),
                  static_cast<mp_bitcnt_t>(shift));
  return DyadicAngle(r, frac_bits);
}

DyadicAngle DyadicAngle::dist_to_zero() const {
  if (less_than_pow2(-1)) return *this;          // x < 1/2
  if (num_ == 1 && exp_ == 1) return *this;      // exactly 1/2
  return negate();                               // x > 1/2, distance 1 - x
}

bool DyadicAngle::less_than_pow2(std::int64_t e) const {
  if (is_zero()) return true;
  // x sits in [2^(bits-1-exp), 2^(bits-exp)), so x < 2^e exactly when the
  // open upper end is at most 2^e.
  return bit_length(num_) - exp_ <= e;
}

int DyadicAngle::compare(const DyadicAngle& other) const {
  if (is_zero()) return other.is_zero() ? 0 : -1;
  if (other.is_zero()) return 1;
  const std::int64_t ba = bit_length(num_), bb = bit_length(other.num_);
  const std::int64_t ua = ba - exp_;              // x < 2^ua, x >= 2^(ua-1)
  const std::int64_t ub = bb - other.exp_;
  if (ua <= ub - 1) return -1;
  if (ub <= ua - 1) return 1;
  // The log ranges overlap, which forces the exponent gap to be at most
  // the numerator-width gap plus one; aligning is cheap.
  const std::int64_t e = std::max(exp_, other.exp_);
  mpz_class na = num_, nb = other.num_;
  if (e > exp_)
    mpz_mul_2exp(na.get_mpz_t(), na.get_mpz_t(),
                 static_cast<mp_bitcnt_t>(e - exp_));
  if (e > other.exp_)
    mpz_mul_2exp(nb.get_mpz_t(), nb.get_mpz_t(),
                 static_cast<mp_bitcnt_t>(e - other.exp_));
  const int c = cmp(na, nb);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

double DyadicAngle::to_double() const {
  if (is_zero()) return 0.0;
  const std::int64_t bits = bit_length(num_);
  if (bits - exp_ < -1074) return 0.0;  // below the subnormal range
  const std::int64_t k = bits > 64 ? bits - 64 : 0;
  mpz_class top = num_;
  if (k > 0)
    mpz_fdiv_q_2exp(top.get_mpz_t(), top.get_mpz_t(),
                    static_cast<mp_bitcnt_t>(k));
  return std::ldexp(top.get_d(), static_cast<int>(k - exp_));
}

std::string DyadicAngle::to_hex() const {
  if (is_zero()) return "0x0p+0";
  const std::int64_t bits = bit_length(num_);
  const std::int64_t E = bits - 1 - exp_;  // x = 1.frac * 2^E with E <= -1
  mpz_class frac = num_;
  mpz_clrbit(frac.get_mpz_t(), static_cast<mp_bitcnt_t>(bits - 1));
  const std::int64_t fbits = bits - 1;
  const std::int64_t pad = (4 - (fbits % 4)) % 4;
  if (pad > 0)
    mpz_mul_2exp(frac.get_mpz_t(), frac.get_mpz_t(),
                 static_cast<mp_bitcnt_t>(pad));
  const std::size_t digits = static_cast<std::size_t>((fbits + pad) / 4);
  std::string out = "0x1";
  if (frac != 0) {
    std::string h = frac.get_str(16);
    if (h.size() < digits) h.insert(0, digits - h.size(), '0');
    while (!h.empty() && h.back() == '0') h.pop_back();
    if (!h.empty()) out += "." + h;
  }
  out += "p" + std::to_string(E);
  return out;
}

DyadicAngle DyadicAngle::parse_hex(const std::string& text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  const std::string s = text.substr(b, e - b);
  if (s == "0" || s == "0.0" || s == "0.") return zero();
  std::size_t i = 0;
  if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) i = 2;
  std::string mant;
  std::int64_t frac_digits = 0;
  bool seen_dot = false, seen_p = false, any = false;
  for (; i < s.size(); ++i) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
    if (c == '.') {
      if (seen_dot) throw domain_error("bad angle literal: " + text);
      seen_dot = true;
    } else if (std::isxdigit(static_cast<unsigned char>(c))) {
      mant += c;
      if (seen_dot) ++frac_digits;
      any = true;
    } else if (c == 'p') {
      seen_p = true;
      ++i;
      break;
    } else {
      throw domain_error("bad angle literal: " + text);
    }
  }
  if (!any) throw domain_error("bad angle literal: " + text);
  std::int64_t E = 0;
  if (seen_p) {
    if (i >= s.size()) throw domain_error("bad angle literal: " + text);
    try {
      std::size_t used = 0;
      E = std::stoll(s.substr(i), &used);
      if (used != s.size() - i) throw domain_error("bad angle literal: " + text);
    } catch (const std::logic_error&) {
      throw domain_error("bad angle literal: " + text);
    }
  }
  const mpz_class m(mant, 16);
  // value = mant * 16^-frac_digits * 2^E = mant / 2^(4*frac_digits - E)
  return DyadicAngle(m, 4 * frac_digits - E);
}

std::int64_t VSeq::v_int(int k) const {
  if (k < 1 || k > K()) throw domain_error("v index out of range");
  const mpz_class& v = values[static_cast<std::size_t>(k)];
  if (!v.fits_slong_p())
    throw resource_error("v_" + std::to_string(k) + " exceeds int64");
  return static_cast<std::int64_t>(v.get_si());
}

VSeq v_seq(int K) {
  if (K < 1) throw domain_error("v_seq needs K >= 1");
  VSeq out;
  out.values.resize(static_cast<std::size_t>(K) + 1);
  out.values[1] = 1;
  for (int k = 1; k < K; ++k) {
    const mpz_class& vk = out.values[static_cast<std::size_t>(k)];
    // v_{k+1} = k * 2^{v_k} + v_k + 1 occupies about v_k bits. v_4 takes
    // 38 bits; v_5 would take ~4*10^11, so it is refused, not attempted.
    if (!vk.fits_slong_p() || vk.get_si() + 3 > DyadicAngle::digit_budget()) {
      throw resource_error("v_" + std::to_string(k + 1) + " needs about " +
                           vk.get_str() + " bits, digit budget is " +
                           std::to_string(DyadicAngle::digit_budget()));
    }
    mpz_class p(0);
    mpz_setbit(p.get_mpz_t(), static_cast<mp_bitcnt_t>(vk.get_si()));
    out.values[static_cast<std::size_t>(k) + 1] = k * p + vk + 1;
  }
  return out;
}

AlphaPartial alpha_partial(int K) {
  AlphaPartial out;
  out.K = K;
  const VSeq v = v_seq(K);
  DyadicAngle acc;
  for (int k = 1; k <= K; ++k) acc = acc.add(DyadicAngle::inv_pow2(v.v_int(k)));
  out.value = acc;
  // Dropped tail: sum_{k>K} 2^{-v_k} < 2^(1 - v_{K+1}). Past K = 3 even
  // the tail exponent leaves int64 range; the flag records that.
  try {
    const VSeq w = v_seq(K + 1);
    out.tail = Log2Bound::pow2(1 - w.v_int(K + 1));
    out.tail_known = true;
  } catch (const resource_error&) {
    out.tail = Log2Bound::zero();
    out.tail_known = false;
  }
  return out;
}

FracNAlpha frac_n_alpha(int k, int K) {
  if (k < 1 || K < k) throw domain_error("frac_n_alpha needs 1 <= k <= K");
  FracNAlpha out;
  out.k = k;
  out.K = K;
  const VSeq v = v_seq(K);
  const std::int64_t vk = v.v_int(k);
  // n_k * alpha_K mod 1: terms with l <= k are integers and vanish, the
  // rest survive as 2^-(v_l - v_k).
  DyadicAngle acc;
  for (int l = k + 1; l <= K; ++l)
    acc = acc.add(DyadicAngle::inv_pow2(v.v_int(l) - vk));
  out.value = acc;
  // Smallness target 2^(-k * n_k), n_k = 2^{v_k}. The exponent fits int64
  // through k = 3 (3 * 2^37); beyond that the check is not expressible.
  if (vk <= 60) {
    const std::int64_t nk = std::int64_t(1) << vk;
    if (nk <= std::numeric_limits<std::int64_t>::max() / (k > 0 ? k : 1)) {
      out.bound_checkable = true;
      out.bound_exponent = -static_cast<std::int64_t>(k) * nk;
      out.bound_holds = acc.less_than_pow2(out.bound_exponent);
    }
  }
  // Cutoff tail: sum_{l>K} 2^(v_k - v_l) < 2^(v_k + 1 - v_{K+1}).
  try {
    const VSeq w = v_seq(K + 1);
    out.cutoff_tail = Log2Bound::pow2(vk + 1 - w.v_int(K + 1));
    out.cutoff_tail_known = true;
  } catch (const resource_error&) {
    out.cutoff_tail = Log2Bound::zero();
    out.cutoff_tail_known = false;
  }
  return out;
}

std::vector<LemmaModRow> lemma_mod_check(const mpz_class& p, const mpz_class& q,
                                         std::int64_t N, std::int64_t j_lo,
                                         std::int64_t j_hi) {
  if (q <= 0) throw domain_error("lemma_mod_check needs q >= 1");
  if (N < 0) throw domain_error("lemma_mod_check needs N >= 0");
  if (j_lo > j_hi || j_lo < 0)
    throw domain_error("lemma_mod_check needs 0 <= j_lo <= j_hi");
  if (j_hi - N > DyadicAngle::digit_budget())
    throw resource_error("lemma_mod_check shift exceeds the digit budget");
  std::vector<LemmaModRow> rows;
  rows.reserve(static_cast<std::size_t>(j_hi - j_lo + 1));
  const mpq_class half(1, 2);
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    // Coefficient of alpha after j doublings: c_j = (p/q) * 2^(j-N).
    mpq_class c(p, q);
    c.canonicalize();
    const std::int64_t sh = j - N;
    if (sh >= 0)
      mpq_mul_2exp(c.get_mpq_t(), c.get_mpq_t(), static_cast<mp_bitcnt_t>(sh));
    else
      mpq_div_2exp(c.get_mpq_t(), c.get_mpq_t(), static_cast<mp_bitcnt_t>(-sh));
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), mpq_numref(c.get_mpq_t()),
               mpq_denref(c.get_mpq_t()));
    mpq_class f = c - mpq_class(fl);
    LemmaModRow row;
    row.j = j;
    row.dist_over_alpha = (cmp(f, half) > 0) ? mpq_class(1 - f) : f;
    row.is_zero = (row.dist_over_alpha == 0);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace skewlab
