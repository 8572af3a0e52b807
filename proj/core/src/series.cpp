#include "skewlab/series.hpp"

#include <cmath>

#include "skewlab/errors.hpp"

namespace skewlab {

namespace {

// Highest usable series index: frequencies from k = 4 on live at 2^v4.
constexpr int kCeiling = 3;
constexpr std::int64_t kV4 = 412316860454;

constexpr long double kTwoPi = 6.283185307179586476925286766559L;

// v_1..v_3 as plain integers.
const std::int64_t* v_table() {
  static const std::int64_t v[4] = {0, 1, 4, 37};
  return v;
}

// Bench phases frac(n_k * alpha) at the dense level 3, cached once.
const DyadicAngle& bench_phase(int k) {
  static const DyadicAngle p[4] = {
      DyadicAngle::zero(),
      frac_n_alpha(1, 3).value,  // 1/8 + 2^-36
      frac_n_alpha(2, 3).value,  // 2^-33
      frac_n_alpha(3, 3).value,  // 0 (the 2^-v4 component is symbolic dust)
  };
  if (k < 1 || k > 3) throw domain_error("bench phase index out of range");
  return p[k];
}

std::complex<long double> unit_exp(const DyadicAngle& x) {
  const long double a = kTwoPi * static_cast<long double>(x.to_double());
  return {std::cos(a), std::sin(a)};
}

// e^{2 pi i phi} - 1 without cancellation: cos(t)-1 = -2 sin^2(t/2).
std::complex<long double> expi_minus_one(const DyadicAngle& phi) {
  const long double t = kTwoPi * static_cast<long double>(phi.to_double());
  const long double s = std::sin(t / 2.0L);
  return {-2.0L * s * s, std::sin(t)};
}

struct Ceiling {
  int effective_K;
  int dropped;
};

Ceiling apply_ceiling(int K) {
  if (K < 1) throw domain_error("series cutoff K must be >= 1");
  return {K > kCeiling ? kCeiling : K, K > kCeiling ? K - kCeiling : 0};
}

// Tail envelope for h at cutoff effK: the dropped |k| <= 3 pairs are below
// 2 * max_k (2/k) 2 pi 2^(-k n_k) <= 2^(4 - (effK+1) n_{effK+1}); the k >= 4
// pairs and the k = 3 phase dust sit below 2^(42 - v4) together.
Log2Bound h_tail(int effK) {
  Log2Bound tail = Log2Bound::pow2(42 - kV4);
  if (effK == 1) tail = tail.plus(Log2Bound::pow2(4 - 2 * 16));
  if (effK == 2) tail = tail.plus(Log2Bound::pow2(4 - 3 * (std::int64_t(1) << 37)));
  return tail;
}

std::complex<double> exp_2pii(std::complex<long double> z) {
  // e^{2 pi i (a + ib)} = e^{-2 pi b} (cos 2 pi a + i sin 2 pi a)
  const long double m = std::exp(-kTwoPi * z.imag());
  const long double a = kTwoPi * z.real();
  return {static_cast<double>(m * std::cos(a)),
          static_cast<double>(m * std::sin(a))};
}

}  // namespace

double log2_of(const DyadicAngle& x) {
  if (x.is_zero()) throw domain_error("log2 of the zero angle");
  long e = 0;
  const double d = mpz_get_d_2exp(&e, x.numerator().get_mpz_t());
  return std::log2(d) + static_cast<double>(e) -
         static_cast<double>(x.exponent());
}

TruncatedSeries build_series(SeriesKind kind, int K) {
  const Ceiling c = apply_ceiling(K);
  TruncatedSeries s;
  s.kind = kind;
  s.K = c.effective_K;
  s.formal = (kind == SeriesKind::H_FULL);
  s.tail_bound = s.formal ? Log2Bound::zero() : h_tail(c.effective_K);
  const std::int64_t* v = v_table();
  for (int k = 1; k <= c.effective_K; ++k) {
    LacunaryTerm plus{k, mpq_class(1, k), v[k], +1};
    LacunaryTerm minus{-k, mpq_class(1, k), v[k], -1};
    switch (kind) {
      case SeriesKind::HP_PLUS:
        s.terms.push_back(plus);
        break;
      case SeriesKind::HP_MINUS:
        s.terms.push_back(minus);
        break;
      default:
        s.terms.push_back(plus);
        s.terms.push_back(minus);
        break;
    }
  }
  return s;
}

SeriesEval eval_h(const DyadicAngle& theta, int K) {
  const Ceiling c = apply_ceiling(K);
  const std::int64_t* v = v_table();
  std::complex<long double> acc = 0;
  for (int k = 1; k <= c.effective_K; ++k) {
    const DyadicAngle xk = theta.mul_pow2(v[k]);
    const std::complex<long double> factor =
        expi_minus_one(bench_phase(k)) * unit_exp(xk);
    const std::complex<long double> term = factor / static_cast<long double>(k);
    // The -k term is the exact conjugate: negating both angles conjugates
    // each complex exponential with no extra rounding.
    acc += term + std::conj(term);
  }
  SeriesEval out;
  out.value = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  out.tail_log2 = h_tail(c.effective_K);
  out.tail_bound = out.tail_log2.to_double();
  out.formal = false;
  out.effective_K = c.effective_K;
  out.dropped_terms = c.dropped;
  return out;
}

SeriesEval eval_g(const DyadicAngle& theta, int K) {
  SeriesEval h = eval_h(theta, K);
  SeriesEval out = h;
  out.value = exp_2pii({h.value.real(), h.value.imag()});
  // |e^{2 pi i (h+d)} - e^{2 pi i h}| <= 2 pi |d| <= 8 |d|.
  out.tail_log2 = h.tail_log2.shifted(3);
  out.tail_bound = out.tail_log2.to_double();
  return out;
}

SeriesEval eval_H_trunc(const DyadicAngle& theta, int K) {
  const Ceiling c = apply_ceiling(K);
  const std::int64_t* v = v_table();
  std::complex<long double> acc = 0;
  for (int k = 1; k <= c.effective_K; ++k) {
    const std::complex<long double> term =
        unit_exp(theta.mul_pow2(v[k])) / static_cast<long double>(k);
    acc += term + std::conj(term);
  }
  SeriesEval out;
  out.value = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  out.tail_bound = 0.0;
  out.tail_log2 = Log2Bound::zero();
  out.formal = true;  // no uniform tail bound exists for H
  out.effective_K = c.effective_K;
  out.dropped_terms = c.dropped;
  return out;
}

SeriesEval eval_R_trunc(const DyadicAngle& theta, int K) {
  SeriesEval H = eval_H_trunc(theta, K);
  SeriesEval out = H;
  out.value = exp_2pii({H.value.real(), H.value.imag()});
  return out;
}

CocycleResidual cocycle_residual(const DyadicAngle& theta, int K,
                                 int alpha_cutoff) {
  const Ceiling c = apply_ceiling(K);
  if (alpha_cutoff < 1 || alpha_cutoff > 3)
    throw domain_error("alpha cutoff must be 1, 2 or 3");
  const std::int64_t* v = v_table();
  CocycleResidual out;
  out.K = c.effective_K;
  out.alpha_cutoff = alpha_cutoff;
  for (int k = 1; k <= c.effective_K; ++k) {
    const DyadicAngle xk = theta.mul_pow2(v[k]);
    // Phase of n_k * alpha at the requested cutoff. For k >= cutoff every
    // retained component of alpha is an integer multiple of 1/n_k.
    const DyadicAngle psi = (k <= alpha_cutoff)
                                ? frac_n_alpha(k, alpha_cutoff).value
                                : DyadicAngle::zero();
    const DyadicAngle phi = bench_phase(k);
    const auto pair_H = [&](const DyadicAngle& x) -> long double {
      return 2.0L / k * std::cos(kTwoPi * static_cast<long double>(x.to_double()));
    };
    const long double lhs = pair_H(xk.add(psi)) - pair_H(xk);
    const long double rhs = pair_H(xk.add(phi)) - pair_H(xk);
    CocycleResidualRow row;
    row.k = k;
    row.residual = static_cast<double>(std::fabs(lhs - rhs));
    // |cos A - cos B| <= |A - B|, and the phases differ by exactly the
    // dyadic gap between the two alpha cutoffs.
    const DyadicAngle gap = phi.compare(psi) >= 0 ? phi.sub(psi) : psi.sub(phi);
    row.predicted_bound =
        (2.0 / k) * 2.0 * 3.14159265358979324 * gap.to_double();
    out.max_residual = std::max(out.max_residual, row.residual);
    out.rows.push_back(row);
  }
  return out;
}

std::vector<HolomorphyGap> holomorphy_surrogate(int radius_log2) {
  if (radius_log2 < -1 || radius_log2 > 1)
    throw domain_error("surrogate radii are 2^-1, 2^0, 2^1");
  const std::int64_t* v = v_table();
  const double log2_2pi = std::log2(2.0 * 3.14159265358979324);
  std::vector<HolomorphyGap> out;
  for (int k = 1; k <= 3; ++k) {
    // True phase of n_k * alpha including the first dropped level, so the
    // k = 3 gap is the honest 2^(37-v4) one rather than the bench zero.
    const DyadicAngle phi = frac_n_alpha(k, k < 3 ? 3 : 4).value;
    double lg_amp;  // log2 |e^{2 pi i phi} - 1| = log2(2 sin(pi phi))
    if (phi.less_than_pow2(-300)) {
      lg_amp = log2_2pi + log2_of(phi);  // sin(x) = x to 600 bits here
    } else {
      lg_amp = std::log2(2.0 * std::sin(3.14159265358979324 * phi.to_double()));
    }
    const double nk = std::ldexp(1.0, static_cast<int>(v[k]));  // 2^{v_k}
    HolomorphyGap g;
    g.k = k;
    g.gap_log2 = -std::log2(static_cast<double>(k)) + lg_amp + nk * radius_log2;
    g.bound_log2 = log2_2pi + nk * (radius_log2 - k);
    g.within = g.gap_log2 <= g.bound_log2;
    out.push_back(g);
  }
  return out;
}

}  // namespace skewlab
