#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <vector>

#include "skewlab/dyadic.hpp"
#include "skewlab/log2bound.hpp"

namespace skewlab {

// The lacunary family over frequencies n_k = 2^{v_k}:
//
//   h(theta) = sum_{k != 0} (1/|k|) (e^{2 pi i n_k a} - 1) e^{2 pi i n_k theta}
//   g = e^{2 pi i h},   H(theta) = sum_{k != 0} (1/|k|) e^{2 pi i n_k theta},
//   R = e^{2 pi i H},
//
// with n_{-k} = -n_k. h converges absolutely on the unit circle (the alpha
// phases are doubly-exponentially small) and extends holomorphically off it;
// H is only square-integrable, so H and R are exposed strictly as formal
// K-truncations and flagged as such.
//
// Evaluation policy: the phase n_k theta mod 1 is computed exactly in
// DyadicAngle (a 2^37 frequency would amplify a float theta error by 10^11),
// and only the final cosine/sine is floating point. The alpha phases are the
// bench's dense realization frac_n_alpha(k, 3); the dropped 2^-v4 component
// shifts the k = 3 phase by 2^(37-v4), which is folded into every reported
// tail bound. Indices |k| >= 4 are permanently dropped: their frequency
// 2^v4 is unreachable, and the reported tail accounts for them too.
enum class SeriesKind { H_SERIES, HP_PLUS, HP_MINUS, H_FULL };

// One term of a truncated series: coeff = 1/|k| exactly, frequency
// sign * 2^{v_|k|}.
struct LacunaryTerm {
  int k = 0;
  mpq_class coeff;
  std::int64_t freq_exponent = 0;
  int sign = 0;
};

struct TruncatedSeries {
  SeriesKind kind = SeriesKind::H_SERIES;
  int K = 0;
  std::vector<LacunaryTerm> terms;
  Log2Bound tail_bound;  // rigorous for H_SERIES and its halves
  bool formal = false;   // H_FULL: no uniform tail bound exists
};

// Term list for a kind at cutoff K (K >= 1). H_SERIES and H_FULL carry
// both signs; HP_PLUS/HP_MINUS are the one-sided halves.
TruncatedSeries build_series(SeriesKind kind, int K);

// Everything an evaluation reports besides the value: the rigorous tail
// (for h and g), the desk ceiling bookkeeping, and the formal flag.
struct SeriesEval {
  std::complex<double> value;
  double tail_bound = 0.0;  // double image of tail_log2 (0.0 if underflowed)
  Log2Bound tail_log2;
  bool formal = false;
  int effective_K = 0;   // after the desk ceiling of 3
  int dropped_terms = 0; // requested |k| levels beyond the ceiling
};

// h truncated at K. Rigorous tail bound covering the dropped |k| > K terms,
// the |k| >= 4 ceiling and the 2^-v4 phase dust.
SeriesEval eval_h(const DyadicAngle& theta, int K);

// g = exp(2 pi i h_K). Unit modulus up to the imaginary leakage of the
// complex summation (~1e-16); tail bound is the h bound times 2 pi.
SeriesEval eval_g(const DyadicAngle& theta, int K);

// Formal truncation of H. Real by conjugate symmetry; no tail bound.
SeriesEval eval_H_trunc(const DyadicAngle& theta, int K);

// R = exp(2 pi i H_K), formal.
SeriesEval eval_R_trunc(const DyadicAngle& theta, int K);

// Term-wise check of the cocycle identity h(theta) = H(theta+a) - H(theta).
// The H side shifts theta by the exact partial sum alpha_partial(alpha_cutoff);
// the h side uses the bench phases (level 3). At alpha_cutoff = 3 both sides
// carry identical dyadic phases and the residual is exactly zero; at cutoff 2
// each |k| term differs by the level-3 tail of its phase, bounded by
// (2/k) * 2 pi * (frac_n_alpha(k,3) - frac_n_alpha(k,cutoff)).
struct CocycleResidualRow {
  int k = 0;
  double residual = 0.0;
  double predicted_bound = 0.0;
};

struct CocycleResidual {
  std::vector<CocycleResidualRow> rows;
  double max_residual = 0.0;
  int K = 0;
  int alpha_cutoff = 0;
};

CocycleResidual cocycle_residual(const DyadicAngle& theta, int K,
                                 int alpha_cutoff = 3);

// Holomorphy surrogate: on the circle of radius 2^radius_log2 the K-th
// partial sum of h_+ moves by at most 2 pi (r / 2^k)^{n_k} when the k-th
// term arrives. Gaps and bounds are compared in log2 space because the
// k = 3 numbers live near 2^(-10^11). radius_log2 in {-1, 0, 1}.
struct HolomorphyGap {
  int k = 0;
  double gap_log2 = 0.0;    // log2 of the worst-case k-th term magnitude
  double bound_log2 = 0.0;  // log2(2 pi (r/2^k)^{n_k})
  bool within = false;
};

std::vector<HolomorphyGap> holomorphy_surrogate(int radius_log2);

// log2 of a nonzero angle's value, exact in the exponent part (double
// rounding only in the mantissa). Handles astronomical exponents.
double log2_of(const DyadicAngle& x);

}  // namespace skewlab
