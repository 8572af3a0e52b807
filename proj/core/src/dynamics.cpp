#include "skewlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "skewlab/errors.hpp"

namespace skewlab {

namespace {

constexpr int kCeiling = 3;
constexpr std::int64_t kV4 = 412316860454;

constexpr long double kTwoPi = 6.283185307179586476925286766559L;

// Numerator of the dense alpha level: alpha_3 = kAlphaNum / 2^37.
constexpr std::uint64_t kAlphaNum = (std::uint64_t(1) << 36) + (std::uint64_t(1) << 33) + 1;
// kAlphaNum^-1 mod 2^37; odd residues are units mod a power of two.
constexpr std::uint64_t kAlphaNumInv = 60129542145;
constexpr std::uint64_t kM37 = std::uint64_t(1) << 37;

// Scale of one s = 3 steering block: m_3 = 2^(v4 - 41).
constexpr std::int64_t kE3 = kV4 - 41;

// v_1..v_3; the fourth height only ever appears as kV4.
const std::int64_t* v_table() {
  static const std::int64_t v[4] = {0, 1, 4, 37};
  return v;
}

int effective_cutoff(int K) {
  if (K < 1) throw domain_error("truncation K must be >= 1");
  return K > kCeiling ? kCeiling : K;
}

// A huge-term contribution to frac(n * alpha) merges into the exact angle
// when its scale 2^(pow2 - v4) is coarse enough to coexist with the dense
// part inside the digit budget. Everything in play sits within 2^-64 of
// the unit scale; the guard only blocks pathological hand-built counts.
constexpr std::int64_t kMergeCeiling = 4096;

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

// Adds a real increment (any sign, |d| < 2^63) to an angle and re-rounds.
DyadicAngle add_real_rounded(const DyadicAngle& base, long double d,
                             std::int64_t precision_bits) {
  const double wrapped = static_cast<double>(d - std::floor(d));
  const DyadicAngle inc = DyadicAngle::from_double_exact(
      wrapped < 1.0 ? wrapped : 0.0);
  return base.add(inc).round_to(precision_bits);
}

IterCount block_length_of(int s) {
  if (s < 2) throw domain_error("steering starts at scale s = 2");
  if (s == 2) return IterCount(std::uint64_t(1) << 29);
  if (s == 3) return IterCount::huge(kE3, 1);
  throw resource_error("steering block length at scale >= 4 needs v5");
}

double chord(double d) { return 2.0 * std::sin(M_PI * d); }

}  // namespace

double torus_distance(const TorusPoint& a, const TorusPoint& b) {
  const double d1 = a.theta1.sub(b.theta1).dist_to_zero().to_double();
  const double d2 = a.theta2.sub(b.theta2).dist_to_zero().to_double();
  return std::hypot(chord(d1), chord(d2));
}

Rotation rotation_of(const IterCount& n) {
  Rotation rot;
  if (n.is_zero()) return rot;

  // Dense component: frac(n * alpha_3) = (n mod 2^37) * kAlphaNum / 2^37.
  // Huge terms sit at scales >= 2^64 and contribute an integer here.
  mpz_class dense;
  mpz_fdiv_r_2exp(dense.get_mpz_t(), n.plain().get_mpz_t(), 37);
  dense *= mpz_class(static_cast<unsigned long>(kAlphaNum));
  rot.angle = DyadicAngle(dense, 37);

  // 2^-v4 component. The plain part lands at scale 2^(bits - v4), far too
  // fine to merge with the dense numerator; it is tracked as dust. Huge
  // terms at scales below v4 land on coarse grids and merge exactly.
  Log2Bound dust = Log2Bound::zero();
  if (n.plain() != 0) {
    const std::int64_t bits =
        static_cast<std::int64_t>(mpz_sizeinbase(n.plain().get_mpz_t(), 2));
    dust = dust.plus(Log2Bound::pow2(bits - kV4));
  }
  for (const HugeTerm& t : n.terms()) {
    if (t.pow2 >= kV4) continue;  // integer multiple of the circle
    const std::int64_t scale = kV4 - t.pow2;
    if (scale <= kMergeCeiling) {
      rot.angle = rot.angle.add(DyadicAngle(t.coeff, scale));
    } else {
      const std::int64_t bits =
          static_cast<std::int64_t>(mpz_sizeinbase(t.coeff.get_mpz_t(), 2));
      dust = dust.plus(Log2Bound::pow2(bits + t.pow2 - kV4));
    }
  }

  // Frequencies from the fifth height on: n < 2^(2^63) while
  // 2^-v5 < 2^(-4 * 2^v4), so the whole family is far below 2^-v4.
  dust = dust.plus(Log2Bound::pow2(-kV4));
  rot.dust = dust;
  return rot;
}

Rotation phase_of(const IterCount& n, int k) {
  if (k < 1 || k > kCeiling) throw domain_error("phase index k must be 1..3");
  return rotation_of(n.shifted(v_table()[k]));
}

IterateResult iterate_closed(const TorusPoint& p, const IterCount& n, int K,
                             std::int64_t precision_bits) {
  const int effK = effective_cutoff(K);
  IterateResult res;
  res.effective_K = effK;
  res.dropped_terms = K - effK;
  if (n.is_zero()) {
    res.point = p;
    return res;
  }

  const Rotation rot = rotation_of(n);
  res.theta1_dust = rot.dust;
  res.point.theta1 = p.theta1.add(rot.angle);

  const std::int64_t* v = v_table();
  std::complex<long double> acc = 0;
  for (int k = 1; k <= effK; ++k) {
    const Rotation ph = phase_of(n, k);
    res.phase_dust = res.phase_dust.max_with(ph.dust);
    const DyadicAngle xk = p.theta1.mul_pow2(v[k]);
    const std::complex<long double> term =
        expi_minus_one(ph.angle) * unit_exp(xk) / static_cast<long double>(k);
    acc += term + std::conj(term);
  }
  res.u = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  res.point.theta2 = add_real_rounded(p.theta2, acc.real(), precision_bits);
  return res;
}

TorusPoint step(const TorusPoint& p, int K, std::int64_t precision_bits) {
  return iterate_closed(p, IterCount(1), K, precision_bits).point;
}

SteerResult steer_block(const TorusPoint& p, int s, int K,
                        std::int64_t precision_bits) {
  const int effK = effective_cutoff(K);
  if (s < 2) throw domain_error("steering starts at scale s = 2");
  if (s > effK)
    throw domain_error("steering at scale s needs phases at scale s + 1");

  SteerResult out;
  out.block_length = block_length_of(s);

  const Rotation drift = rotation_of(out.block_length);
  out.theta1_drift = drift.angle;
  out.drift_dust = drift.dust;

  const IterateResult it = iterate_closed(p, out.block_length, K, precision_bits);
  out.point = it.point;
  out.u = it.u;

  // The decrement window applies on the major arc dist(n_s theta1, Z) < 1/64.
  const DyadicAngle xs = p.theta1.mul_pow2(v_table()[s]);
  out.bound_applicable = xs.dist_to_zero().less_than_pow2(-6);

  const double unit = 1.0 - std::cos(M_PI / 8.0);
  out.window_lo = -3.1 * unit / s;
  out.window_hi = -0.9 * unit / s;
  out.bound_holds = out.bound_applicable && out.u.real() >= out.window_lo &&
                    out.u.real() <= out.window_hi;
  return out;
}

RReport r_recursion(double r, int s, int j, int K) {
  const int effK = effective_cutoff(K);
  if (s < 2) throw domain_error("return phases start at scale s = 2");
  if (j < 0) throw domain_error("recursion depth j must be >= 0");
  if (s + j > effK)
    throw domain_error("scale s + j exceeds the truncation");

  RReport rep;
  rep.nu = DyadicAngle::zero();
  rep.nu_dust = Log2Bound::zero();

  // v_1..v_4 with the fourth height explicit.
  const std::int64_t v[5] = {0, 1, 4, 37, kV4};

  // nu_j = sum_{l=1..j} m_{s+l-1} * sum_{t >= s+l} n_{s+j} / n_t mod Z with
  // m_i = n_{i+1} / (2^4 n_i). Terms with t <= 4 are exact powers of two;
  // the rest sit below 2^-v4 and are folded into the dust.
  for (int l = 1; l <= j; ++l) {
    for (int t = s + l; t <= 4; ++t) {
      const std::int64_t e = v[s + l] - v[s + l - 1] - 4 + v[s + j] - v[t];
      if (e < 0) rep.nu = rep.nu.add(DyadicAngle::inv_pow2(-e));
    }
    rep.nu_dust = rep.nu_dust.plus(Log2Bound::pow2(-kV4));
  }

  const double lifted = std::ldexp(r, static_cast<int>(v[s + j] - v[s]));
  const double shifted = lifted + rep.nu.to_double();
  rep.r_out = shifted - std::floor(shifted);

  rep.bound = static_cast<double>(j) * std::ldexp(1.0, -j - s);
  if (j == 0) {
    rep.bound_holds = rep.nu.is_zero();
  } else {
    const std::int64_t cap = static_cast<std::int64_t>(
        std::floor(std::log2(static_cast<double>(j)))) - j - s;
    rep.bound_holds =
        rep.nu.less_than_pow2(cap) && rep.nu_dust.leq_pow2(cap - 8);
  }
  return rep;
}

namespace {

// One verified landing candidate of the density search.
struct Candidate {
  std::uint64_t j = 0;
  std::uint64_t k2 = 0;
  int t = 0;
  double distance = 0.0;
};

IterCount candidate_count(const Candidate& c) {
  IterCount n(c.j + (c.k2 << 29));
  if (c.t > 0) n = n.add(IterCount::huge(kE3, c.t));
  return n;
}

double circle_dist(double x, double y) {
  const double d = std::fabs(x - y);
  const double f = d - std::floor(d);
  return std::min(f, 1.0 - f);
}

}  // namespace

DensityCertificate density_certificate(const TorusPoint& p,
                                       const TorusPoint& target, double eps,
                                       int K) {
  if (!(eps > 0.0)) throw domain_error("density radius eps must be positive");
  if (!(eps < 0.5))
    throw domain_error("density radius eps must be below one half");
  const int effK = effective_cutoff(K);
  if (effK < 3)
    throw domain_error("density certificates need all three scales (K >= 3)");

  DensityCertificate cert;
  cert.base_point = p;
  cert.target = target;
  cert.epsilon = eps;

  const double d0 = torus_distance(p, target);
  if (d0 <= 0.999 * eps) {
    cert.achieved_distance = d0;
    cert.method = "already-within";
    return cert;
  }

  // Reachable first coordinates: theta1 + m * 2^-37 + t * 2^-41 with the
  // steering count t in 0..15. Scanning theta2 along the invariant graph
  // theta2 = C + H_3(theta1) locates the landing window; the plain count
  // recovering a given m is m * kAlphaNumInv mod 2^37, split as
  // j + k2 * 2^29 so the k2 part is realized by s = 2 blocks.
  const double th1_0 = p.theta1.to_double();
  const double th2_0 = p.theta2.to_double();
  const double x1_0 = p.theta1.mul_pow2(1).to_double();
  const double x2_0 = p.theta1.mul_pow2(4).to_double();
  const double x3_0 = p.theta1.mul_pow2(37).to_double();
  const double tgt1 = target.theta1.to_double();
  const double tgt2 = target.theta2.to_double();

  const double offset =
      th2_0 - (2.0 * std::cos(2.0 * M_PI * x1_0) + std::cos(2.0 * M_PI * x2_0) +
               (2.0 / 3.0) * std::cos(2.0 * M_PI * x3_0));

  const double margin = 0.995 * eps;
  const double cap = std::min(1.9, margin);
  const double window = std::min(0.25, std::asin(cap / 2.0) / M_PI);
  const int nx = 16384;

  bool have_best = false;
  Candidate best;
  double best_predicted = std::numeric_limits<double>::infinity();
  int verified = 0;
  const int verify_budget = 4096;

  for (int t = 0; t < 16 && verified < verify_budget; ++t) {
    const double x3t = x3_0 + static_cast<double>(t) / 16.0;
    const double third = (2.0 / 3.0) * std::cos(2.0 * M_PI * x3t);
    for (int i = 0; i < nx && verified < verify_budget; ++i) {
      const double x = tgt1 - window + (2.0 * window) * (i + 0.5) / nx;
      const double curve = offset + 2.0 * std::cos(4.0 * M_PI * x) +
                           std::cos(32.0 * M_PI * x) + third;
      const double predicted =
          std::hypot(chord(circle_dist(x, tgt1)), chord(circle_dist(curve, tgt2)));
      best_predicted = std::min(best_predicted, predicted);
      if (predicted > margin) continue;

      // Snap to the nearest reachable grid point and recover the count.
      double delta = x - th1_0 - std::ldexp(static_cast<double>(t), -41);
      delta -= std::floor(delta);
      const std::uint64_t m =
          static_cast<std::uint64_t>(std::llround(delta * static_cast<double>(kM37))) &
          (kM37 - 1);
      const std::uint64_t n0 =
          static_cast<std::uint64_t>((static_cast<unsigned __int128>(m) * kAlphaNumInv) &
                                     (kM37 - 1));
      Candidate cand;
      cand.j = n0 & ((std::uint64_t(1) << 29) - 1);
      cand.k2 = n0 >> 29;
      cand.t = t;

      ++verified;
      const IterateResult res = iterate_closed(p, candidate_count(cand), 3);
      cand.distance = torus_distance(res.point, target);
      if (cand.distance > eps) continue;
      if (!have_best || cand.distance < best.distance) {
        have_best = true;
        best = cand;
      }
      if (best.distance <= 0.6 * eps) break;
    }
    if (have_best && best.distance <= 0.6 * eps) break;
  }

  if (!have_best) {
    throw resource_error(
        "density search budget exhausted; best predicted distance " +
        std::to_string(best_predicted) + " vs eps " + std::to_string(eps));
  }

  cert.rotation_steps = IterCount(best.j);
  cert.block_list.assign(best.k2, 2);
  cert.block_list.insert(cert.block_list.end(), best.t, 3);
  cert.total_steps = candidate_count(best);
  cert.achieved_distance = best.distance;
  cert.method = (best.k2 == 0 && best.t == 0 && best.j <= 10000000)
                    ? "exhaustive-range"
                    : "steered-lattice";
  return cert;
}

VerifyReport verify_certificate(const DensityCertificate& cert, int K) {
  VerifyReport rep;

  IterCount expected = cert.rotation_steps;
  bool blocks_ok = true;
  for (int s : cert.block_list) {
    if (s < 2 || s > 3) {
      blocks_ok = false;
      break;
    }
    expected = expected.add(block_length_of(s));
  }
  rep.totals_consistent = blocks_ok && expected == cert.total_steps;

  const IterateResult res =
      iterate_closed(cert.base_point, cert.total_steps, K);
  rep.achieved_distance = torus_distance(res.point, cert.target);
  rep.ok = rep.totals_consistent && rep.achieved_distance <= cert.epsilon;
  return rep;
}

}  // namespace skewlab
