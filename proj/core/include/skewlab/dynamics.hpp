#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "skewlab/dyadic.hpp"
#include "skewlab/iter_count.hpp"
#include "skewlab/log2bound.hpp"

namespace skewlab {

// A point on the two-torus. theta1 is kept exact through every operation;
// theta2 absorbs transcendental increments and is re-rounded to a fixed
// number of fractional bits after each update.
struct TorusPoint {
  DyadicAngle theta1;
  DyadicAngle theta2;
};

// Default fractional precision for theta2 updates.
inline constexpr std::int64_t kDefaultPrecisionBits = 128;

// Distance on the torus through the standard embedding into C^2: the
// hypot of the per-coordinate chord lengths 2*|sin(pi*d)|.
double torus_distance(const TorusPoint& a, const TorusPoint& b);

// frac(n * alpha) split into the exactly representable part and a bound on
// the dropped remainder. The dense component of alpha and every huge-term
// contribution that lands on a representable scale go into `angle`; the
// dust collects the plain-count tail contribution and everything beyond
// the fourth scale.
struct Rotation {
  DyadicAngle angle;
  Log2Bound dust;
};

Rotation rotation_of(const IterCount& n);

// frac(n_k * n * alpha), same split. Requires 1 <= k <= 3.
Rotation phase_of(const IterCount& n, int k);

// Result of a closed-form iteration. `u` is the fiber increment
// sum_{k<=K_eff} (2/k) [cos(2pi(x_k + psi_k)) - cos(2pi x_k)] evaluated
// with exact phases psi_k; its imaginary part is a numerical residue of
// the conjugate-pair evaluation and stays at rounding level.
struct IterateResult {
  TorusPoint point;
  std::complex<double> u;
  Log2Bound theta1_dust;   // dropped part of the base rotation
  Log2Bound phase_dust;    // largest dropped part across the fiber phases
  int effective_K = 0;
  std::int64_t dropped_terms = 0;
};

// One step of the skew product: theta1 += alpha, theta2 += h_K(theta1).
// theta2 is rounded to precision_bits fractional bits.
TorusPoint step(const TorusPoint& p, int K,
                std::int64_t precision_bits = kDefaultPrecisionBits);

// n-fold iterate in closed form. theta1 moves by the exact part of
// rotation_of(n); theta2 moves by the telescoped fiber sum with phases
// phase_of(n, k). Handles symbolic huge counts.
IterateResult iterate_closed(const TorusPoint& p, const IterCount& n, int K,
                             std::int64_t precision_bits = kDefaultPrecisionBits);

// One steering block T^{m_s} with m_s = 2^{v_{s+1} - v_s - 4}.
struct SteerResult {
  TorusPoint point;
  std::complex<double> u;  // realized fiber increment of the block
  IterCount block_length;  // m_s
  DyadicAngle theta1_drift;
  Log2Bound drift_dust;
  bool bound_applicable = false;  // dist(n_s * theta1, Z) < 1/64
  bool bound_holds = false;       // Re(u) within [-b/s, -a/s]
  double window_lo = 0.0;         // -b/s
  double window_hi = 0.0;         // -a/s
};

// Requires s >= 2 and s <= K (the block phases need the scale s+1).
SteerResult steer_block(const TorusPoint& p, int s, int K,
                        std::int64_t precision_bits = kDefaultPrecisionBits);

// Return-phase recursion across scales. Starting from angle r/n_s at scale
// s, after the canonical blocks the scale-(s+j) return phase is
// r * n_{s+j} / n_s + nu_j with an explicit dyadic defect nu_j.
struct RReport {
  double r_out;            // r * n_{s+j} / n_s + nu_j, reduced mod 1
  DyadicAngle nu;          // exact part of the defect
  Log2Bound nu_dust;       // dropped scales beyond the fourth
  double bound;            // j * 2^{-j} * 2^{-s}
  bool bound_holds;
};

// Requires s >= 2, j >= 0, s + j <= K.
RReport r_recursion(double r, int s, int j, int K);

// Constructive density witness: a finite word in plain rotations and
// steering blocks taking base_point into the eps-ball around target.
struct DensityCertificate {
  TorusPoint base_point;
  TorusPoint target;
  double epsilon = 0.0;
  IterCount rotation_steps;     // plain iterate count j
  std::vector<int> block_list;  // scale indices of the steering blocks
  IterCount total_steps;        // j + sum of block lengths
  double achieved_distance = 0.0;
  std::string method;           // search regime that produced the witness
};

// Searches for a certificate. Throws domain_error for eps <= 0 and
// resource_error when the search budget is exhausted (the message reports
// the best distance reached).
DensityCertificate density_certificate(const TorusPoint& p,
                                       const TorusPoint& target, double eps,
                                       int K);

struct VerifyReport {
  bool ok = false;
  double achieved_distance = 0.0;
  bool totals_consistent = false;  // total_steps == rotation_steps + blocks
};

// Independent re-execution of a certificate through the closed-form
// iterate; checks the step bookkeeping and the achieved distance.
VerifyReport verify_certificate(const DensityCertificate& cert, int K);

}  // namespace skewlab
