#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "skewlab/dynamics.hpp"

namespace skewlab {

// Unit-modulus observable f_K = R_K(zeta1) / zeta2. Constant exactly delta
// in the fiber direction, so its level arcs cut the torus into bands of
// prescribed Haar mass.
std::complex<double> f_trunc(const TorusPoint& p, int K);

// Fiber phase of f_K: frac(H_K(theta1) - theta2), so f_K = e^{2 pi i w}.
double f_arg(const TorusPoint& p, int K);

// Test observables for integration and invariance defects.
enum class TestFn {
  CONST_1,
  ZETA1,        // e^{2 pi i theta1}
  ZETA2,        // e^{2 pi i theta2}
  ZETA1_ZETA2,  // e^{2 pi i (theta1 + theta2)}
  ZETA1_BAR2,   // e^{2 pi i (theta1 - theta2)}
  ZETA1_SQ,     // e^{4 pi i theta1}
  ZETA2_SQ,     // e^{4 pi i theta2}
  RE_F,         // Re f_K
  F_TRUNC,      // f_K
};

std::complex<double> eval_testfn(TestFn fn, const TorusPoint& p, int K);

// The low trigonometric battery used by the invariance checks.
const std::vector<TestFn>& trig_battery();

struct WeightedSample {
  TorusPoint point;
  double weight = 1.0;
};

struct EmpiricalMeasure {
  std::vector<WeightedSample> samples;
  double total_weight() const;
};

// Weighted mean of a test function; domain_error on an empty measure.
std::complex<double> integrate(const EmpiricalMeasure& m, TestFn fn, int K);

// n independent Haar samples (theta1 at 128 bits, theta2 at 128 bits),
// reproducible from the seed alone.
EmpiricalMeasure haar_samples(std::uint64_t n, std::uint64_t seed);

// Rejection sampling of the normalized restriction of Haar to the band
// {dist(arg f_K / 2pi, arg s0 / 2pi) <= delta / 2}, which has Haar mass
// exactly delta. Requires |s0| = 1, delta in (0, 1], and an expected
// acceptance count n * delta >= 100.
struct CutMeasure {
  EmpiricalMeasure measure;
  std::complex<double> s0;
  double delta = 0.0;
  std::uint64_t attempted = 0;
  std::uint64_t accepted = 0;
  double acceptance_fraction = 0.0;
};

CutMeasure mu_s0_delta(std::complex<double> s0, double delta, int K,
                       std::uint64_t n, std::uint64_t seed);

// The graph {zeta2 = R_K(zeta1) / s0} sampled on a dyadic grid in theta1.
struct GraphMeasure {
  std::complex<double> s0;
  int K = 3;
  int grid_bits = 14;  // 2^grid_bits points, at least 2^10
};

// The i-th graph point: theta1 = i / 2^grid_bits on the level set.
TorusPoint graph_point(const GraphMeasure& gm, std::uint64_t i);

// Grid quadrature of a test function along the graph.
std::complex<double> graph_integrate(const GraphMeasure& gm, TestFn fn);

// The point above theta1 = 0 on the level set {f_K = s0}.
TorusPoint level_set_start(std::complex<double> s0, int K);

// Running Birkhoff averages of fn along the forward orbit of p, reported
// at powers of two and at the horizon.
struct BirkhoffRow {
  std::uint64_t n = 0;
  std::complex<double> average;
};

std::vector<BirkhoffRow> birkhoff(const TorusPoint& p, TestFn fn,
                                  std::uint64_t n, int K);

// Comparison dynamics for the invariance bench.
enum class FiberMapKind { ROTATION, FURSTENBERG, ATTRACTOR };

struct FiberMap {
  FiberMapKind kind = FiberMapKind::ROTATION;
  DyadicAngle angle;       // ROTATION: rigid shift of theta1
  DyadicAngle base_shift;  // FURSTENBERG: base translation
  int K = 3;               // FURSTENBERG: series truncation
  double beta = 0.0;       // ATTRACTOR: contraction strength
  std::int64_t precision_bits = kDefaultPrecisionBits;
};

FiberMap rotation_map(const DyadicAngle& angle);
// Base translation by `shift` lifted through the graph transfer
// H_K(theta1 + shift) - H_K(theta1); shift = alpha_3 reproduces the
// skew product. Any two such maps commute exactly.
FiberMap furstenberg_map(int K, const DyadicAngle& shift);
FiberMap furstenberg_map(int K);  // shift = alpha_partial(3)
// (theta1, theta2) -> (theta1 - beta sin 2 pi theta1, theta2 - beta sin
// 2 pi theta2); a diffeomorphism for beta < 1/(2 pi), contracting to the
// fixed point at the origin. Not Haar-preserving by design.
FiberMap attractor_map(double beta = 0.1);

TorusPoint apply_fiber_map(const FiberMap& map, const TorusPoint& p);

// Largest invariance defect max_fn |int fn d(F_* m) - int fn dm| over the
// given battery.
double invariance_defect(const EmpiricalMeasure& m, const FiberMap& map,
                         const std::vector<TestFn>& fns, int K);

// Krylov-Bogolyubov averaging: a cloud of starts pushed round-robin
// through the maps, Cesaro-averaging the battery along the way. Defects
// are tracked at horizon/8, /4, /2 and the horizon; the non-convergence
// flag trips when the final defect fails to drop below 0.75 of the first
// checkpoint's.
struct KbOptions {
  std::uint64_t horizon = 100000;
  std::uint64_t seed = 0;
  int cloud = 16;
  int K = 3;
  std::optional<TorusPoint> start;  // collapse the cloud to one point
};

struct KbReport {
  EmpiricalMeasure measure;  // stride-subsampled visit cloud
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> defects;  // max battery defect per checkpoint
  double final_defect = 0.0;
  bool nonconvergent = false;
  double w1_theta1 = 0.0;  // W1 of the theta1 marginal to uniform
};

KbReport krylov_bogolyubov(const std::vector<FiberMap>& maps,
                           const KbOptions& opt);

// Circle Wasserstein-1 distance from a sample set to the uniform measure
// through the quantile coupling (offsets recentred at their median).
double w1_circle_to_uniform(std::vector<double> xs);

}  // namespace skewlab
