#include "skewlab/measures.hpp"

#include <algorithm>
#include <cmath>

#include "skewlab/errors.hpp"
#include "skewlab/rng.hpp"

namespace skewlab {

namespace {

constexpr int kCeiling = 3;
constexpr long double kTwoPi = 6.283185307179586476925286766559L;

using u128 = unsigned __int128;

const std::int64_t* v_table() {
  static const std::int64_t v[4] = {0, 1, 4, 37};
  return v;
}

int effective_cutoff(int K) {
  if (K < 1) throw domain_error("truncation K must be >= 1");
  return K > kCeiling ? kCeiling : K;
}

double circle_dist(double x, double y) {
  const double d = std::fabs(x - y);
  const double f = d - std::floor(d);
  return std::min(f, 1.0 - f);
}

double frac_of(double x) { return x - std::floor(x); }

// n / 2^128 in [0, 1) at full double precision.
double frac_bits(u128 n) {
  const double hi = static_cast<double>(static_cast<std::uint64_t>(n >> 64));
  const double lo = static_cast<double>(static_cast<std::uint64_t>(n));
  return std::ldexp(hi, -64) + std::ldexp(lo, -128);
}

// frac(2^v * (n / 2^128)); the u128 shift performs the reduction mod 1.
double frac_bits_shifted(u128 n, std::int64_t v) { return frac_bits(n << v); }

double h_big_from_bits(u128 theta1, int effK) {
  double acc = 0.0;
  for (int k = 1; k <= effK; ++k)
    acc += (2.0 / k) *
           std::cos(2.0 * M_PI * frac_bits_shifted(theta1, v_table()[k]));
  return acc;
}

double h_big_at(const DyadicAngle& theta1, int effK) {
  double acc = 0.0;
  for (int k = 1; k <= effK; ++k)
    acc += (2.0 / k) *
           std::cos(2.0 * M_PI * theta1.mul_pow2(v_table()[k]).to_double());
  return acc;
}

double arg_frac(std::complex<double> s0) {
  if (std::fabs(std::abs(s0) - 1.0) > 1e-9)
    throw domain_error("level value s0 must have unit modulus");
  return frac_of(std::arg(s0) / (2.0 * M_PI));
}

DyadicAngle angle_from_words(std::uint64_t hi, std::uint64_t lo) {
  mpz_class n(static_cast<unsigned long>(hi));
  n <<= 64;
  n += mpz_class(static_cast<unsigned long>(lo));
  return DyadicAngle(n, 128);
}

std::complex<double> unit(double turns) {
  const double a = 2.0 * M_PI * turns;
  return {std::cos(a), std::sin(a)};
}

// Per-point observables shared by every test function.
struct Obs {
  std::complex<double> z1;
  std::complex<double> z2;
  std::complex<double> f;
};

Obs observe(const TorusPoint& p, int K, bool need_f) {
  Obs o;
  o.z1 = unit(p.theta1.to_double());
  o.z2 = unit(p.theta2.to_double());
  if (need_f) o.f = unit(f_arg(p, K));
  return o;
}

bool needs_f(TestFn fn) { return fn == TestFn::RE_F || fn == TestFn::F_TRUNC; }

bool battery_needs_f(const std::vector<TestFn>& fns) {
  return std::any_of(fns.begin(), fns.end(), needs_f);
}

std::complex<double> from_obs(TestFn fn, const Obs& o) {
  switch (fn) {
    case TestFn::CONST_1: return {1.0, 0.0};
    case TestFn::ZETA1: return o.z1;
    case TestFn::ZETA2: return o.z2;
    case TestFn::ZETA1_ZETA2: return o.z1 * o.z2;
    case TestFn::ZETA1_BAR2: return o.z1 * std::conj(o.z2);
    case TestFn::ZETA1_SQ: return o.z1 * o.z1;
    case TestFn::ZETA2_SQ: return o.z2 * o.z2;
    case TestFn::RE_F: return {o.f.real(), 0.0};
    case TestFn::F_TRUNC: return o.f;
  }
  throw domain_error("unknown test function");
}

// Adds a real increment to an angle and re-rounds to the working grid.
DyadicAngle add_real_rounded(const DyadicAngle& base, double d,
                             std::int64_t precision_bits) {
  const double wrapped = frac_of(d);
  const DyadicAngle inc =
      DyadicAngle::from_double_exact(wrapped < 1.0 ? wrapped : 0.0);
  return base.add(inc).round_to(precision_bits);
}

}  // namespace

double f_arg(const TorusPoint& p, int K) {
  const int effK = effective_cutoff(K);
  return frac_of(h_big_at(p.theta1, effK) - p.theta2.to_double());
}

std::complex<double> f_trunc(const TorusPoint& p, int K) {
  return unit(f_arg(p, K));
}

std::complex<double> eval_testfn(TestFn fn, const TorusPoint& p, int K) {
  return from_obs(fn, observe(p, K, needs_f(fn)));
}

const std::vector<TestFn>& trig_battery() {
  static const std::vector<TestFn> fns = {
      TestFn::ZETA1,    TestFn::ZETA2,    TestFn::ZETA1_ZETA2,
      TestFn::ZETA1_BAR2, TestFn::ZETA1_SQ, TestFn::ZETA2_SQ,
  };
  return fns;
}

double EmpiricalMeasure::total_weight() const {
  double acc = 0.0;
  for (const WeightedSample& s : samples) acc += s.weight;
  return acc;
}

std::complex<double> integrate(const EmpiricalMeasure& m, TestFn fn, int K) {
  if (m.samples.empty()) throw domain_error("integrating an empty measure");
  std::complex<double> acc = 0.0;
  double w = 0.0;
  for (const WeightedSample& s : m.samples) {
    acc += s.weight * eval_testfn(fn, s.point, K);
    w += s.weight;
  }
  if (w <= 0.0) throw domain_error("measure has no mass");
  return acc / w;
}

EmpiricalMeasure haar_samples(std::uint64_t n, std::uint64_t seed) {
  EmpiricalMeasure m;
  m.samples.reserve(n);
  CounterRng rng(seed, 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    TorusPoint p;
    p.theta1 = angle_from_words(rng.next(), rng.next());
    p.theta2 = angle_from_words(rng.next(), rng.next());
    m.samples.push_back({p, 1.0});
  }
  return m;
}

CutMeasure mu_s0_delta(std::complex<double> s0, double delta, int K,
                       std::uint64_t n, std::uint64_t seed) {
  const int effK = effective_cutoff(K);
  const double w0 = arg_frac(s0);
  if (!(delta > 0.0) || delta > 1.0)
    throw domain_error("band mass delta must lie in (0, 1]");
  if (static_cast<double>(n) * delta < 100.0)
    throw domain_error(
        "expected acceptance count n * delta below 100; raise n");

  CutMeasure out;
  out.s0 = s0;
  out.delta = delta;
  out.attempted = n;
  out.measure.samples.reserve(static_cast<std::size_t>(1.1 * delta * n) + 16);

  CounterRng rng(seed, 0);
  const double half = delta / 2.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t a = rng.next(), b = rng.next();
    const std::uint64_t c = rng.next(), d = rng.next();
    const u128 t1 = (static_cast<u128>(a) << 64) | b;
    const u128 t2 = (static_cast<u128>(c) << 64) | d;
    const double w = frac_of(h_big_from_bits(t1, effK) - frac_bits(t2));
    if (circle_dist(w, w0) > half) continue;
    TorusPoint p;
    p.theta1 = angle_from_words(a, b);
    p.theta2 = angle_from_words(c, d);
    out.measure.samples.push_back({p, 1.0});
  }
  out.accepted = out.measure.samples.size();
  out.acceptance_fraction =
      static_cast<double>(out.accepted) / static_cast<double>(n);
  return out;
}

TorusPoint graph_point(const GraphMeasure& gm, std::uint64_t i) {
  if (gm.grid_bits < 10)
    throw domain_error("graph grid must have at least 2^10 points");
  const int effK = effective_cutoff(gm.K);
  const double w0 = arg_frac(gm.s0);
  TorusPoint p;
  p.theta1 = DyadicAngle(mpz_class(static_cast<unsigned long>(i)), gm.grid_bits);
  p.theta2 =
      DyadicAngle::from_double_exact(frac_of(h_big_at(p.theta1, effK) - w0));
  return p;
}

std::complex<double> graph_integrate(const GraphMeasure& gm, TestFn fn) {
  if (gm.grid_bits < 10)
    throw domain_error("graph grid must have at least 2^10 points");
  if (gm.grid_bits > 26) throw resource_error("graph grid too large");
  const std::uint64_t n = std::uint64_t(1) << gm.grid_bits;
  std::complex<double> acc = 0.0;
  for (std::uint64_t i = 0; i < n; ++i)
    acc += eval_testfn(fn, graph_point(gm, i), gm.K);
  return acc / static_cast<double>(n);
}

TorusPoint level_set_start(std::complex<double> s0, int K) {
  const int effK = effective_cutoff(K);
  const double w0 = arg_frac(s0);
  TorusPoint p;
  p.theta2 =
      DyadicAngle::from_double_exact(frac_of(h_big_at(p.theta1, effK) - w0));
  return p;
}

std::vector<BirkhoffRow> birkhoff(const TorusPoint& p, TestFn fn,
                                  std::uint64_t n, int K) {
  if (n < 1) throw domain_error("birkhoff horizon must be >= 1");
  if (n > (std::uint64_t(1) << 26))
    throw resource_error("birkhoff horizon beyond the stepwise budget");
  std::vector<BirkhoffRow> rows;
  std::complex<double> acc = 0.0;
  TorusPoint q = p;
  std::uint64_t next_power = 1;
  for (std::uint64_t i = 1; i <= n; ++i) {
    acc += eval_testfn(fn, q, K);
    if (i == next_power || i == n) {
      rows.push_back({i, acc / static_cast<double>(i)});
      if (i == next_power) next_power <<= 1;
    }
    if (i < n) q = step(q, K);
  }
  return rows;
}

FiberMap rotation_map(const DyadicAngle& angle) {
  FiberMap m;
  m.kind = FiberMapKind::ROTATION;
  m.angle = angle;
  return m;
}

FiberMap furstenberg_map(int K, const DyadicAngle& shift) {
  FiberMap m;
  m.kind = FiberMapKind::FURSTENBERG;
  m.K = effective_cutoff(K);
  m.base_shift = shift;
  return m;
}

FiberMap furstenberg_map(int K) {
  return furstenberg_map(K, alpha_partial(3).value);
}

FiberMap attractor_map(double beta) {
  if (!(beta > 0.0) || beta >= 1.0 / (2.0 * M_PI))
    throw domain_error(
        "attractor strength must lie in (0, 1/(2 pi)) to stay invertible");
  FiberMap m;
  m.kind = FiberMapKind::ATTRACTOR;
  m.beta = beta;
  return m;
}

TorusPoint apply_fiber_map(const FiberMap& map, const TorusPoint& p) {
  switch (map.kind) {
    case FiberMapKind::ROTATION: {
      TorusPoint q = p;
      q.theta1 = p.theta1.add(map.angle);
      return q;
    }
    case FiberMapKind::FURSTENBERG: {
      TorusPoint q;
      q.theta1 = p.theta1.add(map.base_shift);
      const double dh =
          h_big_at(q.theta1, map.K) - h_big_at(p.theta1, map.K);
      q.theta2 = add_real_rounded(p.theta2, dh, map.precision_bits);
      return q;
    }
    case FiberMapKind::ATTRACTOR: {
      const double t1 = p.theta1.to_double();
      const double t2 = p.theta2.to_double();
      TorusPoint q;
      q.theta1 = DyadicAngle::from_double_exact(
          frac_of(t1 - map.beta * std::sin(2.0 * M_PI * t1)));
      q.theta2 = DyadicAngle::from_double_exact(
          frac_of(t2 - map.beta * std::sin(2.0 * M_PI * t2)));
      return q;
    }
  }
  throw domain_error("unknown fiber map kind");
}

double invariance_defect(const EmpiricalMeasure& m, const FiberMap& map,
                         const std::vector<TestFn>& fns, int K) {
  if (m.samples.empty()) throw domain_error("integrating an empty measure");
  if (fns.empty()) throw domain_error("empty test battery");
  const bool want_f = battery_needs_f(fns);
  std::vector<std::complex<double>> before(fns.size()), after(fns.size());
  double w = 0.0;
  for (const WeightedSample& s : m.samples) {
    const Obs ox = observe(s.point, K, want_f);
    const Obs oy = observe(apply_fiber_map(map, s.point), K, want_f);
    for (std::size_t i = 0; i < fns.size(); ++i) {
      before[i] += s.weight * from_obs(fns[i], ox);
      after[i] += s.weight * from_obs(fns[i], oy);
    }
    w += s.weight;
  }
  if (w <= 0.0) throw domain_error("measure has no mass");
  double defect = 0.0;
  for (std::size_t i = 0; i < fns.size(); ++i)
    defect = std::max(defect, std::abs(after[i] - before[i]) / w);
  return defect;
}

KbReport krylov_bogolyubov(const std::vector<FiberMap>& maps,
                           const KbOptions& opt) {
  if (maps.empty()) throw domain_error("need at least one map to average");
  if (opt.horizon < 8) throw domain_error("horizon must be >= 8");
  if (opt.cloud < 1) throw domain_error("cloud must hold at least one point");

  std::vector<TorusPoint> cloud;
  if (opt.start) {
    cloud.push_back(*opt.start);
  } else {
    CounterRng rng(opt.seed, 0);
    for (int i = 0; i < opt.cloud; ++i) {
      TorusPoint p;
      p.theta1 = angle_from_words(rng.next(), rng.next());
      p.theta2 = angle_from_words(rng.next(), rng.next());
      cloud.push_back(p);
    }
  }

  const std::vector<TestFn>& fns = trig_battery();
  std::vector<std::complex<double>> base(fns.size());
  std::vector<std::vector<std::complex<double>>> pushed(
      maps.size(), std::vector<std::complex<double>>(fns.size()));
  std::uint64_t visits = 0;

  KbReport rep;
  rep.checkpoints = {opt.horizon / 8, opt.horizon / 4, opt.horizon / 2,
                     opt.horizon};

  const std::uint64_t total_visits = opt.horizon * cloud.size();
  const std::uint64_t stride =
      std::max<std::uint64_t>(1, total_visits >> 17);

  std::size_t next_checkpoint = 0;
  for (std::uint64_t t = 0; t < opt.horizon; ++t) {
    const std::size_t turn = static_cast<std::size_t>(t % maps.size());
    for (TorusPoint& x : cloud) {
      const Obs ox = observe(x, opt.K, false);
      for (std::size_t i = 0; i < fns.size(); ++i)
        base[i] += from_obs(fns[i], ox);
      TorusPoint advanced = x;
      for (std::size_t g = 0; g < maps.size(); ++g) {
        const TorusPoint y = apply_fiber_map(maps[g], x);
        const Obs oy = observe(y, opt.K, false);
        for (std::size_t i = 0; i < fns.size(); ++i)
          pushed[g][i] += from_obs(fns[i], oy);
        if (g == turn) advanced = y;
      }
      if (visits % stride == 0) rep.measure.samples.push_back({x, 1.0});
      ++visits;
      x = advanced;
    }
    while (next_checkpoint < rep.checkpoints.size() &&
           t + 1 == rep.checkpoints[next_checkpoint]) {
      double defect = 0.0;
      for (std::size_t g = 0; g < maps.size(); ++g)
        for (std::size_t i = 0; i < fns.size(); ++i)
          defect = std::max(defect, std::abs(pushed[g][i] - base[i]) /
                                        static_cast<double>(visits));
      rep.defects.push_back(defect);
      ++next_checkpoint;
    }
  }

  rep.final_defect = rep.defects.back();
  rep.nonconvergent = rep.final_defect > 1e-9 &&
                      rep.final_defect > 0.75 * rep.defects.front();

  std::vector<double> xs;
  xs.reserve(rep.measure.samples.size());
  for (const WeightedSample& s : rep.measure.samples)
    xs.push_back(s.point.theta1.to_double());
  rep.w1_theta1 = w1_circle_to_uniform(std::move(xs));
  return rep;
}

double w1_circle_to_uniform(std::vector<double> xs) {
  if (xs.empty()) throw domain_error("W1 of an empty sample set");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    double off = xs[i] - (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    off -= std::floor(off);
    if (off > 0.5) off -= 1.0;  // recentre to (-1/2, 1/2]
    d[i] = off;
  }
  std::vector<double> med = d;
  std::nth_element(med.begin(), med.begin() + n / 2, med.end());
  const double c = med[n / 2];
  double acc = 0.0;
  for (double off : d) acc += circle_dist(off, c);
  return acc / static_cast<double>(n);
}

}  // namespace skewlab
