// Acceptance gate: twelve criteria, one line each on stdout in the form
// "criterion NN PASS" or "criterion NN FAIL", exit 0 only if all pass
// (2 otherwise). Tolerances and runtime caps are pinned here on purpose;
// loosening them is a deliberate act, not a test-suite drift.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <vector>

#include "skewlab/covertower.hpp"
#include "skewlab/dyadic.hpp"
#include "skewlab/dynamics.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/iter_count.hpp"
#include "skewlab/measures.hpp"
#include "skewlab/rng.hpp"
#include "skewlab/series.hpp"

namespace {

using skewlab::CounterRng;
using skewlab::DyadicAngle;
using skewlab::IterCount;
using skewlab::TorusPoint;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

TorusPoint random_point(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t index) {
  return TorusPoint{
      DyadicAngle(CounterRng::value_at(seed, stream, 2 * index), 64),
      DyadicAngle(CounterRng::value_at(seed, stream, 2 * index + 1), 64)};
}

double circle_dist(double x, double y) {
  const double d = std::fabs(x - y - std::floor(x - y));
  return std::min(d, 1.0 - d);
}

// 1. Tower heights, the dense alpha realization, and the paper's
// frac(n_k alpha) bound checked by exact dyadic comparison. < 1 s.
bool criterion_01() {
  const auto t0 = Clock::now();
  skewlab::VSeq v = skewlab::v_seq(4);
  bool ok = v.values[1] == 1 && v.values[2] == 4 && v.values[3] == 37 &&
            v.values[4] == mpz_class("412316860454");
  skewlab::AlphaPartial alpha = skewlab::alpha_partial(3);
  ok = ok && alpha.value == DyadicAngle(mpz_class("77309411329"), 37);
  for (int k = 1; k <= 3; ++k) {
    skewlab::FracNAlpha fr = skewlab::frac_n_alpha(k, 3);
    ok = ok && fr.bound_checkable && fr.bound_holds;
  }
  return ok && seconds_since(t0) < 1.0;
}

// 2. Closed-form iteration agrees with step composition to 1e-10 over
// n <= 1e4 from 100 seeded dyadic starts. < 30 s.
bool criterion_02() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const TorusPoint start = random_point(2025, 2, static_cast<std::uint64_t>(trial));
    TorusPoint composed = start;
    for (std::uint64_t n = 1; n <= 10000; ++n) {
      composed = skewlab::step(composed, 3);
      const TorusPoint closed =
          skewlab::iterate_closed(start, IterCount(n), 3).point;
      worst = std::max(worst, skewlab::torus_distance(composed, closed));
      if (worst >= 1e-10) {
        return false;
      }
    }
  }
  return worst < 1e-10 && seconds_since(t0) < 30.0;
}

// 3. The s = 2 steering block from theta1 = 0: u lands on the
// dominant-term value and inside [-b/2, -a/2], drift below 2^-6, and the
// 2^29-step block runs through the closed form in under a millisecond.
bool criterion_03() {
  skewlab::steer_block(TorusPoint{}, 2, 3);  // warm caches before timing
  const auto t0 = Clock::now();
  skewlab::SteerResult r = skewlab::steer_block(TorusPoint{}, 2, 3);
  const double elapsed = seconds_since(t0);

  const double unit = 1.0 - std::cos(M_PI / 8.0);
  const double lo = -3.1 * unit / 2.0;
  const double hi = -0.9 * unit / 2.0;
  bool ok = std::fabs(r.u.real() - (-0.0785296)) <= 1e-5;
  ok = ok && r.u.real() >= lo && r.u.real() <= hi;
  ok = ok && r.bound_applicable && r.bound_holds;
  ok = ok && r.theta1_drift.dist_to_zero().less_than_pow2(-6);
  ok = ok && r.block_length == IterCount(std::uint64_t{1} << 29);
  return ok && elapsed < 1e-3;
}

// 4. Twenty seeded random (start, target) pairs at eps = 0.05: every
// certificate re-verifies, with exact totals and no stepwise replay. < 60 s.
bool criterion_04() {
  const auto t0 = Clock::now();
  for (int trial = 0; trial < 20; ++trial) {
    const TorusPoint start =
        random_point(2025, 4, static_cast<std::uint64_t>(2 * trial));
    const TorusPoint target =
        random_point(2025, 4, static_cast<std::uint64_t>(2 * trial + 1));
    skewlab::DensityCertificate cert =
        skewlab::density_certificate(start, target, 0.05, 3);
    skewlab::VerifyReport vr = skewlab::verify_certificate(cert, 3);
    if (!vr.ok || !vr.totals_consistent || cert.achieved_distance > 0.05) {
      return false;
    }
  }
  return seconds_since(t0) < 60.0;
}

// 5. The truncated invariant function moves by less than 1e-8 per step
// along 1e5-step orbits from 10 seeded starts at K = 1.
bool criterion_05() {
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    TorusPoint p = random_point(2025, 5, static_cast<std::uint64_t>(trial));
    std::complex<double> before = skewlab::f_trunc(p, 1);
    for (int n = 0; n < 100000; ++n) {
      p = skewlab::step(p, 1);
      const std::complex<double> after = skewlab::f_trunc(p, 1);
      worst = std::max(worst, std::abs(after - before));
      if (worst >= 1e-8) {
        return false;
      }
      before = after;
    }
  }
  return worst < 1e-8;
}

// 6. The cut-measure family: acceptance fraction equals delta within
// 3 sigma for delta in {0.05, 0.1, 0.25} across the 8th roots of unity,
// N = 1e6 each, and the s0 = 1 / s0 = -1 bands at delta = 0.05 have
// disjoint f-ranges. < 2 min.
bool criterion_06() {
  const auto t0 = Clock::now();
  const std::uint64_t n = 1000000;
  skewlab::CutMeasure band_plus, band_minus;
  for (const double delta : {0.05, 0.1, 0.25}) {
    for (int m = 0; m < 8; ++m) {
      const std::complex<double> s0 = std::polar(1.0, 2.0 * M_PI * m / 8.0);
      skewlab::CutMeasure cut = skewlab::mu_s0_delta(
          s0, delta, 3, n, 600 + static_cast<std::uint64_t>(m));
      const double sigma =
          std::sqrt(delta * (1.0 - delta) / static_cast<double>(n));
      if (std::fabs(cut.acceptance_fraction - delta) > 3.0 * sigma) {
        return false;
      }
      if (delta == 0.05 && m == 0) {
        band_plus = std::move(cut);
      }
      if (delta == 0.05 && m == 4) {
        band_minus = std::move(cut);
      }
    }
  }

  // Disjoint supports: every sample sits in its own band (half-width
  // 0.025 around w0) and at least 0.45 away from the other band's center.
  for (const auto& [measure, own, other] :
       {std::make_tuple(&band_plus, 0.0, 0.5),
        std::make_tuple(&band_minus, 0.5, 0.0)}) {
    for (const skewlab::WeightedSample& s : measure->measure.samples) {
      const double w = skewlab::f_arg(s.point, 3);
      if (circle_dist(w, own) > 0.025 + 1e-12) {
        return false;
      }
      if (circle_dist(w, other) < 0.45) {
        return false;
      }
    }
  }
  return seconds_since(t0) < 120.0;
}

// 7. Extremal-measure scaling: s0 * integral of zeta2 over the graph
// measure is the same complex number for all 8th roots of unity, 1e-10,
// quadrature at 2^14 points.
bool criterion_07() {
  std::complex<double> reference;
  for (int m = 0; m < 8; ++m) {
    skewlab::GraphMeasure gm;
    gm.s0 = std::polar(1.0, 2.0 * M_PI * m / 8.0);
    gm.K = 3;
    gm.grid_bits = 14;
    const std::complex<double> scaled =
        gm.s0 * skewlab::graph_integrate(gm, skewlab::TestFn::ZETA2);
    if (m == 0) {
      reference = scaled;
    } else if (std::abs(scaled - reference) >= 1e-10) {
      return false;
    }
  }
  return true;
}

// 8. Non-unique ergodicity witness: Birkhoff averages of f from level-set
// starts s0 = 1 and s0 = i stay separated by at least 0.9 |1 - i| for
// every n <= 1e5.
bool criterion_08() {
  const double separation =
      0.9 * std::abs(std::complex<double>(1.0, 0.0) -
                     std::complex<double>(0.0, 1.0));
  TorusPoint pa = skewlab::level_set_start({1.0, 0.0}, 3);
  TorusPoint pb = skewlab::level_set_start({0.0, 1.0}, 3);
  std::complex<double> sum_a = 0.0, sum_b = 0.0;
  for (int n = 1; n <= 100000; ++n) {
    sum_a += skewlab::f_trunc(pa, 3);
    sum_b += skewlab::f_trunc(pb, 3);
    if (std::abs(sum_a - sum_b) / n < separation) {
      return false;
    }
    pa = skewlab::step(pa, 3);
    pb = skewlab::step(pb, 3);
  }
  return true;
}

// 9. Krylov-Bogolyubov: the golden rotation converges to uniform (defect
// and Wasserstein-1 below 1e-2 at N = 1e5); the Furstenberg/attractor
// pair flags non-convergence, and the rotation-invariant candidate from
// the Furstenberg map alone has attractor defect above 0.05.
bool criterion_09() {
  skewlab::KbOptions opt;
  opt.horizon = 100000;
  opt.seed = 9;
  opt.cloud = 16;
  opt.K = 3;

  skewlab::KbReport golden = skewlab::krylov_bogolyubov(
      {skewlab::rotation_map(
          DyadicAngle::from_double_exact(0.6180339887498949))},
      opt);
  bool ok = golden.final_defect < 1e-2 && !golden.nonconvergent &&
            golden.w1_theta1 < 1e-2;

  skewlab::KbReport pair = skewlab::krylov_bogolyubov(
      {skewlab::furstenberg_map(3), skewlab::attractor_map(0.1)}, opt);
  ok = ok && pair.nonconvergent;

  skewlab::KbReport invariant =
      skewlab::krylov_bogolyubov({skewlab::furstenberg_map(3)}, opt);
  const double attractor_defect = skewlab::invariance_defect(
      invariant.measure, skewlab::attractor_map(0.1), skewlab::trig_battery(),
      3);
  return ok && attractor_defect > 0.05;
}

// 10. Cover tower: the full genus-2 universe of nontrivial reduced words
// of length <= 4 opens by depth 3, the independent walk confirms every
// claim, and the genus ladder reads 2, 3, 5, 9. < 2 min.
bool criterion_10() {
  const auto t0 = Clock::now();
  skewlab::Presentation G = skewlab::surface_group(2);

  std::vector<skewlab::Word> words;
  {
    std::vector<int> letters;
    for (int i = 1; i <= 4; ++i) {
      letters.push_back(i);
      letters.push_back(-i);
    }
    std::vector<skewlab::Word> frontier{skewlab::Word{}};
    for (int len = 1; len <= 4; ++len) {
      std::vector<skewlab::Word> next;
      for (const skewlab::Word& w : frontier) {
        for (int c : letters) {
          if (!w.empty() && w.back() == -c) {
            continue;
          }
          skewlab::Word grown = w;
          grown.push_back(c);
          if (!skewlab::reduce(G, grown).trivial) {
            words.push_back(grown);
          }
          next.push_back(std::move(grown));
        }
      }
      frontier = std::move(next);
    }
  }

  skewlab::CoverTower tower = skewlab::open_all(G, words, 3);
  for (const skewlab::WordTowerEntry& e : tower.entries) {
    if (!e.open || e.open_level > 3) {
      return false;
    }
  }
  if (!skewlab::verify_tower(tower).all_ok) {
    return false;
  }

  // Ladder bookkeeping, both inside the tower's cache and along an
  // explicit chain of covers.
  for (const skewlab::CoverStep& step : tower.steps) {
    if (step.total.genus() != 2 * step.base.genus() - 1) {
      return false;
    }
  }
  skewlab::Presentation cur = G;
  for (const int want : {3, 5, 9}) {
    skewlab::Cocycle ones(static_cast<std::size_t>(cur.n_generators), 1);
    cur = skewlab::double_cover(cur, ones).total;
    if (cur.genus() != want) {
      return false;
    }
  }
  return seconds_since(t0) < 120.0;
}

// 11. Per-term cocycle identity: residual below 1e-9 for every term at
// K = 2 with the alpha cutoff at 3, on a 2^10-point grid.
bool criterion_11() {
  for (std::uint64_t i = 0; i < 1024; ++i) {
    skewlab::CocycleResidual r =
        skewlab::cocycle_residual(DyadicAngle(i, 10), 2, 3);
    if (r.max_residual >= 1e-9) {
      return false;
    }
  }
  return true;
}

// 12. The doubling orbit along alpha: a dyadic multiple collapses to an
// exact zero distance once j >= N, while alpha/3 stays at least alpha/4
// away from alpha Z for all j <= 40.
bool criterion_12() {
  const std::vector<skewlab::LemmaModRow> dyadic =
      skewlab::lemma_mod_check(5, 1, 6, 0, 40);
  for (const skewlab::LemmaModRow& row : dyadic) {
    if (row.j >= 6 && !(row.is_zero && row.dist_over_alpha == 0)) {
      return false;
    }
    if (row.j < 6 && row.is_zero) {
      return false;
    }
  }

  const std::vector<skewlab::LemmaModRow> third =
      skewlab::lemma_mod_check(1, 3, 0, 0, 40);
  const mpq_class quarter(1, 4);
  for (const skewlab::LemmaModRow& row : third) {
    if (row.is_zero || row.dist_over_alpha < quarter) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  bool (*criteria[])() = {
      criterion_01, criterion_02, criterion_03, criterion_04,
      criterion_05, criterion_06, criterion_07, criterion_08,
      criterion_09, criterion_10, criterion_11, criterion_12,
  };

  bool all_pass = true;
  for (int i = 0; i < 12; ++i) {
    bool pass = false;
    try {
      pass = criteria[i]();
    } catch (const std::exception& ex) {
      std::fprintf(stderr, "criterion %02d raised: %s\n", i + 1, ex.what());
      pass = false;
    }
    std::printf("criterion %02d %s\n", i + 1, pass ? "PASS" : "FAIL");
    std::fflush(stdout);
    all_pass = all_pass && pass;
  }
  return all_pass ? 0 : 2;
}
