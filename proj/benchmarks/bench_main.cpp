// Microbenchmarks for the exact-arithmetic kernels. Grown alongside the
// modules; run with --benchmark_filter=<regex> to pick a subset.
#include <benchmark/benchmark.h>

#include <complex>

#include "skewlab/covertower.hpp"
#include "skewlab/dyadic.hpp"
#include "skewlab/dynamics.hpp"
#include "skewlab/iter_count.hpp"
#include "skewlab/measures.hpp"
#include "skewlab/series.hpp"

namespace {

using skewlab::DyadicAngle;
using skewlab::IterCount;
using skewlab::TorusPoint;

void BM_DyadicAdd128(benchmark::State& state) {
  DyadicAngle a = DyadicAngle::from_double_exact(0.123456789).round_to(128);
  DyadicAngle b = DyadicAngle::from_double_exact(0.987654321).round_to(128);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a.add(b));
  }
}
BENCHMARK(BM_DyadicAdd128);

void BM_AlphaPartial3(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(skewlab::alpha_partial(3));
  }
}
BENCHMARK(BM_AlphaPartial3);

void BM_EvalH(benchmark::State& state) {
  const DyadicAngle theta = DyadicAngle::from_double_exact(0.1376).round_to(96);
  for (auto _ : state) {
    benchmark::DoNotOptimize(skewlab::eval_h(theta, 3));
  }
}
BENCHMARK(BM_EvalH);

void BM_Step(benchmark::State& state) {
  TorusPoint p{DyadicAngle::from_double_exact(0.1376),
               DyadicAngle::from_double_exact(0.7921)};
  for (auto _ : state) {
    p = skewlab::step(p, 3);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_Step);

// Closed-form iteration cost is flat in n; the two cases bracket a plain
// count and a tower-scale block count.
void BM_IterateClosedPlain(benchmark::State& state) {
  const TorusPoint p{DyadicAngle::from_double_exact(0.1376),
                     DyadicAngle::from_double_exact(0.7921)};
  const IterCount n(std::uint64_t{123456789});
  for (auto _ : state) {
    benchmark::DoNotOptimize(skewlab::iterate_closed(p, n, 3));
  }
}
BENCHMARK(BM_IterateClosedPlain);

void BM_IterateClosedHuge(benchmark::State& state) {
  const TorusPoint p{DyadicAngle::from_double_exact(0.1376),
                     DyadicAngle::from_double_exact(0.7921)};
  IterCount n(std::uint64_t{987654321});
  n = n.add(IterCount::huge(412316860413, 5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(skewlab::iterate_closed(p, n, 3));
  }
}
BENCHMARK(BM_IterateClosedHuge);

void BM_FTrunc(benchmark::State& state) {
  const TorusPoint p{DyadicAngle::from_double_exact(0.1376),
                     DyadicAngle::from_double_exact(0.7921)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(skewlab::f_trunc(p, 3));
  }
}
BENCHMARK(BM_FTrunc);

// The rejection sampler's cost per attempted sample; acceptance runs
// 24 million attempts through this loop.
void BM_CutMeasureSampling(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        skewlab::mu_s0_delta({1.0, 0.0}, 0.1, 3, 4096, 1));
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_CutMeasureSampling);

void BM_DensityCertificate(benchmark::State& state) {
  const TorusPoint start{DyadicAngle::from_double_exact(0.15),
                         DyadicAngle::from_double_exact(0.65)};
  const TorusPoint target{DyadicAngle::from_double_exact(0.52),
                          DyadicAngle::from_double_exact(0.31)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        skewlab::density_certificate(start, target, 0.05, 3));
  }
}
BENCHMARK(BM_DensityCertificate);

void BM_DoubleCoverAndLift(benchmark::State& state) {
  const skewlab::Presentation G = skewlab::surface_group(2);
  const skewlab::Cocycle ones(4, 1);
  const skewlab::Word w{1, 2, -1, -2};
  for (auto _ : state) {
    skewlab::CoverStep step = skewlab::double_cover(G, ones);
    benchmark::DoNotOptimize(skewlab::lift_word(step, w));
  }
}
BENCHMARK(BM_DoubleCoverAndLift);

void BM_KrylovBogolyubovSmall(benchmark::State& state) {
  skewlab::KbOptions opt;
  opt.horizon = 4096;
  opt.cloud = 4;
  opt.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(skewlab::krylov_bogolyubov(
        {skewlab::rotation_map(
            DyadicAngle::from_double_exact(0.6180339887498949))},
        opt));
  }
}
BENCHMARK(BM_KrylovBogolyubovSmall);

}  // namespace

BENCHMARK_MAIN();
