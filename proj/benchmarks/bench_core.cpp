#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "qrad/family.hpp"
#include "qrad/maximal.hpp"
#include "qrad/multiplier_norm.hpp"

using namespace qrad;

namespace {

CompatiblePair pair_of(const char* domain, const Mat2& A) {
  return check_compatibility(builtin_domain(domain), DilationGroup(A));
}

std::vector<Vec2> random_points(int n) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi), r(5.0, 20.0);
  std::vector<Vec2> p(n);
  for (Vec2& v : p) v = unit(ang(rng)) * r(rng);
  return p;
}

void BM_Rho(benchmark::State& state, const char* domain, Mat2 A) {
  const CompatiblePair pair = pair_of(domain, A);
  const auto pts = random_points(1024);
  for (auto _ : state)
    for (const Vec2& p : pts) benchmark::DoNotOptimize(pair.rho(p));
  state.SetItemsProcessed(state.iterations() * pts.size());
}
BENCHMARK_CAPTURE(BM_Rho, disk_identity, "disk", Mat2::identity());
BENCHMARK_CAPTURE(BM_Rho, disk_diag12, "disk", Mat2::diag(1.0, 2.0));
BENCHMARK_CAPTURE(BM_Rho, hexagon_identity, "hexagon", Mat2::identity());

void BM_CapDecomposition(benchmark::State& state) {
  const BoundaryArc arc = boundary_arc(builtin_domain("disk"), 0.0);
  const double delta = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(decompose(arc, delta));
}
BENCHMARK(BM_CapDecomposition)->DenseRange(4, 12, 4);

void BM_PartitionNonzero(benchmark::State& state) {
  const CompatiblePair pair = pair_of("disk", Mat2::identity());
  const Tiling T = build_tiling(pair, std::ldexp(1.0, -static_cast<int>(state.range(0))), -1, 1);
  const PartitionOfUnity P(T);
  const auto pts = random_points(256);
  std::vector<std::pair<TileIndex, double>> out;
  for (auto _ : state)
    for (const Vec2& p : pts) {
      double rho;
      Vec2 proj;
      pair.rho_and_project(p, rho, proj);
      P.nonzero(rho, proj, -1, 1, out);
      benchmark::DoNotOptimize(out.data());
    }
  state.SetItemsProcessed(state.iterations() * pts.size());
}
BENCHMARK(BM_PartitionNonzero)->Arg(4)->Arg(7);

void BM_BochnerRieszMean(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const GridSpec spec{N, N / 8.0, {}};
  const FrequencyGeometry geom = frequency_geometry(pair_of("disk", Mat2::identity()), spec, false);
  const TestFunction f = radial_bump(geom, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(bochner_riesz_mean(geom, f.f, 1.0, 0.5));
}
BENCHMARK(BM_BochnerRieszMean)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_NikodymMaximal(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  RectangleFamily fam{4.0, N, {0}, DilationGroup(Mat2::identity())};
  const GridSpec spec{256, 128.0, {}};
  const GridField f = kakeya_bush(spec, fam);
  for (auto _ : state) benchmark::DoNotOptimize(nikodym_maximal(f, fam));
}
BENCHMARK(BM_NikodymMaximal)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SobolevNorm(benchmark::State& state) {
  const auto m = [](double s) { return std::exp(-(s - 1.0) * (s - 1.0)); };
  for (auto _ : state) benchmark::DoNotOptimize(hormander_sobolev_norm(m, 0.6, {0.5, 1.0, 2.0}));
}
BENCHMARK(BM_SobolevNorm)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
