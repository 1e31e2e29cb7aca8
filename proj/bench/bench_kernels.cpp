// OpenMP kernels against their serial references.
#include <random>

#include <benchmark/benchmark.h>

#include "ftl/dissipation.hpp"
#include "ftl/distance.hpp"
#include "ftl/harness.hpp"

using namespace ftl;

namespace {

std::pair<Profile, Profile> profile_pair(int jumps) {
  const Model iso;
  std::mt19937_64 rng(11);
  Profile u = random_profile(iso, rng, jumps, 0.05), v = random_profile(iso, rng, jumps, 0.05);
  // same far fields, so the distance is finite
  v.u.front() = u.u.front();
  v.u.back() = u.u.back();
  return {u, v};
}

template <auto Fn>
void BM_dnu(benchmark::State &st) {
  const auto [u, v] = profile_pair(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(Fn(Model{}, 1e-3, u, v, Flavor::Isothermal, UpsilonParams{}));
}

template <auto Fn>
void BM_scan(benchmark::State &st) {
  const int grid = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(Fn(Model{}, 0.05, 40.0, 0.5, grid, 24, false));
}

}  // namespace

BENCHMARK(BM_dnu<dnu_upper>)->Name("dnu_upper/parallel")->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dnu<dnu_upper_serial>)->Name("dnu_upper/serial")->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan<negativity_scan>)->Name("negativity_scan/parallel")->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan<negativity_scan_serial>)->Name("negativity_scan/serial")->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
