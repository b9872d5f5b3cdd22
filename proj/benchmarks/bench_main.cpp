// Microbenchmarks for the hot paths of the dimensioning pipeline: SINR CDF
// evaluation, azimuth averaging, master-table construction, region-model
// construction, and CDF/percentile queries.

#include <benchmark/benchmark.h>

#include <memory>
#include <numbers>

#include "frplan/geometry.hpp"
#include "frplan/radio.hpp"
#include "frplan/sinr.hpp"
#include "frplan/throughput.hpp"

namespace {

using namespace frplan;

constexpr double kHexSide = 500.0;
constexpr double kMinDist = 35.0;

NetworkProfile small_profile(double mean_users = 4.0, int num_rbs = 12) {
  NetworkProfile p;
  p.num_rbs = num_rbs;
  CellGeometry g = CellGeometry::from_hex_side(kHexSide, kMinDist);
  p.user_density = mean_users / (std::numbers::pi *
                                 (g.circ_radius * g.circ_radius -
                                  g.min_dist * g.min_dist));
  return p;
}

const BsLayout& layout() {
  static BsLayout l = build_layout(kHexSide, 2);
  return l;
}

BandLinkModel center_band_model(const NetworkProfile& p) {
  SpectrumPartition part = make_partition(p, Scheme::ffr, 0.5);
  return make_band_link_model(p, layout(), part, ffr_center_band());
}

void bench_sinr_cdf(benchmark::State& state) {
  NetworkProfile p = small_profile();
  BandLinkModel band = center_band_model(p);
  SinrContext ctx = band.context_at(250.0, 0.3);
  double x = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sinr_cdf(ctx, x));
    x = x < 64.0 ? x * 2.0 : 1.0;  // sweep the argument to defeat caching
  }
}
BENCHMARK(bench_sinr_cdf);

void bench_angle_average_cdf(benchmark::State& state) {
  NetworkProfile p = small_profile();
  BandLinkModel band = center_band_model(p);
  AnglePolicy policy;  // 24-point azimuth average
  for (auto _ : state)
    benchmark::DoNotOptimize(angle_policy_cdf(band, policy, 250.0, 4.0));
}
BENCHMARK(bench_angle_average_cdf);

void bench_master_table_build(benchmark::State& state) {
  NetworkProfile p = small_profile();
  BandLinkModel band = center_band_model(p);
  ModelOptions opts;
  CellGeometry g = CellGeometry::from_hex_side(kHexSide, kMinDist);
  for (auto _ : state) {
    BandCdfTable table(band, opts.policy, g.min_dist, g.circ_radius,
                       opts.master_d_nodes, 64, opts);
    benchmark::DoNotOptimize(table.d_nodes().size());
  }
}
BENCHMARK(bench_master_table_build)->Unit(benchmark::kMillisecond);

void bench_region_models_cached(benchmark::State& state) {
  NetworkProfile p = small_profile();
  CellGeometry g = CellGeometry::from_hex_side(kHexSide, kMinDist);
  MasterTableCache cache;
  // prime the cache: later iterations measure the per-design work only
  CellThroughputModel(p, g, layout(), Scheme::ffr, 0.6, 0.5, {}, &cache);
  double omega = 0.3;
  for (auto _ : state) {
    CellThroughputModel m(p, g, layout(), Scheme::ffr, omega, 0.5, {}, &cache);
    benchmark::DoNotOptimize(m.total_cdf_mass());
    omega = omega < 0.9 ? omega + 0.05 : 0.3;
  }
}
BENCHMARK(bench_region_models_cached)->Unit(benchmark::kMillisecond);

void bench_avg_cell_throughput(benchmark::State& state) {
  NetworkProfile p = small_profile();
  CellGeometry g = CellGeometry::from_hex_side(kHexSide, kMinDist);
  CellThroughputModel m(p, g, layout(), Scheme::ffr, 0.6, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(m.avg_cell_throughput());
}
BENCHMARK(bench_avg_cell_throughput)->Unit(benchmark::kMillisecond);

void bench_user_cdf_eval(benchmark::State& state) {
  NetworkProfile p = small_profile();
  CellGeometry g = CellGeometry::from_hex_side(kHexSide, kMinDist);
  CellThroughputModel m(p, g, layout(), Scheme::ffr, 0.6, 0.5);
  double v = 1e5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.user_cdf(v));
    v = v < 5e6 ? v * 1.5 : 1e5;
  }
}
BENCHMARK(bench_user_cdf_eval);

void bench_percentile(benchmark::State& state) {
  NetworkProfile p = small_profile();
  CellGeometry g = CellGeometry::from_hex_side(kHexSide, kMinDist);
  CellThroughputModel m(p, g, layout(), Scheme::ffr, 0.6, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(m.percentile(0.05));
}
BENCHMARK(bench_percentile)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
