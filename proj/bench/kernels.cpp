// Serial reference kernels against the OpenMP ones on a bench-scene frame.

#include "grp/cloud.hpp"
#include "grp/clustering.hpp"
#include "grp/plane.hpp"
#include "grp/proposal.hpp"
#include "grp/reference.hpp"
#include "grp/synth.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace grp;

const PointCloud&
frame()
{
  static const PointCloud c = synth_cloud(bench_scene(), 0);
  return c;
}

double
leaf()
{
  static const double l = calibrate_leaf(frame(), 0.1).leaf;
  return l;
}

const PointCloud&
downsampled()
{
  static const PointCloud c = voxel_downsample(frame(), leaf());
  return c;
}

const PointCloud&
objects()
{
  static const PointCloud c = [] {
    const PointCloud& d = downsampled();
    return split_plane(d, ransac_plane(d, RansacParams{})).outliers;
  }();
  return c;
}

void
BM_Voxel(benchmark::State& st)
{
  for (auto _ : st) benchmark::DoNotOptimize(voxel_downsample(frame(), leaf()));
  st.SetItemsProcessed(st.iterations() * frame().size());
}

void
BM_VoxelReference(benchmark::State& st)
{
  for (auto _ : st) benchmark::DoNotOptimize(reference::voxel_downsample(frame(), leaf()));
  st.SetItemsProcessed(st.iterations() * frame().size());
}

void
BM_Passthrough(benchmark::State& st)
{
  const PassthroughBounds b = default_table_bounds();
  for (auto _ : st) benchmark::DoNotOptimize(passthrough(frame(), b));
}

void
BM_PassthroughReference(benchmark::State& st)
{
  const PassthroughBounds b = default_table_bounds();
  for (auto _ : st) benchmark::DoNotOptimize(reference::passthrough(frame(), b));
}

void
BM_Ransac(benchmark::State& st)
{
  for (auto _ : st) benchmark::DoNotOptimize(ransac_plane(downsampled(), RansacParams{}));
}

void
BM_RansacReference(benchmark::State& st)
{
  for (auto _ : st) benchmark::DoNotOptimize(reference::ransac_plane(downsampled(), RansacParams{}));
}

void
BM_Cluster(benchmark::State& st)
{
  for (auto _ : st) benchmark::DoNotOptimize(euclidean_cluster(objects(), ClusterParams{}));
}

void
BM_ClusterReference(benchmark::State& st)
{
  for (auto _ : st) benchmark::DoNotOptimize(reference::euclidean_cluster(objects(), ClusterParams{}));
}

void
BM_Calibrate(benchmark::State& st)
{
  for (auto _ : st) benchmark::DoNotOptimize(calibrate_leaf(frame(), 0.1));
}

void
BM_Propose(benchmark::State& st)
{
  PipelineConfig c;
  c.alpha.reset();
  c.leaf = leaf();
  for (auto _ : st) benchmark::DoNotOptimize(propose_regions(frame(), c));
}

} // namespace

BENCHMARK(BM_Voxel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VoxelReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Passthrough)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PassthroughReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Ransac)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RansacReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Cluster)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClusterReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Calibrate)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Propose)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
