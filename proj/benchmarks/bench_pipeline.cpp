// Microbenchmarks for the per-frame hot path: rasterization, pyramid
// construction, sparse flow, corner detection, and the guidance closed form.

#include <benchmark/benchmark.h>

#include "pursuit/features.hpp"
#include "pursuit/flow.hpp"
#include "pursuit/guidance.hpp"
#include "pursuit/raster.hpp"
#include "pursuit/rng.hpp"

using namespace pursuit;

namespace {

const CameraModel kCam;
const Palette kPal;

Frame sample_frame(double vehicle_x) {
    EntityState veh;
    veh.position = {vehicle_x, 0.0};
    std::vector<SceneObject> scene = vehicle_objects(veh, 5.0, 2.0, kPal);
    SceneObject bar;
    bar.center = {30.0, 10.0};
    bar.length = 40.0;
    bar.width = 8.0;
    bar.color = kPal.bar;
    scene.push_back(bar);
    return rasterize(scene, kCam, {0.0, 0.0}, kPal.ground);
}

}  // namespace

static void BM_Rasterize(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sample_frame(0.0));
}
BENCHMARK(BM_Rasterize)->Unit(benchmark::kMillisecond);

static void BM_PyramidBuild(benchmark::State& state) {
    const Frame f = sample_frame(0.0);
    for (auto _ : state) benchmark::DoNotOptimize(Pyramid::build(f.image, 3));
}
BENCHMARK(BM_PyramidBuild)->Unit(benchmark::kMillisecond);

static void BM_ShiTomasi(benchmark::State& state) {
    const Frame f = sample_frame(0.0);
    const RoiRect roi{360, 360, 440, 440};
    for (auto _ : state) benchmark::DoNotOptimize(detect_features(f.image, roi, 10));
}
BENCHMARK(BM_ShiTomasi)->Unit(benchmark::kMillisecond);

static void BM_PyramidalFlow(benchmark::State& state) {
    const Frame a = sample_frame(0.0);
    const Frame b = sample_frame(22.0 / 30.0);
    const Pyramid pa = Pyramid::build(a.image, 3);
    const Pyramid pb = Pyramid::build(b.image, 3);
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < 10; ++i) pts.emplace_back(390.0 + 2.0 * i, 395.0 + (i % 3));
    const FlowConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(pyramidal_flow_fb(pa, pb, pts, cfg));
}
BENCHMARK(BM_PyramidalFlow)->Unit(benchmark::kMillisecond);

static void BM_GuidanceClosedForm(benchmark::State& state) {
    const GuidanceConfig cfg;
    Rng rng(5);
    std::vector<RelativeState> states(1024);
    for (auto& s : states) {
        s.r = rng.uniform(5.0, 300.0);
        s.theta = rng.uniform(-M_PI, M_PI);
        s.v_r = rng.uniform(-30.0, 30.0);
        s.v_theta = rng.uniform(-30.0, 30.0);
    }
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            compute_commands(states[i & 1023], 2.0, 0.3, 0.1, cfg));
        ++i;
    }
}
BENCHMARK(BM_GuidanceClosedForm);
