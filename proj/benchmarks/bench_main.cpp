#include <benchmark/benchmark.h>

#include "heis/gallery.hpp"
#include "heis/reconstruct.hpp"
#include "heis/singular.hpp"

using namespace heis;

static void BM_EvalFrame(benchmark::State& st) {
    GalleryMember m = build(GalleryId::Ex4_2);
    Vec2 p{0.7, 0.3};
    for (auto _ : st) benchmark::DoNotOptimize(eval_frame(m.problem, p));
}
BENCHMARK(BM_EvalFrame);

static void BM_TraceCharacteristic(benchmark::State& st) {
    GalleryMember m = build(GalleryId::Ex4_1);
    Vec2 start = m.truth.limits.front().start;
    StopPolicy pol = default_policy(m.problem);
    pol.step = 1e-3;
    for (auto _ : st) benchmark::DoNotOptimize(trace_characteristic(m.problem, start, -1, pol));
}
BENCHMARK(BM_TraceCharacteristic)->Unit(benchmark::kMillisecond);

static void BM_DetectSingular(benchmark::State& st) {
    GalleryMember m = build(GalleryId::Ex4_4);
    const int n = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(detect_singular(m.problem, n, 1));
}
BENCHMARK(BM_DetectSingular)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Reconstruct(benchmark::State& st) {
    IntrinsicPatch p = patch_from_expressions("1", "0", "xi+1", "0", {0, 1, 0, 1}, static_cast<int>(st.range(0)));
    for (auto _ : st) {
        ReconstructionPatch rp = build_coordinates(p);
        benchmark::DoNotOptimize(emit_graph(rp));
    }
}
BENCHMARK(BM_Reconstruct)->Arg(61)->Arg(101)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
