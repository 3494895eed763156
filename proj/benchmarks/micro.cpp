#include "certiq/constants.hpp"
#include "certiq/errorlab.hpp"
#include "certiq/quasinterp.hpp"
#include "certiq/reconstruct.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace certiq;

std::size_t center_vertex(const Mesh& mesh) {
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
        if (norm(mesh.vertex(v)) < 1e-14) return v;
    return 0;
}

void BM_LambdaA(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const Mesh mesh = build_crisscross(4, Domain::square2);
    const VertexPatch patch = vertex_patch(mesh, center_vertex(mesh));
    for (auto _ : state) benchmark::DoNotOptimize(lambda_a(mesh, patch, p).lambda);
}
BENCHMARK(BM_LambdaA)->DenseRange(1, 3);

void BM_PotentialReconstruction(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const Mesh mesh = build_crisscross(4, Domain::square2);
    const VertexPatch patch = vertex_patch(mesh, center_vertex(mesh));
    const BrokenField pi = local_best(smooth_function(), mesh, p);
    const auto blocks = restrict_to_patch(pi, patch);
    const PotentialReconstruction pot(mesh, patch, p);
    for (auto _ : state) benchmark::DoNotOptimize(pot.reconstruct(blocks));
}
BENCHMARK(BM_PotentialReconstruction)->DenseRange(1, 3);

void BM_QuasiInterpolate(benchmark::State& state) {
    const Mesh mesh = build_crisscross(static_cast<int>(state.range(0)), Domain::square2);
    const ConformingSpace space(mesh, 1);
    const FieldFunction u = smooth_function();
    for (auto _ : state) benchmark::DoNotOptimize(quasi_interpolate(u, space).coefficients().data());
    state.SetComplexityN(static_cast<benchmark::IterationCount>(mesh.num_triangles()));
}
BENCHMARK(BM_QuasiInterpolate)->RangeMultiplier(2)->Range(8, 64)->Complexity(benchmark::oN);

void BM_ComputeConstants(benchmark::State& state) {
    const Mesh mesh = build_crisscross(static_cast<int>(state.range(0)), Domain::lshape);
    for (auto _ : state) benchmark::DoNotOptimize(compute_constants(mesh, 1).c_omega);
}
BENCHMARK(BM_ComputeConstants)->Arg(4)->Arg(8)->Arg(16);

} // namespace

BENCHMARK_MAIN();
