// Parallel kernels against their serial reference paths.

#include "fgplate/solver.hpp"
#include "fgplate/study.hpp"

#include <benchmark/benchmark.h>

#include <omp.h>

using namespace fgplate;

namespace {

PlateModel plate(int n) {
    PlateModel m;
    m.h = 0.1;
    m.gradient_index = 2.0;
    m.thermal = ThermalState{400.0, 300.0, 300.0};
    m.nx = m.ny = n;
    return m;
}

struct Fixture {
    Mesh mesh;
    DofMap dofs;
    SectionProperties section;
    explicit Fixture(int n)
        : mesh(generate_mesh(1.0, 1.0, 0.0, n, n)),
          dofs(apply_boundary_conditions(mesh, BoundaryCondition::SimplySupported)),
          section(section_properties(si3n4_sus304(), 0.1, 2.0, ThermalState{400.0, 300.0, 300.0})) {}

    ElementMatrix kernel(int e) const {
        const LinearElementMatrices l = element_linear(section, mesh.element_coords(e));
        return l.stiffness + l.shear_stiffness;
    }
};

void BM_AssembleParallel(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)));
    const Assembler assembler(f.mesh, f.dofs);
    for (auto _ : state)
        benchmark::DoNotOptimize(assembler.assemble_with([&](int e) { return f.kernel(e); }));
    state.counters["threads"] = omp_get_max_threads();
}

void BM_AssembleSerialReference(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            assemble_reference(f.mesh, f.dofs, [&](int e) { return f.kernel(e); }));
}

void BM_EigenSubspace(benchmark::State& state) {
    const GlobalSystem s = build_system(plate(static_cast<int>(state.range(0))));
    const SparseMatrix k = s.linear_operator();
    for (auto _ : state) {
        SubspaceEigenSolver solver(s.assembler.pattern());
        benchmark::DoNotOptimize(solver.solve(k, s.mass, 6));
    }
}

void BM_EigenDense(benchmark::State& state) {
    const GlobalSystem s = build_system(plate(static_cast<int>(state.range(0))));
    const Eigen::MatrixXd k(s.linear_operator());
    const Eigen::MatrixXd m(s.mass);
    for (auto _ : state) benchmark::DoNotOptimize(dense_eigenpairs(k, m, 6));
}

void BM_StudyJobs(benchmark::State& state) {
    StudyConfig c;
    c.h = 0.1;
    c.nx = c.ny = 6;
    c.gradient_indices = {0.0, 1.0, 2.0, 5.0};
    c.amplitudes = {0.4, 0.8};
    const int jobs = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_study(c, jobs));
}

}  // namespace

BENCHMARK(BM_AssembleParallel)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleSerialReference)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EigenSubspace)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EigenDense)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StudyJobs)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
