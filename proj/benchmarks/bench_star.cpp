// Microbenchmarks for the hot paths: kernel table construction, the three
// star-product routes, the symplectic transform and the affine fast path.

#include <benchmark/benchmark.h>

#include "starprod/affine.hpp"
#include "starprod/star.hpp"
#include "starprod/weyl_system.hpp"

using namespace starprod;

namespace {

struct WeylFixture {
    DiscreteWeylSystem sys;
    DufloMoore dm;
    WignerMap map;
    GFunction f1, f2;

    explicit WeylFixture(Index n)
        : sys(build_weyl_system(n, n % 2 ? WeylOrdering::symmetric
                                         : WeylOrdering::standard)),
          dm(DufloMoore::scalar(1.0, n)),
          map(build_wigner(sys.rep, dm)),
          f1{sys.rep.group, Rng(7).vector(n * n)},
          f2{sys.rep.group, Rng(8).vector(n * n)} {}
};

std::vector<CVec> standard_basis(Index dim) {
    std::vector<CVec> b;
    for (Index i = 0; i < dim; ++i) {
        CVec v = CVec::Zero(dim);
        v(i) = 1.0;
        b.push_back(v);
    }
    return b;
}

}  // namespace

static void BM_WignerBuild_Weyl7(benchmark::State& state) {
    auto sys = build_weyl_system(7);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            build_wigner(sys.rep, DufloMoore::scalar(1.0, 7)));
}
BENCHMARK(BM_WignerBuild_Weyl7);

static void BM_StarImplicit_Weyl5(benchmark::State& state) {
    WeylFixture fx(5);
    for (auto _ : state)
        benchmark::DoNotOptimize(star_implicit(fx.map, fx.f1, fx.f2));
}
BENCHMARK(BM_StarImplicit_Weyl5);

static void BM_StarKernelBuild_Weyl5(benchmark::State& state) {
    WeylFixture fx(5);
    const auto basis = standard_basis(5);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_star_kernel(fx.map, fx.sys.rep, basis));
}
BENCHMARK(BM_StarKernelBuild_Weyl5);

static void BM_StarExplicit_Weyl5(benchmark::State& state) {
    WeylFixture fx(5);
    const auto kernel = build_star_kernel(fx.map, fx.sys.rep, standard_basis(5));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernel.star(fx.f1, fx.f2));
}
BENCHMARK(BM_StarExplicit_Weyl5);

static void BM_TwistedConvolution_Weyl5(benchmark::State& state) {
    WeylFixture fx(5);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            twisted_convolution(fx.map, fx.sys.rep, fx.f1, fx.f2, true));
}
BENCHMARK(BM_TwistedConvolution_Weyl5);

static void BM_SymplecticDFT_N16(benchmark::State& state) {
    const auto dft = build_symplectic_dft(16);
    auto group = build_cyclic_product_group(16);
    GFunction f{group, Rng(9).vector(256)};
    for (auto _ : state) benchmark::DoNotOptimize(dft.apply(f));
}
BENCHMARK(BM_SymplecticDFT_N16);

static void BM_MoyalKernelRoute_Weyl5(benchmark::State& state) {
    WeylFixture fx(5);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            moyal_twisted_product(fx.sys, fx.map, fx.f1, fx.f2));
}
BENCHMARK(BM_MoyalKernelRoute_Weyl5);

static void BM_AffineBuild_Small(benchmark::State& state) {
    AffineGridSpec s;
    s.L = 32;
    s.M = 16;
    s.K = 48;
    s.a_max = 16.0;
    s.x_min = std::pow(2.0, -5);
    s.r_min = 0.5;
    s.fiducial_count = 4;
    for (auto _ : state) benchmark::DoNotOptimize(build_affine(s));
}
BENCHMARK(BM_AffineBuild_Small);

static void BM_AffineStar_Small(benchmark::State& state) {
    AffineGridSpec s;
    s.L = 32;
    s.M = 16;
    s.K = 48;
    s.a_max = 16.0;
    s.x_min = std::pow(2.0, -5);
    s.r_min = 0.5;
    s.fiducial_count = 4;
    const auto rep = build_affine(s);
    const auto basis = laguerre_basis(rep.grid(), s.K);
    Rng rng(10);
    GFunction f1{rep.grid().group, rng.vector(rep.grid().group->size())};
    GFunction f2{rep.grid().group, rng.vector(rep.grid().group->size())};
    for (auto _ : state)
        benchmark::DoNotOptimize(affine_star(rep, f1, f2, basis, s.K));
}
BENCHMARK(BM_AffineStar_Small);

BENCHMARK_MAIN();
