// Serial reference kernels against their OpenMP counterparts.
// Thread count follows OMP_NUM_THREADS; the argument is the problem size.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "sphdeconv/kernels.hpp"

using namespace sphdeconv;

namespace {

std::vector<SphereDirection> points(std::size_t n)
{
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<SphereDirection> out(n);
    for (auto& p : out) p = {std::acos(1.0 - 2.0 * u(gen)), 2.0 * kPi * u(gen)};
    return out;
}

std::vector<EulerRotation> rotations(std::size_t n)
{
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<EulerRotation> out(n);
    for (auto& g : out) g = {2 * kPi * u(gen), std::acos(1.0 - 2.0 * u(gen)), 2 * kPi * u(gen)};
    return out;
}

SphericalSpectrum spectrum(int L)
{
    SphericalSpectrum s(L);
    std::mt19937_64 gen(3);
    std::normal_distribution<double> g;
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m) s(l, m) = {g(gen), g(gen)};
    return s;
}

constexpr int kDegree = 15;

template <auto Kernel>
void moments(benchmark::State& state)
{
    const auto x = points(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(x, {}, kDegree));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void synthesis(benchmark::State& state)
{
    const auto x = points(static_cast<std::size_t>(state.range(0)));
    const auto s = spectrum(kDegree);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(s, kDegree, x));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void atoms(benchmark::State& state)
{
    const auto c = points(static_cast<std::size_t>(state.range(0)));
    const auto s = spectrum(kDegree);
    const std::vector<double> band(kDegree + 1, 0.5), scale(c.size(), 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(s, band, c, scale));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void rotation(benchmark::State& state)
{
    const auto g = rotations(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(g, kDegree));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(moments<kernels::serial::harmonic_moments>)->Name("harmonic_moments/serial")->Arg(1500)->Arg(100000);
BENCHMARK(moments<kernels::parallel::harmonic_moments>)->Name("harmonic_moments/parallel")->Arg(1500)->Arg(100000);
BENCHMARK(synthesis<kernels::serial::synthesize>)->Name("synthesize/serial")->Arg(16200);
BENCHMARK(synthesis<kernels::parallel::synthesize>)->Name("synthesize/parallel")->Arg(16200);
BENCHMARK(atoms<kernels::serial::project_atoms>)->Name("project_atoms/serial")->Arg(768)->Arg(3072);
BENCHMARK(atoms<kernels::parallel::project_atoms>)->Name("project_atoms/parallel")->Arg(768)->Arg(3072);
BENCHMARK(rotation<kernels::serial::rotation_moments>)->Name("rotation_moments/serial")->Arg(1500);
BENCHMARK(rotation<kernels::parallel::rotation_moments>)->Name("rotation_moments/parallel")->Arg(1500);

BENCHMARK_MAIN();
