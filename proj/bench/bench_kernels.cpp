// Serial reference vs OpenMP kernels, plus the FFT path of the Maxwell gain term.
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "grainkin/collision.hpp"
#include "grainkin/fft_conv.hpp"
#include "grainkin/kernels.hpp"
#include "grainkin/profiles.hpp"

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = u(gen);
    return v;
}

std::vector<double> kernel_weights(std::size_t n, double gamma) {
    std::vector<double> w(n);
    for (std::size_t d = 0; d < n; ++d) w[d] = d == 0 ? 0.0 : std::pow(static_cast<double>(d), gamma);
    return w;
}

template <auto Fn>
void gain_like(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto f = random_vector(n, 1), g = random_vector(n, 2), w = kernel_weights(n, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(f, g, w));
    state.SetComplexityN(state.range(0));
}

template <auto Fn>
void toeplitz(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto g = random_vector(n, 3), w = kernel_weights(n, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(g, w));
    state.SetComplexityN(state.range(0));
}

template <auto Fn>
void pair(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto f = random_vector(n, 4), g = random_vector(n, 5), w = kernel_weights(n, 2.1);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(f, g, w));
}

template <auto Fn>
void dft(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto f = random_vector(n, 6);
    std::vector<double> xi(n / 4 + 1);
    for (std::size_t m = 0; m < xi.size(); ++m) xi[m] = 0.01 * static_cast<double>(m);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(f, -20.0, 40.0 / static_cast<double>(n), xi));
}

void fft_convolution(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto f = random_vector(n, 7), g = random_vector(n, 8);
    for (auto _ : state) benchmark::DoNotOptimize(grainkin::linear_convolution(f, g));
    state.SetComplexityN(state.range(0));
}

void collision_operator_gamma(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const double gamma = static_cast<double>(state.range(1)) / 10.0;
    const grainkin::Field f = grainkin::Field::sample(grainkin::make_grid(20.0, n),
                                                      [](double x) { return grainkin::profiles::gaussian(x); });
    const grainkin::CollisionParams p(gamma);
    for (auto _ : state) benchmark::DoNotOptimize(grainkin::collision_operator(f, f, p));
}

using namespace grainkin::kernels;

BENCHMARK(gain_like<gain_sum>)->Name("gain_sum/openmp")->RangeMultiplier(2)->Range(1 << 10, 1 << 13);
BENCHMARK(gain_like<serial::gain_sum>)->Name("gain_sum/serial")->RangeMultiplier(2)->Range(1 << 10, 1 << 13);
BENCHMARK(gain_like<odd_gain_sum>)->Name("odd_gain_sum/openmp")->RangeMultiplier(2)->Range(1 << 10, 1 << 13);
BENCHMARK(gain_like<serial::odd_gain_sum>)->Name("odd_gain_sum/serial")->RangeMultiplier(2)->Range(1 << 10, 1 << 13);
BENCHMARK(toeplitz<toeplitz_sum>)->Name("toeplitz_sum/openmp")->RangeMultiplier(2)->Range(1 << 10, 1 << 13);
BENCHMARK(toeplitz<serial::toeplitz_sum>)->Name("toeplitz_sum/serial")->RangeMultiplier(2)->Range(1 << 10, 1 << 13);
BENCHMARK(pair<pair_sum>)->Name("pair_sum/openmp")->Arg(1 << 12)->Arg(1 << 14);
BENCHMARK(pair<serial::pair_sum>)->Name("pair_sum/serial")->Arg(1 << 12)->Arg(1 << 14);
BENCHMARK(dft<forward_dft>)->Name("forward_dft/openmp")->Arg(1 << 12)->Arg(1 << 14);
BENCHMARK(dft<serial::forward_dft>)->Name("forward_dft/serial")->Arg(1 << 12)->Arg(1 << 14);
BENCHMARK(fft_convolution)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity(benchmark::oNLogN);
BENCHMARK(collision_operator_gamma)->Args({2048, 0})->Args({2048, 1})->Args({8192, 0})->Args({8192, 1});

}  // namespace

int main(int argc, char** argv) {
    grainkin::kernels::configure_threads();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
