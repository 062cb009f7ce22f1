// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "sdnv/prototypes.hpp"
#include "sdnv/sdn_model.hpp"

using namespace sdnv;

namespace {

Rational draw(std::mt19937_64& rng, long num, long den)
{
    return Rational(std::uniform_int_distribution<long>(-num, num)(rng), den);
}

SdnModel bench_model(std::size_t d)
{
    std::mt19937_64 rng(11);
    AffineLayer l1{20, d, {}, {}}, l2{10, 20, {}, {}};
    for (std::size_t i = 0; i < 20 * d; ++i)
        l1.weights.push_back(draw(rng, 100, 100));
    for (std::size_t i = 0; i < 20; ++i)
        l1.bias.push_back(draw(rng, 100, 100));
    for (std::size_t i = 0; i < 200; ++i)
        l2.weights.push_back(draw(rng, 100, 100));
    for (std::size_t i = 0; i < 10; ++i)
        l2.bias.push_back(draw(rng, 100, 100));
    return SdnModel({d, 20, 10}, {l1, l2}, 4, Rational(5, 2));
}

std::vector<std::vector<Rational>> bench_inputs(std::size_t n, std::size_t d)
{
    std::mt19937_64 rng(12);
    std::vector<std::vector<Rational>> xs(n);
    for (auto& x : xs)
        for (std::size_t j = 0; j < d; ++j)
            x.push_back(Rational(std::uniform_int_distribution<long>(0, 255)(rng), 255));
    return xs;
}

template <auto Kernel>
void forward(benchmark::State& state)
{
    const auto d = static_cast<std::size_t>(state.range(0));
    const SdnModel m = bench_model(d);
    const auto xs = bench_inputs(256, d);
    for (auto _ : state)
        benchmark::DoNotOptimize(Kernel(m, xs));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(xs.size()));
}

std::vector<Point> blobs(std::size_t n)
{
    std::mt19937_64 rng(13);
    std::vector<Point> pts(n);
    for (auto& p : pts)
        for (int j = 0; j < 16; ++j)
            p.push_back(Rational(std::uniform_int_distribution<long>(0, 255)(rng), 255));
    return pts;
}

template <auto Kernel>
void nearest(benchmark::State& state)
{
    const auto pts = blobs(static_cast<std::size_t>(state.range(0)));
    const std::vector<Point> centroids(pts.begin(), pts.begin() + 8);
    for (auto _ : state)
        benchmark::DoNotOptimize(Kernel(pts, centroids));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void clustering(benchmark::State& state)
{
    const auto pts = blobs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(Kernel(pts, 4, 1, 20));
}

} // namespace

BENCHMARK(forward<forward_batch>)->Name("forward_batch")->Arg(64)->Arg(784)->UseRealTime();
BENCHMARK(forward<forward_batch_serial>)->Name("forward_batch_serial")->Arg(64)->Arg(784)->UseRealTime();
BENCHMARK(nearest<assign_nearest>)->Name("assign_nearest")->Arg(1000)->Arg(10000)->UseRealTime();
BENCHMARK(nearest<assign_nearest_serial>)->Name("assign_nearest_serial")->Arg(1000)->Arg(10000)->UseRealTime();
BENCHMARK(clustering<kmeans>)->Name("kmeans")->Arg(500)->UseRealTime();
BENCHMARK(clustering<kmeans_serial>)->Name("kmeans_serial")->Arg(500)->UseRealTime();

BENCHMARK_MAIN();
