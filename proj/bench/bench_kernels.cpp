// Copyright 2026 The advpinn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "advpinn/diffcore.hpp"
#include "advpinn/losses.hpp"
#include "advpinn/model.hpp"
#include "advpinn/problem.hpp"
#include "advpinn/reference.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <map>
#include <memory>

using namespace advpinn;

namespace {

struct Fixture {
    AdvectionProblem problem = catalog("nonlinear-single-pulse");
    PinnModel model;
    std::vector<Point> points;

    explicit Fixture(std::size_t n) {
        Architecture arch;
        arch.fourier_pairs = 64;
        arch.hidden = {64, 64, 64};
        arch.sigma = 2.0;
        model = init_model(arch, 1);
        points = sample_collocation(problem, n, 1, 1, 1).pde;
    }
};

const Fixture& fixture(std::size_t n) {
    static std::map<std::size_t, std::unique_ptr<Fixture>> cache;
    auto& f = cache[n];
    if (!f)
        f = std::make_unique<Fixture>(n);
    return *f;
}

void set_threads(benchmark::State& state) { omp_set_num_threads(static_cast<int>(state.range(1))); }

void BM_ForwardSerial(benchmark::State& state) {
    const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::evaluate_with_input_derivs(f.model, f.points));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ForwardParallel(benchmark::State& state) {
    set_threads(state);
    const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_with_input_derivs(f.model, f.points));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <LossVariant V>
void BM_GradientSerial(benchmark::State& state) {
    const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
    const auto loss = pde_term(f.problem, f.points, V);
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::loss_gradient(f.model, loss));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <LossVariant V>
void BM_GradientParallel(benchmark::State& state) {
    set_threads(state);
    const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
    const auto loss = pde_term(f.problem, f.points, V);
    for (auto _ : state)
        benchmark::DoNotOptimize(loss_gradient(f.model, loss));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_UpwindFd(benchmark::State& state) {
    set_threads(state);
    const auto problem = catalog("nonlinear-single-pulse");
    const double dx = 2.0 / static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(upwind_fd(problem, dx, 0.9, {1.0}));
}

void serial_args(benchmark::internal::Benchmark* b) {
    for (long n : {1000, 10000})
        b->Args({n, 1});
}

void parallel_args(benchmark::internal::Benchmark* b) {
    const int max = omp_get_max_threads();
    for (long n : {1000, 10000})
        for (int t = 1; t <= max; t *= 2)
            b->Args({n, t});
}

} // namespace

BENCHMARK(BM_ForwardSerial)->Apply(serial_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForwardParallel)->Apply(parallel_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GradientSerial<LossVariant::standard>)->Apply(serial_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradientParallel<LossVariant::standard>)->Apply(parallel_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GradientSerial<LossVariant::upwind_r>)->Apply(serial_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradientParallel<LossVariant::upwind_r>)->Apply(parallel_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_UpwindFd)->Args({4000, 1})->Args({40000, 1})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
