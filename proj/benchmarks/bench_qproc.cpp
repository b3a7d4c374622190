// Copyright 2026 The qproc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "qproc/estimation.hpp"
#include "qproc/process_norm.hpp"
#include "qproc/protocols.hpp"

namespace {

using namespace qproc;

RVector ramp(std::size_t n) {
    RVector q(static_cast<Eigen::Index>(n));
    for (Eigen::Index j = 0; j < q.size(); ++j) {
        q(j) = 1.0 / static_cast<double>(j + 1);
    }
    return q;
}

void BM_GeneratorSeminorm(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto fam = ProcessFamily::pauli_z(n);
    const TangentVector b(ramp(n));
    for (auto _ : state) {
        benchmark::DoNotOptimize(generator_seminorm(fam, b));
    }
}
BENCHMARK(BM_GeneratorSeminorm)->DenseRange(2, 8, 2);

void BM_BMinEpsilonPair(benchmark::State &state) {
    const auto fam = ProcessFamily::epsilon_pair(0.5);
    const OneForm dq{1.0, 0.3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(b_min_solve(fam, dq));
    }
}
BENCHMARK(BM_BMinEpsilonPair);

void BM_BMinCustom(benchmark::State &state) {
    const auto fam = ProcessFamily::custom_unitary(pauli_z_generators(3));
    const OneForm dq(ramp(3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(b_min_solve(fam, dq));
    }
}
BENCHMARK(BM_BMinCustom);

void BM_CornerFisher(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto fam = ProcessFamily::pauli_z(n);
    const Protocol p = corner_protocol(OneForm(ramp(n)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(protocol_fisher(p, fam));
    }
}
BENCHMARK(BM_CornerFisher)->DenseRange(2, 6, 2);

void BM_ZooFisher(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto fam = ProcessFamily::pauli_z(n);
    const Protocol p = zoo_protocol(RVector(0.5 * ramp(n)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(protocol_fisher(p, fam));
    }
}
BENCHMARK(BM_ZooFisher)->DenseRange(1, 3);

void BM_Study(benchmark::State &state) {
    const auto fam = ProcessFamily::pauli_z(2);
    const Protocol p = corner_protocol(OneForm{1.0, 0.5});
    StudyOptions opt;
    opt.shots = 10000;
    opt.repetitions = static_cast<std::uint64_t>(state.range(0));
    opt.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_study(p, fam, RVector::Zero(2), opt));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Study)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
