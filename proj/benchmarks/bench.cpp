#include <benchmark/benchmark.h>

#include "phevsim/optimize.hpp"
#include "phevsim/prediction.hpp"
#include "phevsim/rng.hpp"
#include "phevsim/simulate.hpp"
#include "support/fixtures.hpp"

using namespace phevsim;

namespace {

std::vector<SegmentInstance> random_instances(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<SegmentInstance> instances;
    instances.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        instances.push_back(SegmentInstance{"s" + std::to_string(j), rng.uniform(),
                                            rng.uniform(0.0, 100.0), rng.uniform(0.0, 0.05),
                                            rng.uniform(0.0, 1.0)});
    }
    return instances;
}

void BM_SolveExpected(benchmark::State& state) {
    const auto instances = random_instances(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_expected(instances, 0.1));
    }
}
BENCHMARK(BM_SolveExpected)->Arg(8)->Arg(64)->Arg(512);

void BM_SolveRobust(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto instances = random_instances(n, 2);
    Rng rng(3);
    std::vector<std::vector<SegmentId>> routes(4);
    for (auto& route : routes) {
        for (const SegmentInstance& inst : instances) {
            if (rng.uniform() < 0.5) route.push_back(inst.id);
        }
        if (route.empty()) route.push_back(instances.front().id);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_robust(instances, routes, 0.1));
    }
}
BENCHMARK(BM_SolveRobust)->Arg(8)->Arg(32);

void BM_CappedFleet(benchmark::State& state) {
    const auto vehicles_count = static_cast<std::size_t>(state.range(0));
    std::vector<std::vector<SegmentInstance>> vehicles;
    std::vector<double> budgets;
    for (std::size_t v = 0; v < vehicles_count; ++v) {
        const SegmentId entry = v % 2 == 0 ? "r1" : "r2";
        vehicles.push_back({SegmentInstance{entry, 1.0, 50.0, 0.025, 0.25},
                            SegmentInstance{"r3", 1.0, 50.0, 0.025, 0.5}});
        budgets.push_back(0.015);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_capped_fleet(vehicles, budgets, {{"r3", 800.0}}));
    }
}
BENCHMARK(BM_CappedFleet)->Arg(8)->Arg(40);

void BM_SegmentPrediction(benchmark::State& state) {
    const RoadNetwork network = fixtures::commute_network();
    const TripHistory history = fixtures::commute_history(network);
    for (auto _ : state) {
        benchmark::DoNotOptimize(segment_probabilities(history, network, "a1"));
    }
}
BENCHMARK(BM_SegmentPrediction);

void BM_MarkovPrediction(benchmark::State& state) {
    const RoadNetwork network = fixtures::commute_network();
    const TripHistory history = fixtures::commute_history(network);
    const MarkovModel model = build_markov(history, network);
    for (auto _ : state) {
        benchmark::DoNotOptimize(markov_segment_probabilities(model, "a1"));
    }
}
BENCHMARK(BM_MarkovPrediction);

void BM_RunSingle(benchmark::State& state) {
    const RoadNetwork network = fixtures::commute_network();
    const TripHistory history = fixtures::commute_history(network);
    const StaticDensityProvider density(network, fixtures::commute_densities());
    const VehicleConfig vehicle =
        fixtures::commute_vehicle(Policy::Expected, EnergyModel::Mean);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_single(network, history, vehicle, density, {}, 1));
    }
}
BENCHMARK(BM_RunSingle);

}  // namespace

BENCHMARK_MAIN();
