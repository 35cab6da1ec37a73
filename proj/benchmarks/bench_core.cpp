#include <benchmark/benchmark.h>

#include <random>

#include "prlab/agent.hpp"
#include "prlab/cartpole.hpp"
#include "prlab/encoding.hpp"
#include "prlab/experiment.hpp"
#include "prlab/rehearsal.hpp"
#include "prlab/rng.hpp"

using namespace prlab;

namespace {

Vec random_input(std::mt19937& gen) {
    Vec v(kObservationSize);
    for (double& x : v) x = uniform_unit(gen);
    return v;
}

void BM_Forward(benchmark::State& state) {
    const NetworkParams net = init_network({12, 16, 2}, 1);
    std::mt19937 gen(2);
    const Vec input = random_input(gen);
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward(net, input));
    }
}
BENCHMARK(BM_Forward);

void BM_Backprop(benchmark::State& state) {
    NetworkParams net = init_network({12, 16, 2}, 3);
    std::mt19937 gen(4);
    const Vec input = random_input(gen);
    const Vec target = {0.1, -0.2};
    for (auto _ : state) {
        net = backprop(net, input, target, 0.3);
    }
}
BENCHMARK(BM_Backprop);

void BM_Eq3Delta(benchmark::State& state) {
    std::mt19937 gen(5);
    Vec b(13), x(13);
    for (double& v : b) v = uniform_range(gen, -1.0, 1.0);
    for (double& v : x) v = uniform_unit(gen);
    for (auto _ : state) {
        benchmark::DoNotOptimize(eq3_delta(b, 0.5, {x}));
    }
}
BENCHMARK(BM_Eq3Delta);

void BM_FrRehearse(benchmark::State& state) {
    NetworkParams net = init_network({12, 16, 2}, 6);
    RehearsalConfig config;
    config.mode = RehearsalMode::FrAllLayers;
    std::mt19937 gen(7);
    const PseudoSet set = capture_pseudoset(net, config, gen);
    const Vec input = random_input(gen);
    for (auto _ : state) {
        const LayerActivations acts = forward(net, input);
        Vec target = acts.output();
        target[0] += 0.1;
        const std::vector<Vec> errs = backprop_errors(net, acts, target);
        fr_rehearse(net, acts, errs, set, RehearsalMode::FrAllLayers, 0.06);
    }
}
BENCHMARK(BM_FrRehearse);

void BM_BatchRehearse(benchmark::State& state) {
    NetworkParams net = init_network({12, 16, 2}, 8);
    RehearsalConfig config;
    config.mode = RehearsalMode::Batch;
    config.batch_iterations = 5;
    std::mt19937 gen(9);
    const PseudoSet set = capture_pseudoset(net, config, gen);
    BatchItem fresh;
    fresh.input = random_input(gen);
    fresh.target = {0.1, -0.2};
    for (auto _ : state) {
        net = batch_rehearse(net, fresh, set, 0.3, config.batch_iterations);
    }
}
BENCHMARK(BM_BatchRehearse);

void BM_Episode(benchmark::State& state) {
    const PhysicsParams params;
    for (auto _ : state) {
        AgentState agent = make_agent(16, AgentHyperparams{}, 10);
        benchmark::DoNotOptimize(run_episode(agent, reset_state(11), params, 2000, nullptr));
    }
}
BENCHMARK(BM_Episode);

}  // namespace

BENCHMARK_MAIN();
