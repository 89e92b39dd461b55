#include <benchmark/benchmark.h>

#include <cmath>

#include "wmgame/commands.hpp"
#include "wmgame/curve_fit.hpp"
#include "wmgame/game.hpp"
#include "wmgame/prune_sim.hpp"

namespace {

void BM_BestResponseK(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            wmgame::best_response_k(1.0, 0.9039, 1.25, 0.02, 1.08, 0.5));
    }
}
BENCHMARK(BM_BestResponseK);

void BM_BestResponseGrid(benchmark::State& state) {
    wmgame::DefenderStrategy d{0.008, 1.0, 0.01};
    wmgame::GameParams p;
    p.beta1 = 3.0;
    p.beta2 = 0.1;
    p.c = 0.3;
    std::vector<int> L_grid{1, 5, 10, 25, 50};
    std::vector<double> eps_grid{0.0, 0.05, 0.1, 0.2};
    for (auto _ : state) {
        benchmark::DoNotOptimize(wmgame::best_response(d, p, L_grid, eps_grid));
    }
}
BENCHMARK(BM_BestResponseGrid);

wmgame::PruneCurve reference_style_curve() {
    wmgame::PruneCurve curve;
    const double ks[] = {0.0, 0.005, 0.01, 0.015, 0.02, 0.03, 0.05};
    for (double k : ks) {
        double wsr = (0.9039 - 0.005) * std::exp(-1.25 * k) + 0.005;
        curve.points.push_back({k, 0.7947 - 0.124 * k, wsr, 0});
    }
    return curve;
}

void BM_FitWsrDecay(benchmark::State& state) {
    wmgame::PruneCurve curve = reference_style_curve();
    for (auto _ : state) {
        benchmark::DoNotOptimize(wmgame::fit_wsr_decay(curve));
    }
}
BENCHMARK(BM_FitWsrDecay);

void BM_SimulateCurve(benchmark::State& state) {
    wmgame::ModelSpec model;
    model.n = static_cast<int>(state.range(0));
    wmgame::AttackSpec attack;
    std::vector<double> k_grid{0.005, 0.01, 0.015, 0.02, 0.03, 0.05};
    std::vector<std::int64_t> seeds{0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            wmgame::run_attack_curve(model, attack, k_grid, seeds));
    }
}
BENCHMARK(BM_SimulateCurve)->Arg(1000)->Arg(10000);

} // namespace

BENCHMARK_MAIN();
