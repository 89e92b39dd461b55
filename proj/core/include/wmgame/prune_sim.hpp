#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wmgame/curve.hpp"
#include "wmgame/game.hpp"

namespace wmgame {

// ---------------------------------------------------------------------------
// Mechanistic neuron-level surrogate of a watermarked model and the pruning
// attack. The decay law is deterministic; all randomness lives in which
// neurons get removed (estimation noise, epsilon-greedy selection), so the
// emergent curves can be compared against the analytical bound without
// circularity.
// ---------------------------------------------------------------------------

enum class WeightMode {
    Uniform,     // w_i = alpha_true / n
    Exponential, // positive draws renormalized to alpha_true
};

// Ground truth of one synthetic model: the hidden watermark subset S*,
// per-neuron clean-importance weights, and the watermark fragility
// exponent kappa = kappa0 * gamma.
struct SyntheticModel {
    int n = 0;
    std::vector<int> watermark_set;       // sorted indices, size max(1, round(rho*n))
    std::vector<std::uint8_t> watermark_mask; // length n, membership lookup
    std::vector<double> clean_weights;    // length n, sums to alpha_true
    double kappa = 0.0;
    double acc0 = 0.0;
    double wsr0 = 0.0;
    double eps_res_true = 0.0;
    std::uint64_t seed = 0;
};

// Attacker's noisy per-neuron estimate of watermark membership.
struct ImportanceScores {
    std::vector<double> scores;
};

SyntheticModel build_model(int n, const DefenderStrategy& d, double acc0,
                           double wsr0, double alpha_true, double kappa0,
                           double eps_res_true, std::uint64_t seed,
                           WeightMode weights = WeightMode::Uniform);

// score_i = 1[i in S*] + g_i, g_i ~ N(0, (noise0*(1+delta)/sqrt(L))^2):
// the mean of L independent unit observations. Exploration does not enter
// estimation; it only affects selection.
ImportanceScores estimate_importance(const SyntheticModel& model, int L,
                                     double delta, double noise0,
                                     std::uint64_t seed);

// Iteratively selects m = round(k*n) distinct neurons. Each step:
// with probability 1-epsilon the highest-scoring unselected neuron with
// score >= tau_discard (uniform random among the rest once that greedy
// pool is exhausted), with probability epsilon a uniform random
// unselected neuron. Returns sorted indices.
std::vector<int> prune_select(const ImportanceScores& scores, double k,
                              double epsilon, double tau_discard,
                              std::uint64_t seed);

struct ModelEval {
    double acc = 0.0;
    double wsr = 0.0;
};

// acc = clamp(acc0 - sum of removed clean weights, 0, 1);
// wsr = eps_res + (wsr0 - eps_res) * exp(-kappa * |removed ∩ S*| / |S*|).
// With removal fraction k and precision eta_emp = |removed ∩ S*|/|removed|
// the exponent equals -(kappa/rho) * eta_emp * k, the same form as the
// analytical bound with eta_emp in place of eta.
ModelEval evaluate_model(const SyntheticModel& model, std::span<const int> removed);

// Realized per-unit effectiveness |removed ∩ S*| / |removed|.
// Throws ValidationError("empty-selection") on an empty set.
double empirical_eta(std::span<const int> removed, const SyntheticModel& model);

// Simulation inputs for one attack curve.
struct ModelSpec {
    int n = 10000;
    DefenderStrategy defender;
    double acc0 = 0.7947;
    double wsr0 = 0.9039;
    double alpha_true = 0.124;
    double kappa0 = 4.3;
    double eps_res_true = 0.0;
    WeightMode weights = WeightMode::Uniform;
};

struct AttackSpec {
    int L = 50;
    double epsilon = 0.1;
    double noise0 = 1.0;
    double tau_discard = 0.5;
};

// For each seed: build a model, estimate importance once, then select and
// evaluate at every k (selection reseeded per (seed, k) via derive_seed).
// k_grid must be sorted ascending within [0, 1]; a k = 0 baseline is
// prepended when absent. Output rows sorted by (seed, k).
PruneCurve run_attack_curve(const ModelSpec& model_cfg, const AttackSpec& attack_cfg,
                            std::vector<double> k_grid,
                            std::span<const std::int64_t> seeds);

} // namespace wmgame
