#include "wmgame/prune_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wmgame/rng.hpp"

namespace wmgame {

SyntheticModel build_model(int n, const DefenderStrategy& d, double acc0,
                           double wsr0, double alpha_true, double kappa0,
                           double eps_res_true, std::uint64_t seed,
                           WeightMode weights) {
    validate(d, "build_model.defender");
    if (n < 10) throw ValidationError("build_model: n must be >= 10");
    if (!(acc0 >= 0.0 && acc0 <= 1.0)) throw ValidationError("build_model: acc0 must be in [0, 1]");
    if (!(wsr0 >= 0.0 && wsr0 <= 1.0)) throw ValidationError("build_model: wsr0 must be in [0, 1]");
    if (!(alpha_true >= 0.0)) throw ValidationError("build_model: alpha_true must be >= 0");
    if (!(kappa0 > 0.0)) throw ValidationError("build_model: kappa0 must be > 0");
    if (!(eps_res_true >= 0.0 && eps_res_true <= wsr0))
        throw ValidationError("build_model: eps_res_true must be in [0, wsr0]");

    SyntheticModel model;
    model.n = n;
    model.acc0 = acc0;
    model.wsr0 = wsr0;
    model.eps_res_true = eps_res_true;
    model.kappa = kappa0 * d.gamma;
    model.seed = seed;

    // Uniform sample of s watermark carriers without replacement
    // (partial Fisher-Yates).
    auto s = static_cast<int>(std::max<long long>(1, std::llround(d.rho * n)));
    Rng rng(derive_seed(seed, kStreamModel, 0));
    std::vector<int> indices(static_cast<std::size_t>(n));
    std::iota(indices.begin(), indices.end(), 0);
    for (int i = 0; i < s; ++i) {
        auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
    }
    model.watermark_set.assign(indices.begin(), indices.begin() + s);
    std::sort(model.watermark_set.begin(), model.watermark_set.end());
    model.watermark_mask.assign(static_cast<std::size_t>(n), 0);
    for (int idx : model.watermark_set) model.watermark_mask[static_cast<std::size_t>(idx)] = 1;

    model.clean_weights.resize(static_cast<std::size_t>(n));
    if (weights == WeightMode::Uniform) {
        double w = alpha_true / n;
        std::fill(model.clean_weights.begin(), model.clean_weights.end(), w);
    } else {
        Rng wrng(derive_seed(seed, kStreamWeights, 0));
        double total = 0.0;
        for (auto& w : model.clean_weights) {
            w = -std::log(1.0 - wrng.uniform01()); // Exp(1) draw, >= 0
            total += w;
        }
        double scale = alpha_true / total;
        for (auto& w : model.clean_weights) w *= scale;
    }
    return model;
}

ImportanceScores estimate_importance(const SyntheticModel& model, int L,
                                     double delta, double noise0,
                                     std::uint64_t seed) {
    if (L < 1) throw ValidationError("estimate_importance: L must be >= 1");
    if (!(delta >= 0.0)) throw ValidationError("estimate_importance: delta must be >= 0");
    if (!(noise0 >= 0.0)) throw ValidationError("estimate_importance: noise0 must be >= 0");

    double sigma = noise0 * (1.0 + delta) / std::sqrt(static_cast<double>(L));
    Rng rng(seed);
    ImportanceScores out;
    out.scores.resize(static_cast<std::size_t>(model.n));
    for (int i = 0; i < model.n; ++i) {
        out.scores[static_cast<std::size_t>(i)] =
            static_cast<double>(model.watermark_mask[static_cast<std::size_t>(i)]) +
            sigma * rng.normal();
    }
    return out;
}

std::vector<int> prune_select(const ImportanceScores& scores, double k,
                              double epsilon, double tau_discard,
                              std::uint64_t seed) {
    auto n = static_cast<int>(scores.scores.size());
    if (!(k >= 0.0 && k <= 1.0)) throw ValidationError("prune_select: k must be in [0, 1]");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw ValidationError("prune_select: epsilon must be in [0, 1]");
    auto m = static_cast<int>(std::llround(k * n));
    if (m == 0) return {};

    // Score-descending order, ties by index, drives the greedy picks.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        double sl = scores.scores[static_cast<std::size_t>(lhs)];
        double sr = scores.scores[static_cast<std::size_t>(rhs)];
        if (sl != sr) return sl > sr;
        return lhs < rhs;
    });

    // Pool of unselected indices with O(1) swap-removal for uniform picks.
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> pos(static_cast<std::size_t>(n));
    std::iota(pos.begin(), pos.end(), 0);
    std::vector<std::uint8_t> selected(static_cast<std::size_t>(n), 0);

    auto remove_from_pool = [&](int idx) {
        int p = pos[static_cast<std::size_t>(idx)];
        int last = pool.back();
        pool[static_cast<std::size_t>(p)] = last;
        pos[static_cast<std::size_t>(last)] = p;
        pool.pop_back();
    };

    Rng rng(seed);
    std::vector<int> removed;
    removed.reserve(static_cast<std::size_t>(m));
    std::size_t greedy_ptr = 0;

    auto pick_uniform = [&]() {
        auto j = static_cast<std::size_t>(rng.below(pool.size()));
        return pool[j];
    };

    for (int step = 0; step < m; ++step) {
        bool explore = rng.uniform01() < epsilon;
        int pick = -1;
        if (!explore) {
            while (greedy_ptr < order.size() &&
                   selected[static_cast<std::size_t>(order[greedy_ptr])])
                ++greedy_ptr;
            if (greedy_ptr < order.size() &&
                scores.scores[static_cast<std::size_t>(order[greedy_ptr])] >= tau_discard) {
                pick = order[greedy_ptr];
            } else {
                pick = pick_uniform(); // greedy pool exhausted
            }
        } else {
            pick = pick_uniform();
        }
        selected[static_cast<std::size_t>(pick)] = 1;
        remove_from_pool(pick);
        removed.push_back(pick);
    }
    std::sort(removed.begin(), removed.end());
    return removed;
}

ModelEval evaluate_model(const SyntheticModel& model, std::span<const int> removed) {
    double acc_loss = 0.0;
    long long hits = 0;
    for (int idx : removed) {
        if (idx < 0 || idx >= model.n)
            throw ValidationError("evaluate_model: removed index out of range");
        acc_loss += model.clean_weights[static_cast<std::size_t>(idx)];
        hits += model.watermark_mask[static_cast<std::size_t>(idx)];
    }
    double removed_fraction = static_cast<double>(hits) /
                              static_cast<double>(model.watermark_set.size());
    ModelEval eval;
    eval.acc = std::clamp(model.acc0 - acc_loss, 0.0, 1.0);
    eval.wsr = model.eps_res_true +
               (model.wsr0 - model.eps_res_true) * std::exp(-model.kappa * removed_fraction);
    return eval;
}

double empirical_eta(std::span<const int> removed, const SyntheticModel& model) {
    if (removed.empty()) throw ValidationError("empty-selection: removed set is empty");
    long long hits = 0;
    for (int idx : removed) {
        if (idx < 0 || idx >= model.n)
            throw ValidationError("empirical_eta: removed index out of range");
        hits += model.watermark_mask[static_cast<std::size_t>(idx)];
    }
    return static_cast<double>(hits) / static_cast<double>(removed.size());
}

PruneCurve run_attack_curve(const ModelSpec& model_cfg, const AttackSpec& attack_cfg,
                            std::vector<double> k_grid,
                            std::span<const std::int64_t> seeds) {
    if (seeds.empty()) throw ValidationError("run_attack_curve: seeds must be non-empty");
    if (k_grid.empty()) throw ValidationError("run_attack_curve: k_grid must be non-empty");
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (!(k_grid[i] >= 0.0 && k_grid[i] <= 1.0))
            throw ValidationError("run_attack_curve: k_grid[" + std::to_string(i) +
                                  "] must be in [0, 1]");
        if (i > 0 && !(k_grid[i] > k_grid[i - 1]))
            throw ValidationError("run_attack_curve: k_grid must be sorted strictly ascending");
    }
    if (k_grid.front() != 0.0) k_grid.insert(k_grid.begin(), 0.0);

    PruneCurve curve;
    for (std::int64_t seed : seeds) {
        auto u = static_cast<std::uint64_t>(seed);
        SyntheticModel model =
            build_model(model_cfg.n, model_cfg.defender, model_cfg.acc0, model_cfg.wsr0,
                        model_cfg.alpha_true, model_cfg.kappa0, model_cfg.eps_res_true,
                        u, model_cfg.weights);
        ImportanceScores scores =
            estimate_importance(model, attack_cfg.L, model_cfg.defender.delta,
                                attack_cfg.noise0, derive_seed(u, kStreamEstimate, 0));
        for (std::size_t ki = 0; ki < k_grid.size(); ++ki) {
            std::vector<int> removed =
                prune_select(scores, k_grid[ki], attack_cfg.epsilon,
                             attack_cfg.tau_discard, derive_seed(u, kStreamSelect, ki));
            ModelEval eval = evaluate_model(model, removed);
            curve.points.push_back({k_grid[ki], eval.acc, eval.wsr, seed});
        }
    }
    std::sort(curve.points.begin(), curve.points.end(),
              [](const CurvePoint& lhs, const CurvePoint& rhs) {
                  if (lhs.seed != rhs.seed) return lhs.seed < rhs.seed;
                  return lhs.k < rhs.k;
              });
    return curve;
}

} // namespace wmgame
