#include "wmgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace wmgame {

namespace {

void fail(const std::string& where, const std::string& field,
          const std::string& what) {
    throw ValidationError(where + "." + field + ": " + what);
}

void require_finite(double v, const std::string& where, const std::string& field) {
    if (!std::isfinite(v)) fail(where, field, "must be finite");
}

} // namespace

void validate(const DefenderStrategy& d, const std::string& where) {
    require_finite(d.rho, where, "rho");
    require_finite(d.delta, where, "delta");
    require_finite(d.gamma, where, "gamma");
    if (!(d.rho > 0.0 && d.rho <= 1.0)) fail(where, "rho", "must be in (0, 1]");
    if (!(d.gamma > 0.0 && d.gamma <= 1.0)) fail(where, "gamma", "must be in (0, 1]");
    if (!(d.delta >= 0.0)) fail(where, "delta", "must be >= 0");
}

void validate(const AttackerStrategy& a, const std::string& where) {
    require_finite(a.k, where, "k");
    require_finite(a.epsilon, where, "epsilon");
    if (!(a.k >= 0.0 && a.k <= 1.0)) fail(where, "k", "must be in [0, 1]");
    if (a.L < 1) fail(where, "L", "must be >= 1");
    if (!(a.epsilon >= 0.0 && a.epsilon <= 1.0)) fail(where, "epsilon", "must be in [0, 1]");
}

void validate(const EtaModelParams& m, const std::string& where) {
    require_finite(m.eta0, where, "eta0");
    require_finite(m.L_half, where, "L_half");
    require_finite(m.delta_scale, where, "delta_scale");
    require_finite(m.rho_scale, where, "rho_scale");
    require_finite(m.eps_penalty, where, "eps_penalty");
    require_finite(m.eta_min, where, "eta_min");
    if (!(m.eta0 > 0.0 && m.eta0 <= 1.0)) fail(where, "eta0", "must be in (0, 1]");
    if (!(m.L_half > 0.0)) fail(where, "L_half", "must be > 0");
    if (!(m.delta_scale > 0.0)) fail(where, "delta_scale", "must be > 0");
    if (!(m.rho_scale > 0.0)) fail(where, "rho_scale", "must be > 0");
    if (!(m.eps_penalty >= 0.0 && m.eps_penalty <= 1.0))
        fail(where, "eps_penalty", "must be in [0, 1]");
    if (!(m.eta_min > 0.0 && m.eta_min <= m.eta0))
        fail(where, "eta_min", "must be in (0, eta0]");
}

void validate(const ResModelParams& r, const std::string& where) {
    require_finite(r.eps_max, where, "eps_max");
    require_finite(r.delta_res, where, "delta_res");
    if (!(r.eps_max >= 0.0 && r.eps_max < 1.0)) fail(where, "eps_max", "must be in [0, 1)");
    if (!(r.delta_res > 0.0)) fail(where, "delta_res", "must be > 0");
}

void validate(const GameParams& p, const std::string& where) {
    require_finite(p.beta1, where, "beta1");
    require_finite(p.beta2, where, "beta2");
    require_finite(p.alpha, where, "alpha");
    require_finite(p.c, where, "c");
    if (!(p.beta2 > 0.0)) fail(where, "beta2", "must be > 0");
    if (!(p.beta1 > p.beta2)) fail(where, "beta1", "must be > beta2");
    if (!(p.c > 0.0)) fail(where, "c", "must be > 0");
    if (!(p.acc0 >= 0.0 && p.acc0 <= 1.0)) fail(where, "acc0", "must be in [0, 1]");
    if (!(p.wsr0 >= 0.0 && p.wsr0 <= 1.0)) fail(where, "wsr0", "must be in [0, 1]");
    if (!(p.k_max > 0.0 && p.k_max <= 1.0)) fail(where, "k_max", "must be in (0, 1]");
    for (std::size_t i = 0; i < p.defender_cost_coeffs.size(); ++i) {
        if (!(p.defender_cost_coeffs[i] >= 0.0))
            fail(where, "defender_cost[" + std::to_string(i) + "]", "must be >= 0");
    }
    validate(p.eta_model, where + ".eta_model");
    validate(p.res_model, where + ".res_model");
}

double eta_effectiveness(const DefenderStrategy& d, int L, double epsilon,
                         const EtaModelParams& m) {
    double raw = m.eta0 * (1.0 - std::exp(-static_cast<double>(L) / m.L_half)) *
                 std::exp(-d.delta / m.delta_scale) *
                 std::exp(-d.rho / m.rho_scale) * (1.0 - m.eps_penalty * epsilon);
    return std::clamp(raw, m.eta_min, 1.0);
}

double residual_rate(double delta, const ResModelParams& r) {
    return r.eps_max * (1.0 - std::exp(-delta / r.delta_res));
}

double effective_decay_rate(const DefenderStrategy& d, double eta) {
    return (d.gamma / d.rho) * eta;
}

double wsr_post_bound(double wsr0, double a, double k, double eps_res) {
    return wsr0 * std::exp(-a * k) + eps_res;
}

double acc_post_linear(double acc0, double alpha, double k) {
    return std::clamp(acc0 - alpha * k, 0.0, 1.0);
}

double attacker_cost(double k, double c) {
    return c * k;
}

double defender_utility(const DefenderStrategy& d, double acc_post,
                        double wsr_post, const GameParams& p) {
    double embed_cost = p.defender_cost_coeffs[0] * d.rho +
                        p.defender_cost_coeffs[1] * d.delta +
                        p.defender_cost_coeffs[2] * d.gamma;
    return p.beta1 * wsr_post + p.beta2 * acc_post - embed_cost;
}

double attacker_utility(double acc_post, double wsr_post, double k,
                        const GameParams& p) {
    return acc_post - p.beta1 * wsr_post - p.c * k;
}

double attacker_objective(double k, double beta1, double wsr0, double a,
                          double alpha, double c) {
    return beta1 * wsr0 * (1.0 - std::exp(-a * k)) - (alpha + c) * k;
}

ObjectiveDerivatives objective_derivatives(double k, double beta1, double wsr0,
                                           double a, double alpha, double c) {
    double decay = std::exp(-a * k);
    return {beta1 * wsr0 * a * decay - (alpha + c),
            -beta1 * wsr0 * a * a * decay};
}

double best_response_k(double beta1, double wsr0, double a, double alpha,
                       double c, double k_max) {
    if (!(alpha + c > 0.0))
        throw ValidationError("invalid-parameters: alpha + c must be > 0");
    double gain_slope = beta1 * wsr0 * a; // f'(0) + (alpha + c)
    if (gain_slope <= alpha + c) return 0.0;
    double k_star = std::log(gain_slope / (alpha + c)) / a;
    return std::clamp(k_star, 0.0, k_max);
}

AttackOutcome best_response_outcome(const DefenderStrategy& d,
                                    const GameParams& p, int L, double epsilon) {
    AttackOutcome out;
    out.eta = eta_effectiveness(d, L, epsilon, p.eta_model);
    out.eps_res = residual_rate(d.delta, p.res_model);
    out.a = effective_decay_rate(d, out.eta);
    out.k = best_response_k(p.beta1, p.wsr0, out.a, p.alpha, p.c, p.k_max);
    out.degenerate = p.beta1 * p.wsr0 * out.a <= p.alpha + p.c;
    out.f_at_k = attacker_objective(out.k, p.beta1, p.wsr0, out.a, p.alpha, p.c);
    out.acc_post = acc_post_linear(p.acc0, p.alpha, out.k);
    out.wsr_post = wsr_post_bound(p.wsr0, out.a, out.k, out.eps_res);
    out.u_attacker = attacker_utility(out.acc_post, out.wsr_post, out.k, p);
    out.u_defender = defender_utility(d, out.acc_post, out.wsr_post, p);
    return out;
}

AttackerStrategy best_response(const DefenderStrategy& d0, const GameParams& p,
                               std::span<const int> L_grid,
                               std::span<const double> eps_grid) {
    if (L_grid.empty()) throw ValidationError("best_response: L_grid is empty");
    if (eps_grid.empty()) throw ValidationError("best_response: eps_grid is empty");

    bool have_best = false;
    AttackerStrategy best;
    double best_u = 0.0;
    for (int L : L_grid) {
        for (double eps : eps_grid) {
            AttackOutcome cell = best_response_outcome(d0, p, L, eps);
            AttackerStrategy cand{cell.k, L, eps};
            bool better;
            if (!have_best) {
                better = true;
            } else if (cell.u_attacker != best_u) {
                better = cell.u_attacker > best_u;
            } else {
                // Deterministic tie-break: smallest L, then epsilon, then k.
                better = std::tie(cand.L, cand.epsilon, cand.k) <
                         std::tie(best.L, best.epsilon, best.k);
            }
            if (better) {
                have_best = true;
                best = cand;
                best_u = cell.u_attacker;
            }
        }
    }
    return best;
}

} // namespace wmgame
