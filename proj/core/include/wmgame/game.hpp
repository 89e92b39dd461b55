#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "wmgame/errors.hpp"

namespace wmgame {

// ---------------------------------------------------------------------------
// Analytical layer of the watermark-vs-pruning game: strategy and parameter
// types, the exponential suppression bound, the attacker objective and its
// closed-form maximizer. All functions here are pure and thread-safe.
// ---------------------------------------------------------------------------

// Defender configuration d = [rho, delta, gamma]: watermark-carrier
// sparsity, trigger complexity, watermark sample ratio (strength).
struct DefenderStrategy {
    double rho = 0.008;  // fraction of neurons carrying the watermark, (0, 1]
    double delta = 1.0;  // trigger complexity, >= 0, dimensionless
    double gamma = 0.01; // watermark sample ratio, (0, 1]
};

// Attacker configuration a = [k, L, epsilon]: pruning budget, estimation
// iterations, exploration factor.
struct AttackerStrategy {
    double k = 0.0;       // fraction of neurons removed, [0, 1]
    int L = 50;           // Monte Carlo estimation iterations, >= 1
    double epsilon = 0.1; // probability of a random (non-greedy) pick, [0, 1]
};

// Per-unit pruning effectiveness model eta(rho, delta; L, epsilon).
// Product of saturating/exponential attenuation factors with a floor; each
// factor carries exactly one monotonicity claim.
struct EtaModelParams {
    double eta0 = 1.0;        // saturation ceiling, (0, 1]
    double L_half = 10.0;     // iteration saturation scale, > 0
    double delta_scale = 2.0; // trigger-complexity attenuation scale, > 0
    double rho_scale = 1.0;   // sparsity attenuation scale, > 0
    double eps_penalty = 0.5; // exploration penalty weight, [0, 1]
    double eta_min = 0.01;    // floor, (0, eta0]
};

// Irreducible residual watermark rate eps_res(delta): saturating
// exponential so that eps_res(0) = 0 and eps_res <= eps_max.
struct ResModelParams {
    double eps_max = 0.01;  // asymptotic residual, [0, 1)
    double delta_res = 1.0; // complexity scale, > 0
};

// All scalar constants of the analytical model.
struct GameParams {
    double beta1 = 1.0;  // watermark-reliability weight, > beta2
    double beta2 = 0.1;  // accuracy weight, > 0
    double alpha = 0.124; // linear accuracy-loss slope (fraction per unit k); may be negative
    double c = 1.08;     // attacker per-unit pruning cost, > 0
    double acc0 = 0.7947; // clean accuracy before attack, [0, 1]
    double wsr0 = 0.9039; // watermark success rate before attack, [0, 1]
    EtaModelParams eta_model;
    ResModelParams res_model;
    // Defender embedding cost coefficients (c_rho, c_delta, c_gamma).
    std::array<double, 3> defender_cost_coeffs{0.0, 0.0, 0.0};
    double k_max = 0.5;  // solver clipping ceiling, (0, 1]
};

// Validation helpers. `where` prefixes the offending field in messages
// (e.g. "config.game"). Throw ValidationError on the first violation.
void validate(const DefenderStrategy& d, const std::string& where = "defender");
void validate(const AttackerStrategy& a, const std::string& where = "attacker");
void validate(const EtaModelParams& m, const std::string& where = "eta_model");
void validate(const ResModelParams& r, const std::string& where = "res_model");
void validate(const GameParams& p, const std::string& where = "game");

// eta = clamp(eta0 * (1 - exp(-L/L_half)) * exp(-delta/delta_scale)
//             * exp(-rho/rho_scale) * (1 - eps_penalty*epsilon),
//             eta_min, 1).
// Strictly increasing in L, strictly decreasing in delta, rho and epsilon
// on the unclamped region.
double eta_effectiveness(const DefenderStrategy& d, int L, double epsilon,
                         const EtaModelParams& m);

// eps_res(delta) = eps_max * (1 - exp(-delta/delta_res)).
double residual_rate(double delta, const ResModelParams& r);

// a = (gamma / rho) * eta.
double effective_decay_rate(const DefenderStrategy& d, double eta);

// Upper bound on the post-attack watermark success rate:
// WSR0 * exp(-a*k) + eps_res.
double wsr_post_bound(double wsr0, double a, double k, double eps_res);

// Linear accuracy model clamp(acc0 - alpha*k, 0, 1). alpha may be
// negative (accuracy improves under pruning).
double acc_post_linear(double acc0, double alpha, double k);

// Linear pruning cost c*k.
double attacker_cost(double k, double c);

// U_D = beta1*wsr_post + beta2*acc_post - (c_rho*rho + c_delta*delta + c_gamma*gamma).
double defender_utility(const DefenderStrategy& d, double acc_post,
                        double wsr_post, const GameParams& p);

// U_A = acc_post - beta1*wsr_post - c*k.
double attacker_utility(double acc_post, double wsr_post, double k,
                        const GameParams& p);

// The attacker's k-dependent objective
// f(k) = beta1*WSR0*(1 - exp(-a*k)) - (alpha + c)*k.  f(0) = 0.
double attacker_objective(double k, double beta1, double wsr0, double a,
                          double alpha, double c);

struct ObjectiveDerivatives {
    double first;  // f'(k) = beta1*WSR0*a*exp(-a*k) - (alpha + c)
    double second; // f''(k) = -beta1*WSR0*a^2*exp(-a*k), always negative
};

ObjectiveDerivatives objective_derivatives(double k, double beta1, double wsr0,
                                           double a, double alpha, double c);

// Closed-form optimal pruning budget.
// Returns 0 when beta1*WSR0*a <= alpha + c (degenerate case, f'(0) <= 0),
// otherwise clamp((1/a)*ln(beta1*WSR0*a / (alpha+c)), 0, k_max).
// Concavity of f makes the clamped value the maximizer on [0, k_max].
// Throws ValidationError when alpha + c <= 0: the logarithm and the cost
// model require positive marginal cost.
double best_response_k(double beta1, double wsr0, double a, double alpha,
                       double c, double k_max);

// Full outcome of the attacker's best response for fixed estimation
// settings (L, epsilon): intermediates plus utilities at k*.
struct AttackOutcome {
    double eta = 0.0;
    double eps_res = 0.0;
    double a = 0.0;
    double k = 0.0;        // optimal budget
    double f_at_k = 0.0;   // objective value at k
    double acc_post = 0.0;
    double wsr_post = 0.0; // from the bound
    double u_attacker = 0.0;
    double u_defender = 0.0;
    bool degenerate = false; // beta1*WSR0*a <= alpha + c
};

AttackOutcome best_response_outcome(const DefenderStrategy& d,
                                    const GameParams& p, int L, double epsilon);

// Grid search over (L, epsilon) cells: each cell solves for k* and the
// triple maximizing U_A wins. Ties break lexicographically by
// (L, epsilon, k) ascending. Grids must be non-empty.
AttackerStrategy best_response(const DefenderStrategy& d0, const GameParams& p,
                               std::span<const int> L_grid,
                               std::span<const double> eps_grid);

} // namespace wmgame
