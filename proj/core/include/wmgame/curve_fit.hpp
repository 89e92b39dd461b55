#pragma once

#include <map>
#include <span>
#include <string>

#include "wmgame/curve.hpp"
#include "wmgame/game.hpp"

namespace wmgame {

// ---------------------------------------------------------------------------
// Parameter estimation from measured (k, ACC, WSR) curves: the linear
// accuracy slope, the exponential WSR decay, the theoretical optimal
// budget from the fitted parameters, and the empirical best budget.
// Deterministic: grid scan plus golden-section refinement, no
// platform-dependent solvers.
// ---------------------------------------------------------------------------

struct AlphaFit {
    double alpha = 0.0;     // negated OLS slope: positive = accuracy loss
    double intercept = 0.0;
    double stderr_ = 0.0;   // standard error of the slope
};

struct WsrDecayFit {
    double a = 0.0;
    double eps_res = 0.0;
    double r2 = 1.0;
    // e.g. "eps_res_clamped" -> "1" when the closed-form offset was
    // truncated at 0.
    std::map<std::string, std::string> notes;
};

// Table-row report: one per curve.
struct FitReport {
    double alpha = 0.0;
    double alpha_stderr = 0.0;
    double a = 0.0;
    double eps_res = 0.0;
    double r2 = 1.0;
    double k_star_theory = 0.0;
    double k_best_empirical = 0.0;
    double wsr0_anchor = 0.0;
    int n_points = 0;
    std::map<std::string, std::string> notes;
};

// OLS of seed-averaged acc against k, restricted to k <= k_small_max.
// Requires >= 2 distinct k values in range; throws FitError
// ("insufficient-data") otherwise.
AlphaFit fit_alpha(const PruneCurve& curve, double k_small_max = 0.05);

// Fits W(k) = (W0 - eps_res)*exp(-a*k) + eps_res with W0 anchored at the
// measured k=0 mean. For each candidate a the offset eps_res has a
// closed-form least-squares value, clamped to [0, min(W0, eps_cap)]; a is
// found by a coarse grid over [0, a_max] followed by golden-section
// refinement. The refined result never has a larger SSE than the best
// grid point.
//
// eps_cap bounds the offset search: on short grids (a, eps_res) are close
// to collinear and an unconstrained offset lets the global least-squares
// minimum wander to drop-to-plateau shapes under per-mille noise. The
// default matches the residual model's ceiling; raise it for curves with
// genuinely large residual rates (build_report wires in
// res_model.eps_max).
//
// Throws FitError("missing-anchor") without a k=0 point and
// FitError("insufficient-data") with fewer than 3 distinct k values.
// All-identical wsr values return (a=0, eps_res=0, r2=1).
WsrDecayFit fit_wsr_decay(const PruneCurve& curve, double a_max = 50.0,
                          int grid_steps = 2000, double eps_cap = 0.01);

// 1 - SS_res/SS_tot. Throws FitError("shape-error") on length mismatch or
// fewer than 2 values, FitError("constant-observations") when SS_tot = 0.
double r_squared(std::span<const double> observed, std::span<const double> predicted);

// The measured k (seed-averaged per k) maximizing acc - beta1*wsr - c*k;
// ties break toward smaller k.
double empirical_k_best(const PruneCurve& curve, double beta1, double c);

// Composes fit_alpha, fit_wsr_decay, best_response_k (fitted a and alpha,
// configured beta1/c/k_max) and empirical_k_best into one report row.
FitReport build_report(const PruneCurve& curve, const GameParams& p,
                       double k_small_max = 0.05);

} // namespace wmgame
