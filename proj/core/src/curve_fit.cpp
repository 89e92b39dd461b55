#include "wmgame/curve_fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace wmgame {

namespace {

// Profile SSE of the anchored decay model at a fixed a: the offset
// eps_res is quadratic in the residuals, so its optimum is closed-form.
struct ProfilePoint {
    double sse = 0.0;
    double eps_res = 0.0;
    bool clamped_low = false;
    bool clamped_high = false;
};

ProfilePoint profile_at(double a, double w0, double eps_cap,
                        const std::vector<AveragedPoint>& pts) {
    ProfilePoint out;
    double num = 0.0;
    double den = 0.0;
    for (const auto& p : pts) {
        double x = std::exp(-a * p.k);
        num += (p.wsr - w0 * x) * (1.0 - x);
        den += (1.0 - x) * (1.0 - x);
    }
    double e = den > 0.0 ? num / den : 0.0;
    if (e < 0.0) {
        e = 0.0;
        out.clamped_low = true;
    }
    double cap = std::min(w0, eps_cap);
    if (e > cap) {
        e = cap;
        out.clamped_high = true;
    }
    out.eps_res = e;
    for (const auto& p : pts) {
        double pred = (w0 - e) * std::exp(-a * p.k) + e;
        double r = p.wsr - pred;
        out.sse += r * r;
    }
    return out;
}

} // namespace

AlphaFit fit_alpha(const PruneCurve& curve, double k_small_max) {
    std::vector<AveragedPoint> pts;
    for (const auto& p : seed_averaged(curve))
        if (p.k <= k_small_max) pts.push_back(p);
    if (pts.size() < 2)
        throw FitError("insufficient-data: fit_alpha needs >= 2 distinct k values with k <= " +
                       std::to_string(k_small_max));

    auto n = static_cast<double>(pts.size());
    double kbar = 0.0;
    double abar = 0.0;
    for (const auto& p : pts) {
        kbar += p.k;
        abar += p.acc;
    }
    kbar /= n;
    abar /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& p : pts) {
        sxx += (p.k - kbar) * (p.k - kbar);
        sxy += (p.k - kbar) * (p.acc - abar);
    }
    double slope = sxy / sxx;

    AlphaFit fit;
    fit.alpha = -slope;
    fit.intercept = abar - slope * kbar;
    double dof = n - 2.0;
    if (dof > 0.0) {
        double sse = 0.0;
        for (const auto& p : pts) {
            double r = p.acc - (fit.intercept + slope * p.k);
            sse += r * r;
        }
        fit.stderr_ = std::sqrt(std::max(0.0, sse / dof) / sxx);
    }
    return fit;
}

WsrDecayFit fit_wsr_decay(const PruneCurve& curve, double a_max, int grid_steps,
                          double eps_cap) {
    if (!(a_max > 0.0) || grid_steps < 1 || !(eps_cap >= 0.0))
        throw FitError("invalid search parameters for fit_wsr_decay");
    std::vector<AveragedPoint> pts = seed_averaged(curve);
    if (pts.empty() || pts.front().k != 0.0)
        throw FitError("missing-anchor: fit_wsr_decay requires a k = 0 point");
    if (pts.size() < 3)
        throw FitError("insufficient-data: fit_wsr_decay needs >= 3 distinct k values");

    WsrDecayFit fit;
    bool all_same = std::all_of(pts.begin(), pts.end(), [&](const AveragedPoint& p) {
        return p.wsr == pts.front().wsr;
    });
    if (all_same) return fit; // constant curve: a = 0, eps_res = 0, r2 = 1

    double w0 = pts.front().wsr;

    // Coarse scan; ties resolve toward smaller a.
    double step = a_max / grid_steps;
    double best_a = 0.0;
    ProfilePoint best = profile_at(0.0, w0, eps_cap, pts);
    for (int i = 1; i <= grid_steps; ++i) {
        double a = i * step;
        ProfilePoint cand = profile_at(a, w0, eps_cap, pts);
        if (cand.sse < best.sse) {
            best = cand;
            best_a = a;
        }
    }

    // Golden-section refinement around the grid minimum.
    double lo = std::max(0.0, best_a - step);
    double hi = std::min(a_max, best_a + step);
    const double invphi = 0.6180339887498948482;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = profile_at(x1, w0, eps_cap, pts).sse;
    double f2 = profile_at(x2, w0, eps_cap, pts).sse;
    while (hi - lo > 1e-9 * std::max(1.0, hi)) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = profile_at(x1, w0, eps_cap, pts).sse;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = profile_at(x2, w0, eps_cap, pts).sse;
        }
    }
    double refined_a = 0.5 * (lo + hi);
    ProfilePoint refined = profile_at(refined_a, w0, eps_cap, pts);
    if (refined.sse < best.sse) {
        best = refined;
        best_a = refined_a;
    }

    fit.a = best_a;
    fit.eps_res = best.eps_res;
    if (best.clamped_low) fit.notes["eps_res_clamped"] = "1";
    if (best.clamped_high) fit.notes["eps_res_capped"] = "1";

    std::vector<double> observed;
    std::vector<double> predicted;
    observed.reserve(pts.size());
    predicted.reserve(pts.size());
    for (const auto& p : pts) {
        observed.push_back(p.wsr);
        predicted.push_back((w0 - best.eps_res) * std::exp(-best_a * p.k) + best.eps_res);
    }
    fit.r2 = r_squared(observed, predicted);
    return fit;
}

double r_squared(std::span<const double> observed, std::span<const double> predicted) {
    if (observed.size() != predicted.size())
        throw FitError("shape-error: observed and predicted lengths differ");
    if (observed.size() < 2)
        throw FitError("shape-error: r_squared needs >= 2 values");
    double mean = 0.0;
    for (double v : observed) mean += v;
    mean /= static_cast<double>(observed.size());
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        ss_tot += (observed[i] - mean) * (observed[i] - mean);
        ss_res += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
    }
    if (ss_tot == 0.0)
        throw FitError("constant-observations: r_squared undefined when all observed values match");
    return 1.0 - ss_res / ss_tot;
}

double empirical_k_best(const PruneCurve& curve, double beta1, double c) {
    std::vector<AveragedPoint> pts = seed_averaged(curve);
    if (pts.empty()) throw FitError("insufficient-data: empirical_k_best needs a non-empty curve");
    double best_k = pts.front().k;
    double best_score = pts.front().acc - beta1 * pts.front().wsr - c * pts.front().k;
    for (const auto& p : pts) {
        double score = p.acc - beta1 * p.wsr - c * p.k;
        if (score > best_score) { // strict: ties keep the smaller k
            best_score = score;
            best_k = p.k;
        }
    }
    return best_k;
}

FitReport build_report(const PruneCurve& curve, const GameParams& p,
                       double k_small_max) {
    AlphaFit alpha = fit_alpha(curve, k_small_max);
    WsrDecayFit decay = fit_wsr_decay(curve, 50.0, 2000, p.res_model.eps_max);
    std::vector<AveragedPoint> pts = seed_averaged(curve);

    FitReport report;
    report.alpha = alpha.alpha;
    report.alpha_stderr = alpha.stderr_;
    report.a = decay.a;
    report.eps_res = decay.eps_res;
    report.r2 = decay.r2;
    report.wsr0_anchor = pts.front().wsr;
    report.n_points = static_cast<int>(curve.points.size());
    report.notes = decay.notes;
    report.k_star_theory =
        decay.a > 0.0
            ? best_response_k(p.beta1, report.wsr0_anchor, decay.a, alpha.alpha, p.c, p.k_max)
            : 0.0;
    report.k_best_empirical = empirical_k_best(curve, p.beta1, p.c);
    return report;
}

} // namespace wmgame
