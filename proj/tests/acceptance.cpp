// Acceptance runner: executes every criterion end to end and prints one
// pass/fail line each. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "json.hpp"

#include "wmgame/commands.hpp"
#include "wmgame/config.hpp"
#include "wmgame/curve_fit.hpp"
#include "wmgame/curve_io.hpp"
#include "wmgame/game.hpp"
#include "wmgame/prune_sim.hpp"
#include "wmgame/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wmgame;

namespace {

const char* kData = WMGAME_DATA_DIR;
const char* kCli = WMGAME_CLI_PATH;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(kCli) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

double grid_argmax_k(double beta1, double wsr0, double a, double alpha, double c,
                     double k_max, double step) {
    auto steps = static_cast<long long>(std::llround(k_max / step));
    double best_k = 0.0;
    double best_f = 0.0;
    for (long long i = 1; i <= steps; ++i) {
        double k = static_cast<double>(i) * step;
        double f = attacker_objective(k, beta1, wsr0, a, alpha, c);
        if (f > best_f) {
            best_f = f;
            best_k = k;
        }
    }
    return best_k;
}

char buffer[512];

// --- criterion 1: fitting the shipped reference curve ----------------------
Outcome reference_curve_fit() {
    PruneCurve curve =
        read_curve_csv(std::string(kData) + "/resnet18_cifar10_curve.csv");
    WsrDecayFit fit = fit_wsr_decay(curve);
    std::snprintf(buffer, sizeof(buffer), "a=%.4f r2=%.4f eps_res=%.4f", fit.a, fit.r2,
                  fit.eps_res);
    return {fit.a >= 1.1 && fit.a <= 1.4 && fit.r2 >= 0.96, buffer};
}

// --- criterion 2: closed form vs grid argmax over 1000 draws ---------------
Outcome closed_form_vs_oracle() {
    Rng rng(424242);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        double beta1 = 0.1 + 19.9 * rng.uniform01();
        double wsr0 = 0.5 + 0.5 * rng.uniform01();
        double a = 0.1 + 9.9 * rng.uniform01();
        double alpha;
        double c;
        do {
            alpha = -0.2 + 0.4 * rng.uniform01();
            c = 0.01 + 1.99 * rng.uniform01();
        } while (!(alpha + c > 0.0));
        double closed = best_response_k(beta1, wsr0, a, alpha, c, 1.0);
        double gridded = grid_argmax_k(beta1, wsr0, a, alpha, c, 1.0, 1e-4);
        worst = std::max(worst, std::abs(closed - gridded));
        if (worst > 1e-4) break;
    }
    std::snprintf(buffer, sizeof(buffer), "max |k* - argmax| = %.3g", worst);
    return {worst <= 1e-4, buffer};
}

// --- criterion 3: concavity everywhere, exact zero in the degenerate case --
Outcome concavity_and_degeneracy() {
    Rng rng(777);
    for (int trial = 0; trial < 1000; ++trial) {
        double beta1 = 0.1 + 19.9 * rng.uniform01();
        double wsr0 = 0.5 + 0.5 * rng.uniform01();
        double a = 0.1 + 9.9 * rng.uniform01();
        double k = rng.uniform01();
        auto ds = objective_derivatives(k, beta1, wsr0, a, 0.05, 0.5);
        if (!(ds.second < 0.0)) return {false, "second derivative not negative"};

        // force the degenerate branch on half the draws
        double alpha = 0.05;
        double c = trial % 2 == 0 ? beta1 * wsr0 * a - alpha + 0.1 * rng.uniform01()
                                  : 0.01 + rng.uniform01();
        if (!(alpha + c > 0.0)) continue;
        double k_star = best_response_k(beta1, wsr0, a, alpha, c, 1.0);
        if (beta1 * wsr0 * a <= alpha + c && k_star != 0.0)
            return {false, "degenerate draw returned nonzero k*"};
    }
    // exact boundary of the degenerate condition
    double a_eq = (0.05 + 1.0) / (2.0 * 0.9);
    if (best_response_k(2.0, 0.9, a_eq, 0.05, 1.0, 1.0) != 0.0)
        return {false, "boundary case returned nonzero k*"};
    return {true, "f'' < 0 on 1000 draws; degenerate draws return exactly 0"};
}

// --- criterion 4: noisy fit round-trip --------------------------------------
Outcome fit_round_trip() {
    const std::vector<double> grid{0.0, 0.005, 0.01, 0.015, 0.02, 0.03, 0.05};
    const int kTrials = 100;
    std::vector<double> a_rel;
    std::vector<double> eps_abs;
    std::vector<double> alpha_rel;
    Rng rng(20240801);
    GameParams params;
    for (int trial = 0; trial < kTrials; ++trial) {
        PruneCurve curve;
        for (double k : grid) {
            double wsr = (0.9039 - 0.005) * std::exp(-1.25 * k) + 0.005;
            curve.points.push_back({k, 0.7947 - 0.124 * k, wsr + 0.002 * rng.normal(), 0});
        }
        FitReport report = build_report(curve, params);
        a_rel.push_back(std::abs(report.a - 1.25) / 1.25);
        eps_abs.push_back(std::abs(report.eps_res - 0.005));
        alpha_rel.push_back(std::abs(report.alpha - 0.124) / 0.124);
    }
    auto median = [](std::vector<double> xs) {
        std::nth_element(xs.begin(), xs.begin() + xs.size() / 2, xs.end());
        return xs[xs.size() / 2];
    };
    double ma = median(a_rel);
    double me = median(eps_abs);
    double mal = median(alpha_rel);
    std::snprintf(buffer, sizeof(buffer),
                  "median rel err: a=%.3f (<=0.10) eps_res=%.4f (<=0.005) alpha=%.3f (<=0.20)",
                  ma, me, mal);
    return {ma <= 0.10 && me <= 0.005 && mal <= 0.20, buffer};
}

// --- criterion 5: simulator stays under the analytical bound ----------------
Outcome simulator_theory_consistency() {
    RunConfig cfg = parse_config("{}");
    PruneCurve curve = run_attack_curve(model_spec_from(cfg), attack_spec_from(cfg),
                                        cfg.k_grid, cfg.seeds);

    double eta = eta_effectiveness(cfg.defender, cfg.L_grid[0], cfg.eps_grid[0],
                                   cfg.game.eta_model);
    double a_model = effective_decay_rate(cfg.defender, eta);
    double eps_model = residual_rate(cfg.defender.delta, cfg.game.res_model);
    double worst_excess = -1e9;
    for (const AveragedPoint& p : seed_averaged(curve)) {
        double bound = wsr_post_bound(cfg.game.wsr0, a_model, p.k, eps_model);
        worst_excess = std::max(worst_excess, p.wsr - bound);
    }

    double sum = 0.0;
    double sum2 = 0.0;
    int n = 0;
    for (std::int64_t seed : curve_seeds(curve)) {
        WsrDecayFit fit = fit_wsr_decay(curve_for_seed(curve, seed));
        sum += fit.a;
        sum2 += fit.a * fit.a;
        ++n;
    }
    double mean = sum / n;
    double cov = std::sqrt(std::max(0.0, sum2 / n - mean * mean)) / mean;
    std::snprintf(buffer, sizeof(buffer),
                  "max(wsr - bound)=%.4f (<=0.02); fitted a mean=%.3f cov=%.3f (<0.10)",
                  worst_excess, mean, cov);
    return {worst_excess <= 0.02 && cov < 0.10, buffer};
}

// --- criterion 6: monotonicity of the realized effectiveness ----------------
Outcome monotonicity_suite() {
    const int kSeeds = 100;
    const double k = 0.02;
    RunConfig cfg = parse_config("{}");

    auto mean_eta = [&](int L, double delta, double epsilon, int seeds,
                        double* se_out) {
        double sum = 0.0;
        double sum2 = 0.0;
        for (int seed = 0; seed < seeds; ++seed) {
            DefenderStrategy d = cfg.defender;
            d.delta = delta;
            SyntheticModel model =
                build_model(cfg.simulator.n, d, cfg.game.acc0, cfg.game.wsr0,
                            cfg.simulator.alpha_true, cfg.simulator.kappa0,
                            cfg.simulator.eps_res_true, static_cast<std::uint64_t>(seed));
            ImportanceScores scores = estimate_importance(
                model, L, delta, cfg.simulator.noise0,
                derive_seed(static_cast<std::uint64_t>(seed), kStreamEstimate, 0));
            std::vector<int> removed = prune_select(
                scores, k, epsilon, cfg.simulator.tau_discard,
                derive_seed(static_cast<std::uint64_t>(seed), kStreamSelect, 1));
            double eta = empirical_eta(removed, model);
            sum += eta;
            sum2 += eta * eta;
        }
        double mean = sum / seeds;
        if (se_out) {
            double var = std::max(0.0, sum2 / seeds - mean * mean);
            *se_out = std::sqrt(var / seeds);
        }
        return mean;
    };

    double l1 = mean_eta(1, 1.0, 0.1, kSeeds, nullptr);
    double l10 = mean_eta(10, 1.0, 0.1, kSeeds, nullptr);
    double l50 = mean_eta(50, 1.0, 0.1, kSeeds, nullptr);
    bool l_ok = l1 <= l10 && l10 <= l50;

    double d0 = mean_eta(50, 0.0, 0.1, kSeeds, nullptr);
    double d1 = mean_eta(50, 1.0, 0.1, kSeeds, nullptr);
    double d4 = mean_eta(50, 4.0, 0.1, kSeeds, nullptr);
    bool d_ok = d0 >= d1 && d1 >= d4;

    double se = 0.0;
    double random_eta = mean_eta(50, 1.0, 1.0, 1000, &se);
    bool eps_ok = std::abs(random_eta - cfg.defender.rho) <= 3.0 * se;

    std::snprintf(buffer, sizeof(buffer),
                  "eta(L)={%.3f,%.3f,%.3f} eta(delta)={%.3f,%.3f,%.3f} "
                  "eta(eps=1)=%.5f vs rho=%.3f (3se=%.5f)",
                  l1, l10, l50, d0, d1, d4, random_eta, cfg.defender.rho, 3.0 * se);
    return {l_ok && d_ok && eps_ok, buffer};
}

// --- criterion 7: rising-accuracy curves fit and solve ----------------------
Outcome negative_alpha_handling() {
    PruneCurve curve = read_curve_csv(std::string(kData) + "/layer4_unit0_out.csv");
    GameParams params;
    FitReport report = build_report(curve, params);
    bool fit_ok = report.alpha < 0.0 && std::abs(report.alpha + 0.04) < 1e-6 &&
                  std::abs(report.a - 1.2677) < 1e-3;
    double k_star = best_response_k(params.beta1, report.wsr0_anchor, report.a,
                                    report.alpha, params.c, params.k_max);
    std::snprintf(buffer, sizeof(buffer), "alpha=%.4f a=%.4f k*=%.4f", report.alpha,
                  report.a, k_star);
    return {fit_ok && k_star >= 0.0, buffer};
}

// --- criterion 8: byte-identical outputs across reruns ----------------------
Outcome determinism() {
    fs::path tmp = fs::temp_directory_path() /
                   ("wmgame_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    std::string a = (tmp / "a").string();
    std::string b = (tmp / "b").string();
    bool ok = run_cli("simulate --out " + a) == 0 && run_cli("simulate --out " + b) == 0;
    ok = ok && slurp(a + "/curve.csv") == slurp(b + "/curve.csv");
    ok = ok && !slurp(a + "/curve.csv").empty();
    ok = ok &&
         run_cli("fit --curve " + a + "/curve.csv --out " + a) == 0 &&
         run_cli("fit --curve " + b + "/curve.csv --out " + b) == 0;
    ok = ok && slurp(a + "/fit_report.csv") == slurp(b + "/fit_report.csv");
    ok = ok && slurp(a + "/fit_report.json") == slurp(b + "/fit_report.json");
    fs::remove_all(tmp);
    return {ok, ok ? "simulate and fit outputs byte-identical across reruns"
                   : "outputs differ between reruns"};
}

// --- criterion 9: table-shaped reports ---------------------------------------
Outcome table_shape() {
    fs::path tmp = fs::temp_directory_path() /
                   ("wmgame_acceptance9_" + std::to_string(::getpid()));
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    std::string out = (tmp / "out").string();

    // multi-seed report with per-seed rows and a mean/std aggregate
    bool ok = run_cli("simulate --out " + out) == 0;
    ok = ok && run_cli("fit --curve " + out + "/curve.csv --out " + out) == 0;
    double mean_a = 0.0;
    double std_a = 0.0;
    if (ok) {
        json report = json::parse(slurp(out + "/fit_report.json"));
        ok = report.at("per_seed").size() == 5;
        for (const json& row : report.at("per_seed"))
            ok = ok && row.contains("a") && row.contains("r2") &&
                 row.contains("wsr_at_max_k") && row.contains("seed");
        ok = ok && report.at("aggregate").contains("mean") &&
             report.at("aggregate").contains("std");
        if (ok) {
            mean_a = report.at("aggregate").at("mean").at("a").get<double>();
            std_a = report.at("aggregate").at("std").at("a").get<double>();
        }
    }

    // analytical regime sweep: a halves as rho doubles at fixed eta
    std::string cfg_path = (tmp / "sweep.json").string();
    {
        std::ofstream cfg(cfg_path);
        cfg << R"({"game":{"eta_model":{"rho_scale":1e30}},
                   "sweep":{"mode":"analytical","keys":["defender.rho"],
                            "values":[[0.004,0.008,0.016]]}})";
    }
    ok = ok && run_cli("sweep --config " + cfg_path + " --out " + out) == 0;
    std::vector<double> a_rows;
    std::vector<double> eta_rows;
    if (ok) {
        std::istringstream csv(slurp(out + "/sweep.csv"));
        std::string line;
        std::getline(csv, line); // header
        while (std::getline(csv, line)) {
            std::vector<std::string> fields;
            std::string field;
            std::istringstream ls(line);
            while (std::getline(ls, field, ',')) fields.push_back(field);
            eta_rows.push_back(std::stod(fields[2]));
            a_rows.push_back(std::stod(fields[4]));
        }
        ok = a_rows.size() == 3;
        ok = ok && eta_rows[0] == eta_rows[1] && eta_rows[1] == eta_rows[2];
        ok = ok && std::abs(a_rows[1] - a_rows[0] / 2.0) <= 1e-9 * a_rows[0];
        ok = ok && std::abs(a_rows[2] - a_rows[1] / 2.0) <= 1e-9 * a_rows[1];
    }
    fs::remove_all(tmp);
    std::snprintf(buffer, sizeof(buffer),
                  "per-seed rows + aggregate a=%.3f±%.3f; sweep a halves per rho doubling",
                  mean_a, std_a);
    return {ok, buffer};
}

struct Criterion {
    const char* name;
    double time_limit_s;
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"1 reference-curve-fit", 1.0, reference_curve_fit},
        {"2 closed-form-vs-oracle", 10.0, closed_form_vs_oracle},
        {"3 concavity-and-degeneracy", 10.0, concavity_and_degeneracy},
        {"4 fit-round-trip", 10.0, fit_round_trip},
        {"5 simulator-theory-consistency", 60.0, simulator_theory_consistency},
        {"6 monotonicity-suite", 120.0, monotonicity_suite},
        {"7 negative-alpha-handling", 10.0, negative_alpha_handling},
        {"8 determinism", 60.0, determinism},
        {"9 table-shape-reproduction", 60.0, table_shape},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        bool in_time = elapsed < criterion.time_limit_s;
        bool pass = outcome.pass && in_time;
        if (!pass) ++failures;
        std::printf("[%s] %s: %s (%.2fs%s)\n", pass ? "PASS" : "FAIL", criterion.name,
                    outcome.detail.c_str(), elapsed,
                    in_time ? "" : " — over time limit");
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all %zu criteria passed\n", criteria.size());
    return failures == 0 ? 0 : 1;
}
