#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wmgame/config.hpp"
#include "wmgame/curve_fit.hpp"

namespace wmgame {

// Batch command implementations behind the CLI. Each takes an effective
// (scenario-applied) config, writes its outputs atomically under
// cfg.output_dir, and returns the computed records for inspection.

// solve: best response over the (L_grid x eps_grid) cells.
struct SolveRecord {
    int L = 0;
    double epsilon = 0.0;
    AttackOutcome outcome;
};
SolveRecord run_solve(const RunConfig& cfg); // writes solve.json
std::string solve_to_json(const SolveRecord& rec);

// simulate: multi-seed attack curve; writes curve.csv plus a
// curve.meta.json sidecar carrying the config hash and scenario name.
PruneCurve run_simulate(const RunConfig& cfg);

// fit: per-seed reports plus a mean/std aggregate.
struct FitRow {
    std::string label; // "seed-<id>", "mean", "std"
    std::optional<std::int64_t> seed;
    FitReport report;
    double wsr_at_max_k = 0.0;
};
struct FitResult {
    std::vector<FitRow> rows;          // per-seed rows, then mean and std
    std::vector<std::string> failures; // per-curve error messages
};
// Writes fit_report.csv / fit_report.json. Per-curve failures are
// collected, remaining curves still fit; callers treat a non-empty
// failure list as an error.
FitResult run_fit(const PruneCurve& curve, const RunConfig& cfg);

// sweep: cross-product evaluation over one or two config keys.
struct SweepRow {
    std::vector<double> values;  // one per sweep key
    std::vector<std::pair<std::string, double>> metrics;
};
struct SweepResult {
    std::vector<std::string> keys;
    std::vector<std::string> metric_names;
    std::vector<SweepRow> rows;
};
SweepResult run_sweep(const RunConfig& cfg); // writes sweep.csv

std::string fit_report_csv(const FitResult& result);

} // namespace wmgame
