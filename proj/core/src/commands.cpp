#include "wmgame/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "json.hpp"

#include "wmgame/curve_io.hpp"

namespace wmgame {

namespace {

using nlohmann::json;

std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
    return std::filesystem::path(cfg.output_dir) / name;
}

json report_to_json(const FitRow& row) {
    json j{
        {"curve", row.label},
        {"alpha", row.report.alpha},
        {"alpha_stderr", row.report.alpha_stderr},
        {"a", row.report.a},
        {"eps_res", row.report.eps_res},
        {"r2", row.report.r2},
        {"k_star_theory", row.report.k_star_theory},
        {"k_best_empirical", row.report.k_best_empirical},
        {"wsr0_anchor", row.report.wsr0_anchor},
        {"wsr_at_max_k", row.wsr_at_max_k},
        {"n_points", row.report.n_points},
    };
    if (row.seed) j["seed"] = *row.seed;
    if (!row.report.notes.empty()) j["notes"] = row.report.notes;
    return j;
}

} // namespace

std::string solve_to_json(const SolveRecord& rec) {
    json j{
        {"L", rec.L},
        {"epsilon", rec.epsilon},
        {"eta", rec.outcome.eta},
        {"eps_res", rec.outcome.eps_res},
        {"a", rec.outcome.a},
        {"k_star", rec.outcome.k},
        {"f_at_k_star", rec.outcome.f_at_k},
        {"acc_post", rec.outcome.acc_post},
        {"wsr_post", rec.outcome.wsr_post},
        {"u_attacker", rec.outcome.u_attacker},
        {"u_defender", rec.outcome.u_defender},
        {"degenerate", rec.outcome.degenerate},
    };
    return j.dump(2) + "\n";
}

SolveRecord run_solve(const RunConfig& cfg) {
    AttackerStrategy best = best_response(cfg.defender, cfg.game, cfg.L_grid, cfg.eps_grid);
    SolveRecord rec;
    rec.L = best.L;
    rec.epsilon = best.epsilon;
    rec.outcome = best_response_outcome(cfg.defender, cfg.game, best.L, best.epsilon);
    atomic_write_file(out_path(cfg, "solve.json").string(), solve_to_json(rec));
    return rec;
}

PruneCurve run_simulate(const RunConfig& cfg) {
    PruneCurve curve = run_attack_curve(model_spec_from(cfg), attack_spec_from(cfg),
                                        cfg.k_grid, cfg.seeds);
    std::string hash = config_hash(cfg);
    curve.metadata["config_hash"] = hash;
    curve.metadata["scenario"] = cfg.scenario.name;
    write_curve_csv(curve, out_path(cfg, "curve.csv").string());

    json meta{
        {"config_hash", hash},
        {"scenario", cfg.scenario.name},
        {"seeds", cfg.seeds},
        {"n", cfg.simulator.n},
        {"config", json::parse(config_to_json(cfg))},
    };
    atomic_write_file(out_path(cfg, "curve.meta.json").string(), meta.dump(2) + "\n");
    return curve;
}

std::string fit_report_csv(const FitResult& result) {
    std::ostringstream out;
    out << "curve,alpha,alpha_stderr,a,eps_res,r2,k_star_theory,k_best_empirical,n_points\n";
    for (const FitRow& row : result.rows) {
        const FitReport& r = row.report;
        out << row.label << ',' << format_double(r.alpha) << ','
            << format_double(r.alpha_stderr) << ',' << format_double(r.a) << ','
            << format_double(r.eps_res) << ',' << format_double(r.r2) << ','
            << format_double(r.k_star_theory) << ',' << format_double(r.k_best_empirical)
            << ',' << r.n_points << "\n";
    }
    return out.str();
}

FitResult run_fit(const PruneCurve& curve, const RunConfig& cfg) {
    FitResult result;
    std::vector<std::int64_t> seeds = curve_seeds(curve);

    for (std::int64_t seed : seeds) {
        PruneCurve sub = curve_for_seed(curve, seed);
        FitRow row;
        row.label = "seed-" + std::to_string(seed);
        row.seed = seed;
        try {
            row.report = build_report(sub, cfg.game);
        } catch (const std::exception& e) {
            result.failures.push_back(row.label + ": " + e.what());
            continue;
        }
        double max_k = sub.points.front().k;
        for (const auto& p : sub.points)
            if (p.k >= max_k) { max_k = p.k; row.wsr_at_max_k = p.wsr; }
        result.rows.push_back(std::move(row));
    }

    // Aggregate mean and population std over the per-seed rows.
    if (!result.rows.empty()) {
        auto n = static_cast<double>(result.rows.size());
        auto mean_of = [&](auto field) {
            double sum = 0.0;
            for (const FitRow& row : result.rows) sum += field(row);
            return sum / n;
        };
        auto std_of = [&](auto field, double mean) {
            double sum = 0.0;
            for (const FitRow& row : result.rows) {
                double d = field(row) - mean;
                sum += d * d;
            }
            return std::sqrt(sum / n);
        };
        auto make_row = [&](const std::string& label, bool is_std) {
            FitRow row;
            row.label = label;
            auto stat = [&](auto field) {
                double mean = mean_of(field);
                return is_std ? std_of(field, mean) : mean;
            };
            row.report.alpha = stat([](const FitRow& r) { return r.report.alpha; });
            row.report.alpha_stderr =
                stat([](const FitRow& r) { return r.report.alpha_stderr; });
            row.report.a = stat([](const FitRow& r) { return r.report.a; });
            row.report.eps_res = stat([](const FitRow& r) { return r.report.eps_res; });
            row.report.r2 = stat([](const FitRow& r) { return r.report.r2; });
            row.report.k_star_theory =
                stat([](const FitRow& r) { return r.report.k_star_theory; });
            row.report.k_best_empirical =
                stat([](const FitRow& r) { return r.report.k_best_empirical; });
            row.report.wsr0_anchor =
                stat([](const FitRow& r) { return r.report.wsr0_anchor; });
            row.wsr_at_max_k = stat([](const FitRow& r) { return r.wsr_at_max_k; });
            row.report.n_points = static_cast<int>(result.rows.size());
            return row;
        };
        FitRow mean_row = make_row("mean", false);
        FitRow std_row = make_row("std", true);
        result.rows.push_back(std::move(mean_row));
        result.rows.push_back(std::move(std_row));
    }

    atomic_write_file(out_path(cfg, "fit_report.csv").string(), fit_report_csv(result));

    json j;
    json per_seed = json::array();
    json aggregate = json::object();
    for (const FitRow& row : result.rows) {
        if (row.seed)
            per_seed.push_back(report_to_json(row));
        else
            aggregate[row.label] = report_to_json(row);
    }
    j["per_seed"] = per_seed;
    j["aggregate"] = aggregate;
    j["failures"] = result.failures;
    j["config_hash"] = config_hash(cfg);
    atomic_write_file(out_path(cfg, "fit_report.json").string(), j.dump(2) + "\n");
    return result;
}

SweepResult run_sweep(const RunConfig& cfg) {
    if (!cfg.sweep) throw ValidationError("config.sweep: required for the sweep command");
    const SweepSpec& spec = *cfg.sweep;

    SweepResult result;
    result.keys = spec.keys;
    bool analytical = spec.mode == "analytical";
    result.metric_names =
        analytical
            ? std::vector<std::string>{"eta", "eps_res", "a", "k_star", "f_at_k_star",
                                       "u_attacker", "u_defender", "degenerate"}
            : std::vector<std::string>{"alpha", "a", "eps_res", "r2", "k_star_theory",
                                       "k_best_empirical"};

    std::vector<std::size_t> shape;
    for (const auto& list : spec.values) shape.push_back(list.size());
    std::size_t outer = shape[0];
    std::size_t inner = shape.size() == 2 ? shape[1] : 1;

    for (std::size_t i = 0; i < outer; ++i) {
        for (std::size_t j = 0; j < inner; ++j) {
            RunConfig cell = cfg;
            cell.sweep.reset();
            std::vector<double> values{spec.values[0][i]};
            set_config_value(cell, spec.keys[0], spec.values[0][i]);
            if (shape.size() == 2) {
                values.push_back(spec.values[1][j]);
                set_config_value(cell, spec.keys[1], spec.values[1][j]);
            }
            validate_config(cell);

            SweepRow row;
            row.values = values;
            if (analytical) {
                AttackerStrategy best =
                    best_response(cell.defender, cell.game, cell.L_grid, cell.eps_grid);
                AttackOutcome out =
                    best_response_outcome(cell.defender, cell.game, best.L, best.epsilon);
                row.metrics = {{"eta", out.eta},
                               {"eps_res", out.eps_res},
                               {"a", out.a},
                               {"k_star", out.k},
                               {"f_at_k_star", out.f_at_k},
                               {"u_attacker", out.u_attacker},
                               {"u_defender", out.u_defender},
                               {"degenerate", out.degenerate ? 1.0 : 0.0}};
            } else {
                PruneCurve curve = run_attack_curve(model_spec_from(cell),
                                                    attack_spec_from(cell), cell.k_grid,
                                                    cell.seeds);
                FitReport report = build_report(curve, cell.game);
                row.metrics = {{"alpha", report.alpha},
                               {"a", report.a},
                               {"eps_res", report.eps_res},
                               {"r2", report.r2},
                               {"k_star_theory", report.k_star_theory},
                               {"k_best_empirical", report.k_best_empirical}};
            }
            result.rows.push_back(std::move(row));
        }
    }

    std::ostringstream out;
    for (std::size_t i = 0; i < result.keys.size(); ++i)
        out << "param" << i + 1 << ",value" << i + 1 << ",";
    for (std::size_t i = 0; i < result.metric_names.size(); ++i) {
        out << result.metric_names[i];
        out << (i + 1 < result.metric_names.size() ? ',' : '\n');
    }
    for (const SweepRow& row : result.rows) {
        for (std::size_t i = 0; i < result.keys.size(); ++i)
            out << result.keys[i] << ',' << format_double(row.values[i]) << ',';
        for (std::size_t i = 0; i < row.metrics.size(); ++i) {
            out << format_double(row.metrics[i].second);
            out << (i + 1 < row.metrics.size() ? ',' : '\n');
        }
    }
    atomic_write_file(out_path(cfg, "sweep.csv").string(), out.str());
    return result;
}

} // namespace wmgame
