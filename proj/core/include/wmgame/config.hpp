#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wmgame/game.hpp"
#include "wmgame/prune_sim.hpp"

namespace wmgame {

// Partial overrides of the effectiveness model carried by a scenario.
struct EtaModelOverride {
    std::optional<double> eta0;
    std::optional<double> L_half;
    std::optional<double> delta_scale;
    std::optional<double> rho_scale;
    std::optional<double> eps_penalty;
    std::optional<double> eta_min;
};

// Attack-data-availability presets. "baseline" is a no-op. "few-shot"
// lowers the effective trigger complexity (attacker holds real samples),
// "data-free" raises it (surrogate inputs only). Explicit overrides in
// the config replace the built-in delta values.
struct ScenarioPreset {
    std::string name = "baseline"; // baseline | few-shot | data-free
    std::optional<double> delta_override;
    EtaModelOverride eta_overrides;
    std::optional<double> eps_res_override; // simulator eps_res_true
};

struct SimulatorConfig {
    int n = 10000;
    double alpha_true = 0.124;
    // kappa0 calibrated so the default desk-scale run's fitted decay
    // rate lands on the 1.25 multi-seed anchor.
    double kappa0 = 4.3;
    double noise0 = 1.0;
    double tau_discard = 0.5;
    double eps_res_true = 0.0;
    WeightMode weights = WeightMode::Uniform;
};

struct SweepSpec {
    std::string mode = "analytical"; // analytical | empirical
    std::vector<std::string> keys;   // one or two dotted config paths
    std::vector<std::vector<double>> values;
};

struct RunConfig {
    GameParams game;
    DefenderStrategy defender{0.008, 1.0, 0.01};
    std::vector<int> L_grid{50};
    std::vector<double> eps_grid{0.1};
    std::vector<double> k_grid{0.005, 0.01, 0.015, 0.02, 0.03, 0.05};
    SimulatorConfig simulator;
    std::vector<std::int64_t> seeds{0, 1, 2, 3, 4};
    ScenarioPreset scenario;
    std::string output_dir = "out";
    std::optional<SweepSpec> sweep;
};

// Parses and validates the documented JSON schema; unknown keys and range
// violations raise ValidationError naming the offending key path. An
// empty object yields the full defaults.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Folds the scenario preset into defender/eta-model/simulator fields.
// Baseline leaves the config untouched.
void apply_scenario(RunConfig& cfg);

// Canonical JSON rendering of the effective config (sorted keys); basis
// of the config hash recorded in output sidecars.
std::string config_to_json(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

void validate_config(const RunConfig& cfg);

// Assigns one sweepable dotted key (e.g. "defender.rho", "game.beta1",
// "attacker.L"). Returns false for unknown keys.
bool set_config_value(RunConfig& cfg, const std::string& key, double value);

// Derives the simulator inputs from an (already scenario-applied) config.
ModelSpec model_spec_from(const RunConfig& cfg);
AttackSpec attack_spec_from(const RunConfig& cfg);

} // namespace wmgame
