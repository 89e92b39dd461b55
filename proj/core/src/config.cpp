#include "wmgame/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace wmgame {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what);
}

void check_known_keys(const json& obj, const std::string& path,
                      std::initializer_list<const char*> known) {
    for (const auto& [key, value] : obj.items()) {
        bool found = false;
        for (const char* k : known)
            if (key == k) { found = true; break; }
        if (!found) fail(path + "." + key, "unknown key");
    }
}

double as_double(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected integer");
    return v.get<int>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected string");
    return v.get<std::string>();
}

void maybe(const json& obj, const char* key, const std::string& path, double& target) {
    if (obj.contains(key)) target = as_double(obj.at(key), path + "." + key);
}

void maybe_opt(const json& obj, const char* key, const std::string& path,
               std::optional<double>& target) {
    if (obj.contains(key)) target = as_double(obj.at(key), path + "." + key);
}

std::vector<double> as_double_list(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(as_double(v.at(i), path + "[" + std::to_string(i) + "]"));
    return out;
}

void parse_eta_model(const json& obj, const std::string& path, EtaModelParams& m) {
    check_known_keys(obj, path,
                     {"eta0", "L_half", "delta_scale", "rho_scale", "eps_penalty", "eta_min"});
    maybe(obj, "eta0", path, m.eta0);
    maybe(obj, "L_half", path, m.L_half);
    maybe(obj, "delta_scale", path, m.delta_scale);
    maybe(obj, "rho_scale", path, m.rho_scale);
    maybe(obj, "eps_penalty", path, m.eps_penalty);
    maybe(obj, "eta_min", path, m.eta_min);
}

void parse_game(const json& obj, const std::string& path, GameParams& p) {
    check_known_keys(obj, path,
                     {"beta1", "beta2", "alpha", "c", "acc0", "wsr0", "k_max",
                      "defender_cost", "eta_model", "res_model"});
    maybe(obj, "beta1", path, p.beta1);
    maybe(obj, "beta2", path, p.beta2);
    maybe(obj, "alpha", path, p.alpha);
    maybe(obj, "c", path, p.c);
    maybe(obj, "acc0", path, p.acc0);
    maybe(obj, "wsr0", path, p.wsr0);
    maybe(obj, "k_max", path, p.k_max);
    if (obj.contains("defender_cost")) {
        auto coeffs = as_double_list(obj.at("defender_cost"), path + ".defender_cost");
        if (coeffs.size() != 3)
            fail(path + ".defender_cost", "expected exactly 3 coefficients (rho, delta, gamma)");
        std::copy(coeffs.begin(), coeffs.end(), p.defender_cost_coeffs.begin());
    }
    if (obj.contains("eta_model"))
        parse_eta_model(obj.at("eta_model"), path + ".eta_model", p.eta_model);
    if (obj.contains("res_model")) {
        const json& r = obj.at("res_model");
        check_known_keys(r, path + ".res_model", {"eps_max", "delta_res"});
        maybe(r, "eps_max", path + ".res_model", p.res_model.eps_max);
        maybe(r, "delta_res", path + ".res_model", p.res_model.delta_res);
    }
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: JSON parse error: ") + e.what());
    }
    if (!root.is_object()) throw ValidationError("config: top level must be a JSON object");

    RunConfig cfg;
    const std::string base = "config";
    check_known_keys(root, base,
                     {"game", "defender", "attacker", "simulator", "seeds", "scenario",
                      "output", "sweep"});

    if (root.contains("game")) parse_game(root.at("game"), base + ".game", cfg.game);

    if (root.contains("defender")) {
        const json& d = root.at("defender");
        check_known_keys(d, base + ".defender", {"rho", "delta", "gamma"});
        maybe(d, "rho", base + ".defender", cfg.defender.rho);
        maybe(d, "delta", base + ".defender", cfg.defender.delta);
        maybe(d, "gamma", base + ".defender", cfg.defender.gamma);
    }

    if (root.contains("attacker")) {
        const json& a = root.at("attacker");
        check_known_keys(a, base + ".attacker", {"L_grid", "eps_grid", "k_grid"});
        if (a.contains("L_grid")) {
            const json& lg = a.at("L_grid");
            if (!lg.is_array()) fail(base + ".attacker.L_grid", "expected array");
            cfg.L_grid.clear();
            for (std::size_t i = 0; i < lg.size(); ++i)
                cfg.L_grid.push_back(
                    as_int(lg.at(i), base + ".attacker.L_grid[" + std::to_string(i) + "]"));
        }
        if (a.contains("eps_grid"))
            cfg.eps_grid = as_double_list(a.at("eps_grid"), base + ".attacker.eps_grid");
        if (a.contains("k_grid"))
            cfg.k_grid = as_double_list(a.at("k_grid"), base + ".attacker.k_grid");
    }

    if (root.contains("simulator")) {
        const json& s = root.at("simulator");
        check_known_keys(s, base + ".simulator",
                         {"n", "alpha_true", "kappa0", "noise0", "tau_discard",
                          "eps_res_true", "weights"});
        if (s.contains("n")) cfg.simulator.n = as_int(s.at("n"), base + ".simulator.n");
        maybe(s, "alpha_true", base + ".simulator", cfg.simulator.alpha_true);
        maybe(s, "kappa0", base + ".simulator", cfg.simulator.kappa0);
        maybe(s, "noise0", base + ".simulator", cfg.simulator.noise0);
        maybe(s, "tau_discard", base + ".simulator", cfg.simulator.tau_discard);
        maybe(s, "eps_res_true", base + ".simulator", cfg.simulator.eps_res_true);
        if (s.contains("weights")) {
            std::string mode = as_string(s.at("weights"), base + ".simulator.weights");
            if (mode == "uniform") cfg.simulator.weights = WeightMode::Uniform;
            else if (mode == "exponential") cfg.simulator.weights = WeightMode::Exponential;
            else fail(base + ".simulator.weights", "must be 'uniform' or 'exponential'");
        }
    }

    if (root.contains("seeds")) {
        const json& seeds = root.at("seeds");
        if (!seeds.is_array()) fail(base + ".seeds", "expected array");
        cfg.seeds.clear();
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            const json& v = seeds.at(i);
            std::string path = base + ".seeds[" + std::to_string(i) + "]";
            if (!v.is_number_integer()) fail(path, "expected integer");
            cfg.seeds.push_back(v.get<std::int64_t>());
        }
    }

    if (root.contains("scenario")) {
        const json& s = root.at("scenario");
        check_known_keys(s, base + ".scenario",
                         {"name", "delta_override", "eta_overrides", "eps_res_override"});
        if (s.contains("name"))
            cfg.scenario.name = as_string(s.at("name"), base + ".scenario.name");
        maybe_opt(s, "delta_override", base + ".scenario", cfg.scenario.delta_override);
        maybe_opt(s, "eps_res_override", base + ".scenario", cfg.scenario.eps_res_override);
        if (s.contains("eta_overrides")) {
            const json& e = s.at("eta_overrides");
            std::string path = base + ".scenario.eta_overrides";
            check_known_keys(e, path,
                             {"eta0", "L_half", "delta_scale", "rho_scale", "eps_penalty",
                              "eta_min"});
            maybe_opt(e, "eta0", path, cfg.scenario.eta_overrides.eta0);
            maybe_opt(e, "L_half", path, cfg.scenario.eta_overrides.L_half);
            maybe_opt(e, "delta_scale", path, cfg.scenario.eta_overrides.delta_scale);
            maybe_opt(e, "rho_scale", path, cfg.scenario.eta_overrides.rho_scale);
            maybe_opt(e, "eps_penalty", path, cfg.scenario.eta_overrides.eps_penalty);
            maybe_opt(e, "eta_min", path, cfg.scenario.eta_overrides.eta_min);
        }
    }

    if (root.contains("output")) {
        const json& o = root.at("output");
        check_known_keys(o, base + ".output", {"dir"});
        if (o.contains("dir")) cfg.output_dir = as_string(o.at("dir"), base + ".output.dir");
    }

    if (root.contains("sweep")) {
        const json& s = root.at("sweep");
        check_known_keys(s, base + ".sweep", {"mode", "keys", "values"});
        SweepSpec spec;
        if (s.contains("mode")) spec.mode = as_string(s.at("mode"), base + ".sweep.mode");
        if (!s.contains("keys")) fail(base + ".sweep.keys", "required");
        if (!s.contains("values")) fail(base + ".sweep.values", "required");
        const json& keys = s.at("keys");
        if (!keys.is_array()) fail(base + ".sweep.keys", "expected array");
        for (std::size_t i = 0; i < keys.size(); ++i)
            spec.keys.push_back(
                as_string(keys.at(i), base + ".sweep.keys[" + std::to_string(i) + "]"));
        const json& values = s.at("values");
        if (!values.is_array()) fail(base + ".sweep.values", "expected array of arrays");
        for (std::size_t i = 0; i < values.size(); ++i)
            spec.values.push_back(
                as_double_list(values.at(i), base + ".sweep.values[" + std::to_string(i) + "]"));
        cfg.sweep = std::move(spec);
    }

    validate_config(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

const std::set<std::string>& sweepable_keys() {
    static const std::set<std::string> keys = {
        "defender.rho", "defender.delta", "defender.gamma",
        "game.beta1", "game.beta2", "game.alpha", "game.c", "game.acc0", "game.wsr0",
        "game.k_max",
        "game.eta_model.eta0", "game.eta_model.L_half", "game.eta_model.delta_scale",
        "game.eta_model.rho_scale", "game.eta_model.eps_penalty", "game.eta_model.eta_min",
        "game.res_model.eps_max", "game.res_model.delta_res",
        "simulator.alpha_true", "simulator.kappa0", "simulator.noise0",
        "simulator.tau_discard", "simulator.eps_res_true",
        "attacker.L", "attacker.epsilon",
    };
    return keys;
}

} // namespace

void validate_config(const RunConfig& cfg) {
    validate(cfg.game, "config.game");
    validate(cfg.defender, "config.defender");

    if (cfg.L_grid.empty()) throw ValidationError("config.attacker.L_grid: must be non-empty");
    for (std::size_t i = 0; i < cfg.L_grid.size(); ++i)
        if (cfg.L_grid[i] < 1)
            throw ValidationError("config.attacker.L_grid[" + std::to_string(i) +
                                  "]: must be >= 1");
    if (cfg.eps_grid.empty()) throw ValidationError("config.attacker.eps_grid: must be non-empty");
    for (std::size_t i = 0; i < cfg.eps_grid.size(); ++i)
        if (!(cfg.eps_grid[i] >= 0.0 && cfg.eps_grid[i] <= 1.0))
            throw ValidationError("config.attacker.eps_grid[" + std::to_string(i) +
                                  "]: must be in [0, 1]");
    if (cfg.k_grid.empty()) throw ValidationError("config.attacker.k_grid: must be non-empty");
    for (std::size_t i = 0; i < cfg.k_grid.size(); ++i) {
        if (!(cfg.k_grid[i] >= 0.0 && cfg.k_grid[i] <= cfg.game.k_max))
            throw ValidationError("config.attacker.k_grid[" + std::to_string(i) +
                                  "]: must be within [0, k_max]");
        if (i > 0 && !(cfg.k_grid[i] > cfg.k_grid[i - 1]))
            throw ValidationError("config.attacker.k_grid[" + std::to_string(i) +
                                  "]: must be sorted strictly ascending");
    }

    if (cfg.simulator.n < 10) throw ValidationError("config.simulator.n: must be >= 10");
    if (!(cfg.simulator.alpha_true >= 0.0))
        throw ValidationError("config.simulator.alpha_true: must be >= 0");
    if (!(cfg.simulator.kappa0 > 0.0))
        throw ValidationError("config.simulator.kappa0: must be > 0");
    if (!(cfg.simulator.noise0 >= 0.0))
        throw ValidationError("config.simulator.noise0: must be >= 0");
    if (!(cfg.simulator.eps_res_true >= 0.0 && cfg.simulator.eps_res_true <= cfg.game.wsr0))
        throw ValidationError("config.simulator.eps_res_true: must be in [0, wsr0]");

    if (cfg.seeds.empty()) throw ValidationError("config.seeds: must be non-empty");
    std::set<std::int64_t> unique_seeds(cfg.seeds.begin(), cfg.seeds.end());
    if (unique_seeds.size() != cfg.seeds.size())
        throw ValidationError("config.seeds: must be distinct");

    const std::string& name = cfg.scenario.name;
    if (name != "baseline" && name != "few-shot" && name != "data-free")
        throw ValidationError(
            "config.scenario.name: must be one of baseline, few-shot, data-free");
    if (name == "baseline") {
        bool has_override = cfg.scenario.delta_override.has_value() ||
                            cfg.scenario.eps_res_override.has_value() ||
                            cfg.scenario.eta_overrides.eta0.has_value() ||
                            cfg.scenario.eta_overrides.L_half.has_value() ||
                            cfg.scenario.eta_overrides.delta_scale.has_value() ||
                            cfg.scenario.eta_overrides.rho_scale.has_value() ||
                            cfg.scenario.eta_overrides.eps_penalty.has_value() ||
                            cfg.scenario.eta_overrides.eta_min.has_value();
        if (has_override)
            throw ValidationError("config.scenario: baseline accepts no overrides");
    }

    if (cfg.sweep) {
        const SweepSpec& s = *cfg.sweep;
        if (s.mode != "analytical" && s.mode != "empirical")
            throw ValidationError("config.sweep.mode: must be 'analytical' or 'empirical'");
        if (s.keys.empty() || s.keys.size() > 2)
            throw ValidationError("config.sweep.keys: must name one or two config keys");
        for (std::size_t i = 0; i < s.keys.size(); ++i)
            if (sweepable_keys().count(s.keys[i]) == 0)
                throw ValidationError("config.sweep.keys[" + std::to_string(i) +
                                      "]: unknown key '" + s.keys[i] + "'");
        if (s.values.size() != s.keys.size())
            throw ValidationError("config.sweep.values: must provide one value list per key");
        for (std::size_t i = 0; i < s.values.size(); ++i)
            if (s.values[i].empty())
                throw ValidationError("config.sweep.values[" + std::to_string(i) +
                                      "]: must be non-empty");
    }
}

bool set_config_value(RunConfig& cfg, const std::string& key, double value) {
    if (key == "defender.rho") cfg.defender.rho = value;
    else if (key == "defender.delta") cfg.defender.delta = value;
    else if (key == "defender.gamma") cfg.defender.gamma = value;
    else if (key == "game.beta1") cfg.game.beta1 = value;
    else if (key == "game.beta2") cfg.game.beta2 = value;
    else if (key == "game.alpha") cfg.game.alpha = value;
    else if (key == "game.c") cfg.game.c = value;
    else if (key == "game.acc0") cfg.game.acc0 = value;
    else if (key == "game.wsr0") cfg.game.wsr0 = value;
    else if (key == "game.k_max") cfg.game.k_max = value;
    else if (key == "game.eta_model.eta0") cfg.game.eta_model.eta0 = value;
    else if (key == "game.eta_model.L_half") cfg.game.eta_model.L_half = value;
    else if (key == "game.eta_model.delta_scale") cfg.game.eta_model.delta_scale = value;
    else if (key == "game.eta_model.rho_scale") cfg.game.eta_model.rho_scale = value;
    else if (key == "game.eta_model.eps_penalty") cfg.game.eta_model.eps_penalty = value;
    else if (key == "game.eta_model.eta_min") cfg.game.eta_model.eta_min = value;
    else if (key == "game.res_model.eps_max") cfg.game.res_model.eps_max = value;
    else if (key == "game.res_model.delta_res") cfg.game.res_model.delta_res = value;
    else if (key == "simulator.alpha_true") cfg.simulator.alpha_true = value;
    else if (key == "simulator.kappa0") cfg.simulator.kappa0 = value;
    else if (key == "simulator.noise0") cfg.simulator.noise0 = value;
    else if (key == "simulator.tau_discard") cfg.simulator.tau_discard = value;
    else if (key == "simulator.eps_res_true") cfg.simulator.eps_res_true = value;
    else if (key == "attacker.L") cfg.L_grid = {static_cast<int>(value)};
    else if (key == "attacker.epsilon") cfg.eps_grid = {value};
    else return false;
    return true;
}

void apply_scenario(RunConfig& cfg) {
    ScenarioPreset& s = cfg.scenario;
    if (s.name == "baseline") return;

    double builtin_delta = s.name == "few-shot" ? 0.5 : 2.0;
    cfg.defender.delta = s.delta_override.value_or(builtin_delta);

    EtaModelParams& m = cfg.game.eta_model;
    const EtaModelOverride& o = s.eta_overrides;
    if (o.eta0) m.eta0 = *o.eta0;
    if (o.L_half) m.L_half = *o.L_half;
    if (o.delta_scale) m.delta_scale = *o.delta_scale;
    if (o.rho_scale) m.rho_scale = *o.rho_scale;
    if (o.eps_penalty) m.eps_penalty = *o.eps_penalty;
    if (o.eta_min) m.eta_min = *o.eta_min;

    if (s.eps_res_override) cfg.simulator.eps_res_true = *s.eps_res_override;

    validate_config(cfg);
}

std::string config_to_json(const RunConfig& cfg) {
    json root;
    root["game"] = {
        {"beta1", cfg.game.beta1},
        {"beta2", cfg.game.beta2},
        {"alpha", cfg.game.alpha},
        {"c", cfg.game.c},
        {"acc0", cfg.game.acc0},
        {"wsr0", cfg.game.wsr0},
        {"k_max", cfg.game.k_max},
        {"defender_cost", cfg.game.defender_cost_coeffs},
        {"eta_model",
         {{"eta0", cfg.game.eta_model.eta0},
          {"L_half", cfg.game.eta_model.L_half},
          {"delta_scale", cfg.game.eta_model.delta_scale},
          {"rho_scale", cfg.game.eta_model.rho_scale},
          {"eps_penalty", cfg.game.eta_model.eps_penalty},
          {"eta_min", cfg.game.eta_model.eta_min}}},
        {"res_model",
         {{"eps_max", cfg.game.res_model.eps_max},
          {"delta_res", cfg.game.res_model.delta_res}}},
    };
    root["defender"] = {
        {"rho", cfg.defender.rho},
        {"delta", cfg.defender.delta},
        {"gamma", cfg.defender.gamma},
    };
    root["attacker"] = {
        {"L_grid", cfg.L_grid},
        {"eps_grid", cfg.eps_grid},
        {"k_grid", cfg.k_grid},
    };
    root["simulator"] = {
        {"n", cfg.simulator.n},
        {"alpha_true", cfg.simulator.alpha_true},
        {"kappa0", cfg.simulator.kappa0},
        {"noise0", cfg.simulator.noise0},
        {"tau_discard", cfg.simulator.tau_discard},
        {"eps_res_true", cfg.simulator.eps_res_true},
        {"weights", cfg.simulator.weights == WeightMode::Uniform ? "uniform" : "exponential"},
    };
    root["seeds"] = cfg.seeds;
    root["scenario"] = {{"name", cfg.scenario.name}};
    // Output location is invocation plumbing, not an input: keeping it out
    // makes the config hash (and thus every written byte) independent of
    // where results land.
    return root.dump(2);
}

std::string config_hash(const RunConfig& cfg) {
    // FNV-1a 64 over the canonical JSON text.
    std::string text = config_to_json(cfg);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ModelSpec model_spec_from(const RunConfig& cfg) {
    ModelSpec spec;
    spec.n = cfg.simulator.n;
    spec.defender = cfg.defender;
    spec.acc0 = cfg.game.acc0;
    spec.wsr0 = cfg.game.wsr0;
    spec.alpha_true = cfg.simulator.alpha_true;
    spec.kappa0 = cfg.simulator.kappa0;
    spec.eps_res_true = cfg.simulator.eps_res_true;
    spec.weights = cfg.simulator.weights;
    return spec;
}

AttackSpec attack_spec_from(const RunConfig& cfg) {
    AttackSpec spec;
    spec.L = cfg.L_grid.front();
    spec.epsilon = cfg.eps_grid.front();
    spec.noise0 = cfg.simulator.noise0;
    spec.tau_discard = cfg.simulator.tau_discard;
    return spec;
}

} // namespace wmgame
