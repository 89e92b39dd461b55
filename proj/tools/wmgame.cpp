#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wmgame/commands.hpp"
#include "wmgame/curve_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

void print_usage(std::ostream& out) {
    out << "Usage: wmgame <solve|simulate|fit|sweep> [options]\n"
        << "Options:\n"
        << "  --config <path>       JSON config file (defaults used when omitted)\n"
        << "  --out <dir>           Output directory (default: from config, 'out')\n"
        << "  --curve <path>        Input curve CSV (fit only)\n"
        << "  --scenario <name>     baseline | few-shot | data-free\n"
        << "  --seeds <csv-ints>    Override config seeds, e.g. 0,1,2\n"
        << "  --units <u>           percent | fraction: units of --curve values\n"
        << "  --help                Show this message\n"
        << "Exit codes: 0 success, 2 validation error, 3 runtime/fit error.\n";
}

struct CliArgs {
    std::string command;
    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;
    std::optional<std::string> curve_path;
    std::optional<std::string> scenario;
    std::optional<std::string> seeds;
    std::optional<std::string> units;
};

CliArgs parse_args(int argc, char** argv) {
    CliArgs args;
    args.command = argv[1];
    for (int i = 2; i < argc; ++i) {
        std::string arg = argv[i];
        auto value = [&](std::optional<std::string>& slot) {
            if (i + 1 >= argc)
                throw wmgame::ValidationError("missing value for option " + arg);
            slot = argv[++i];
        };
        if (arg == "--config") value(args.config_path);
        else if (arg == "--out") value(args.out_dir);
        else if (arg == "--curve") value(args.curve_path);
        else if (arg == "--scenario") value(args.scenario);
        else if (arg == "--seeds") value(args.seeds);
        else if (arg == "--units") value(args.units);
        else throw wmgame::ValidationError("unknown option " + arg);
    }
    return args;
}

std::vector<std::int64_t> parse_seed_list(const std::string& text) {
    std::vector<std::int64_t> seeds;
    std::stringstream stream(text);
    std::string field;
    while (std::getline(stream, field, ',')) {
        try {
            std::size_t pos = 0;
            seeds.push_back(std::stoll(field, &pos));
            if (pos != field.size()) throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw wmgame::ValidationError("--seeds: malformed integer '" + field + "'");
        }
    }
    if (seeds.empty()) throw wmgame::ValidationError("--seeds: empty list");
    return seeds;
}

wmgame::RunConfig effective_config(const CliArgs& args) {
    wmgame::RunConfig cfg =
        args.config_path ? wmgame::load_config(*args.config_path) : wmgame::RunConfig{};
    if (args.out_dir) cfg.output_dir = *args.out_dir;
    if (args.seeds) cfg.seeds = parse_seed_list(*args.seeds);
    if (args.scenario) {
        // Switching presets from the command line drops any per-field
        // overrides tied to the config's preset.
        cfg.scenario = wmgame::ScenarioPreset{};
        cfg.scenario.name = *args.scenario;
    }
    wmgame::validate_config(cfg);
    wmgame::apply_scenario(cfg);
    return cfg;
}

std::optional<wmgame::CurveUnits> parse_units(const CliArgs& args) {
    if (!args.units) return std::nullopt;
    if (*args.units == "percent") return wmgame::CurveUnits::Percent;
    if (*args.units == "fraction") return wmgame::CurveUnits::Fraction;
    throw wmgame::ValidationError("--units: must be 'percent' or 'fraction'");
}

int run(const CliArgs& args) {
    std::optional<wmgame::CurveUnits> units = parse_units(args); // validate early
    if (args.command == "solve") {
        wmgame::RunConfig cfg = effective_config(args);
        wmgame::SolveRecord rec = wmgame::run_solve(cfg);
        std::cout << wmgame::solve_to_json(rec);
        return kExitOk;
    }
    if (args.command == "simulate") {
        wmgame::RunConfig cfg = effective_config(args);
        wmgame::PruneCurve curve = wmgame::run_simulate(cfg);
        std::cout << "wrote " << cfg.output_dir << "/curve.csv (" << curve.points.size()
                  << " rows, " << wmgame::curve_seeds(curve).size() << " seeds)\n";
        return kExitOk;
    }
    if (args.command == "fit") {
        wmgame::RunConfig cfg = effective_config(args);
        if (!args.curve_path)
            throw wmgame::ValidationError("fit: --curve <path> is required");
        wmgame::PruneCurve curve = wmgame::read_curve_csv(*args.curve_path, units);
        wmgame::FitResult result = wmgame::run_fit(curve, cfg);
        std::cout << wmgame::fit_report_csv(result);
        for (const std::string& failure : result.failures)
            std::cerr << "fit error: " << failure << "\n";
        return result.failures.empty() ? kExitOk : kExitRuntime;
    }
    if (args.command == "sweep") {
        wmgame::RunConfig cfg = effective_config(args);
        wmgame::SweepResult result = wmgame::run_sweep(cfg);
        std::cout << "wrote " << cfg.output_dir << "/sweep.csv (" << result.rows.size()
                  << " cells)\n";
        return kExitOk;
    }
    throw wmgame::ValidationError("unknown command '" + args.command + "'");
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        print_usage(std::cerr);
        return kExitValidation;
    }
    std::string first = argv[1];
    if (first == "--help" || first == "-h" || first == "help") {
        print_usage(std::cout);
        return kExitOk;
    }
    try {
        return run(parse_args(argc, argv));
    } catch (const wmgame::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const wmgame::FitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
