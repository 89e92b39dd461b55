#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "wmgame/config.hpp"
#include "wmgame/curve_io.hpp"
#include "wmgame/prune_sim.hpp"

using namespace wmgame;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("wmgame_io_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    out << contents;
}

} // namespace

TEST_CASE("curve CSV round trip is byte-identical") {
    TempDir tmp;
    ModelSpec spec;
    spec.n = 2000;
    AttackSpec attack;
    std::vector<std::int64_t> seeds{0, 1, 2, 3, 4};
    PruneCurve curve =
        run_attack_curve(spec, attack, {0.005, 0.01, 0.015, 0.02, 0.03, 0.05}, seeds);
    curve.metadata["name"] = "roundtrip";

    std::string first = tmp.file("a.csv");
    std::string second = tmp.file("b.csv");
    write_curve_csv(curve, first);
    PruneCurve reread = read_curve_csv(first);
    write_curve_csv(reread, second);
    CHECK(slurp(first) == slurp(second));
    REQUIRE(reread.points.size() == curve.points.size());
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        CHECK(reread.points[i].k == curve.points[i].k);
        CHECK(reread.points[i].acc == curve.points[i].acc);
        CHECK(reread.points[i].wsr == curve.points[i].wsr);
        CHECK(reread.points[i].seed == curve.points[i].seed);
    }
}

TEST_CASE("write sorts rows by (seed, k)") {
    TempDir tmp;
    PruneCurve curve;
    curve.points.push_back({0.05, 0.78, 0.84, 1});
    curve.points.push_back({0.0, 0.79, 0.9, 0});
    curve.points.push_back({0.0, 0.79, 0.9, 1});
    curve.points.push_back({0.05, 0.78, 0.85, 0});
    std::string path = tmp.file("sorted.csv");
    write_curve_csv(curve, path);
    PruneCurve reread = read_curve_csv(path);
    CHECK(reread.points[0].seed == 0);
    CHECK(reread.points[0].k == 0.0);
    CHECK(reread.points[1].seed == 0);
    CHECK(reread.points[1].k == 0.05);
    CHECK(reread.points[2].seed == 1);
    CHECK(reread.points[3].seed == 1);
}

TEST_CASE("percent-mode files are divided by 100 on read") {
    TempDir tmp;
    std::string path = tmp.file("percent.csv");
    spit(path, "# units=percent\nk,acc,wsr,seed\n0,79.47,90.39,0\n0.05,78.85,85.04,0\n");
    PruneCurve curve = read_curve_csv(path);
    CHECK(curve.points[0].wsr == doctest::Approx(0.9039).epsilon(1e-12));
    CHECK(curve.points[0].acc == doctest::Approx(0.7947).epsilon(1e-12));
    CHECK(curve.points[1].wsr == doctest::Approx(0.8504).epsilon(1e-12));
    CHECK(curve.metadata.at("units") == "fraction"); // normalized after conversion

    // the forced override converts files without the flag
    std::string bare = tmp.file("bare.csv");
    spit(bare, "k,acc,wsr,seed\n0,79.47,90.39,0\n");
    PruneCurve forced = read_curve_csv(bare, CurveUnits::Percent);
    CHECK(forced.points[0].acc == doctest::Approx(0.7947).epsilon(1e-12));
    // and a fraction override leaves percent metadata unapplied
    std::string flagged = tmp.file("flagged.csv");
    spit(flagged, "# units=percent\nk,acc,wsr,seed\n0,0.7947,0.9039,0\n");
    PruneCurve kept = read_curve_csv(flagged, CurveUnits::Fraction);
    CHECK(kept.points[0].acc == 0.7947);
}

TEST_CASE("malformed and out-of-range rows report their line numbers") {
    TempDir tmp;
    std::string path = tmp.file("bad.csv");
    spit(path, "k,acc,wsr,seed\n0,0.79,0.9,0\n0.02,0.79,abc,1\n");
    CHECK_THROWS_WITH(read_curve_csv(path), doctest::Contains("line 3"));

    spit(path, "k,acc,wsr,seed\n0,0.79,1.5,0\n");
    CHECK_THROWS_WITH(read_curve_csv(path), doctest::Contains("line 2"));

    spit(path, "k,acc,wsr,seed\n0,0.79,0.9\n");
    CHECK_THROWS_WITH(read_curve_csv(path), doctest::Contains("4 comma-separated fields"));

    spit(path, "wrong,header\n0,0.79,0.9,0\n");
    CHECK_THROWS_WITH(read_curve_csv(path), doctest::Contains("header"));

    CHECK_THROWS_AS(read_curve_csv(tmp.file("missing.csv")), ValidationError);
}

TEST_CASE("empty config object yields the documented defaults") {
    RunConfig cfg = parse_config("{}");
    CHECK(cfg.game.beta1 == 1.0);
    CHECK(cfg.game.beta2 == 0.1);
    CHECK(cfg.game.alpha == 0.124);
    CHECK(cfg.game.c == 1.08);
    CHECK(cfg.game.acc0 == 0.7947);
    CHECK(cfg.game.wsr0 == 0.9039);
    CHECK(cfg.game.k_max == 0.5);
    CHECK(cfg.defender.rho == 0.008);
    CHECK(cfg.defender.delta == 1.0);
    CHECK(cfg.defender.gamma == 0.01);
    CHECK(cfg.L_grid == std::vector<int>{50});
    CHECK(cfg.eps_grid == std::vector<double>{0.1});
    CHECK(cfg.k_grid == std::vector<double>{0.005, 0.01, 0.015, 0.02, 0.03, 0.05});
    CHECK(cfg.simulator.n == 10000);
    CHECK(cfg.simulator.alpha_true == 0.124);
    CHECK(cfg.simulator.kappa0 == 4.3);
    CHECK(cfg.simulator.noise0 == 1.0);
    CHECK(cfg.simulator.tau_discard == 0.5);
    CHECK(cfg.simulator.eps_res_true == 0.0);
    CHECK(cfg.seeds == std::vector<std::int64_t>{0, 1, 2, 3, 4});
    CHECK(cfg.scenario.name == "baseline");
    CHECK(cfg.output_dir == "out");
}

TEST_CASE("config validation names the offending key path") {
    CHECK_THROWS_WITH(parse_config(R"({"attacker":{"k_grid":[0.005,1.5]}})"),
                      doctest::Contains("k_grid[1]"));
    CHECK_THROWS_WITH(parse_config(R"({"seeds":[0,0]})"), doctest::Contains("distinct"));
    CHECK_THROWS_WITH(parse_config(R"({"game":{"beta1":0.05}})"),
                      doctest::Contains("config.game.beta1"));
    CHECK_THROWS_WITH(parse_config(R"({"game":{"unknown_knob":1}})"),
                      doctest::Contains("unknown_knob"));
    CHECK_THROWS_WITH(parse_config(R"({"scenario":{"name":"zero-shot"}})"),
                      doctest::Contains("scenario.name"));
    CHECK_THROWS_WITH(parse_config(R"({"simulator":{"weights":"spiky"}})"),
                      doctest::Contains("weights"));
    CHECK_THROWS_WITH(parse_config("{"), doctest::Contains("parse error"));
    CHECK_THROWS_WITH(parse_config(R"({"attacker":{"k_grid":[0.01,0.01]}})"),
                      doctest::Contains("ascending"));
    // k_grid must respect the solver ceiling
    CHECK_THROWS_WITH(parse_config(R"({"game":{"k_max":0.04}})"),
                      doctest::Contains("k_max"));
}

TEST_CASE("scenario presets move delta; baseline is a strict no-op") {
    RunConfig base = parse_config("{}");
    apply_scenario(base);
    CHECK(base.defender.delta == 1.0);
    CHECK(config_to_json(base) == config_to_json(parse_config("{}")));

    RunConfig few = parse_config(R"({"scenario":{"name":"few-shot"}})");
    apply_scenario(few);
    CHECK(few.defender.delta == 0.5);

    RunConfig free = parse_config(R"({"scenario":{"name":"data-free"}})");
    apply_scenario(free);
    CHECK(free.defender.delta == 2.0);

    RunConfig custom = parse_config(
        R"({"scenario":{"name":"data-free","delta_override":3.5,
            "eta_overrides":{"eta0":0.8},"eps_res_override":0.004}})");
    apply_scenario(custom);
    CHECK(custom.defender.delta == 3.5);
    CHECK(custom.game.eta_model.eta0 == 0.8);
    CHECK(custom.simulator.eps_res_true == 0.004);

    CHECK_THROWS_WITH(parse_config(R"({"scenario":{"name":"baseline","delta_override":2}})"),
                      doctest::Contains("baseline accepts no overrides"));
}

TEST_CASE("config hash is stable and sensitive") {
    RunConfig a = parse_config("{}");
    RunConfig b = parse_config("{}");
    CHECK(config_hash(a) == config_hash(b));
    RunConfig c = parse_config(R"({"game":{"beta1":2.0}})");
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("sweep specs validate keys and shapes") {
    RunConfig ok = parse_config(
        R"({"sweep":{"mode":"analytical","keys":["defender.rho"],"values":[[0.004,0.008]]}})");
    REQUIRE(ok.sweep.has_value());
    CHECK(ok.sweep->keys.size() == 1);

    CHECK_THROWS_WITH(
        parse_config(R"({"sweep":{"keys":["defender.mass"],"values":[[1.0]]}})"),
        doctest::Contains("unknown key 'defender.mass'"));
    CHECK_THROWS_WITH(parse_config(R"({"sweep":{"keys":["defender.rho"],"values":[[]]}})"),
                      doctest::Contains("non-empty"));
    CHECK_THROWS_WITH(parse_config(R"({"sweep":{"keys":["defender.rho"],"values":[]}})"),
                      doctest::Contains("one value list per key"));
    CHECK_THROWS_WITH(
        parse_config(
            R"({"sweep":{"mode":"guess","keys":["defender.rho"],"values":[[1.0]]}})"),
        doctest::Contains("mode"));
}

TEST_CASE("set_config_value reaches the sweepable dotted keys") {
    RunConfig cfg = parse_config("{}");
    CHECK(set_config_value(cfg, "defender.rho", 0.004));
    CHECK(cfg.defender.rho == 0.004);
    CHECK(set_config_value(cfg, "game.eta_model.rho_scale", 7.0));
    CHECK(cfg.game.eta_model.rho_scale == 7.0);
    CHECK(set_config_value(cfg, "attacker.L", 25.0));
    CHECK(cfg.L_grid == std::vector<int>{25});
    CHECK_FALSE(set_config_value(cfg, "defender.mass", 1.0));
}

TEST_CASE("atomic_write_file replaces content without leaving temp files") {
    TempDir tmp;
    std::string path = tmp.file("atomic.txt");
    atomic_write_file(path, "one");
    atomic_write_file(path, "two");
    CHECK(slurp(path) == "two");
    CHECK_FALSE(fs::exists(path + ".tmp"));
}
