#include <doctest.h>

#include <string>

#include "tlao/config.hpp"
#include "tlao/errors.hpp"
#include "tlao/scenarios.hpp"

using namespace tlao;
using nlohmann::json;

TEST_CASE("defaults resolve") {
    const auto cfg = resolve_config(json::object());
    CHECK(cfg.scenario == Scenario::Stirap);
    CHECK(cfg.trap.depth == 100.0);
    CHECK(cfg.trajectory.lm.d_max == 9.0);
    CHECK(cfg.trajectory.t_delay == 120.0);
    CHECK(cfg.trajectory.ramp == RampShape::Cosine);
    CHECK(cfg.numerics_1d.grid.n == 1024);
    CHECK(cfg.numerics_2p.grid.n == 256);
    CHECK(cfg.numerics_2d.y.n == 2048);
    CHECK(cfg.target_u == 0.5);
    CHECK_FALSE(cfg.scan);
    CHECK(cfg.output.csv == "populations.csv");
}

TEST_CASE("user values overlay the defaults") {
    const auto cfg = resolve_config(json::parse(R"({
        "scenario": "cpt",
        "trajectory": {"d_min": 1.8, "mr": {"t_i": 12.0}, "ramp": "linear"},
        "numerics": {"n": 512, "dt": 0.02}
    })"));
    CHECK(cfg.scenario == Scenario::Cpt);
    CHECK(cfg.trajectory.lm.d_min == 1.8);
    CHECK(cfg.trajectory.mr.t_i == 12.0);
    CHECK(cfg.trajectory.lm.t_i == 0.0);
    CHECK(cfg.trajectory.ramp == RampShape::Linear);
    CHECK(cfg.numerics_1d.grid.n == 512);
    CHECK(cfg.numerics_1d.dt == 0.02);
    CHECK(cfg.document["trajectory"]["t_r"] == 300.0);
}

TEST_CASE("time scale dilates the trajectory") {
    const auto cfg = resolve_config(json::parse(R"({"trajectory": {"time_scale": 2.0}})"));
    CHECK(cfg.trajectory.lm.t_r == 600.0);
    CHECK(cfg.trajectory.t_delay == 240.0);
}

TEST_CASE("invalid documents are rejected") {
    CHECK_THROWS_AS(resolve_config(json::parse(R"({"trap": {"width": 1}})")), ConfigError);
    CHECK_THROWS_AS(resolve_config(json::parse(R"({"unknown": 1})")), ConfigError);
    CHECK_THROWS_AS(resolve_config(json::parse(R"({"trajectory": {"d_min": "small"}})")), ConfigError);
    CHECK_THROWS_AS(resolve_config(json::parse(R"({"trajectory": {"d_min": 12.0}})")), ConfigError);
    CHECK_THROWS_AS(resolve_config(json::parse(R"({"scenario": "teleport"})")), ConfigError);
    CHECK_THROWS_AS(resolve_config(json::parse(R"({"numerics": {"n": 1000}})")), ConfigError);
    CHECK_THROWS_AS(resolve_config(json::parse(R"({"trajectory": {"order": "sideways"}})")), ConfigError);
    CHECK_THROWS_AS(resolve_config(json::parse(R"({"scan": {"axis1": {"path": "trajectory.t_delay"}}})")),
                    ConfigError);
    CHECK_THROWS_AS(resolve_config(json::parse(R"({"scan": {"axis1": {"path": "trajectory.nope", "min": 0,
                                                  "max": 1, "count": 2}, "metric": "rho_R"}})")),
                    ConfigError);
    CHECK_THROWS_AS(resolve_config(json::array()), ConfigError);
}

TEST_CASE("grid invalid only for the scenario that uses it") {
    CHECK_NOTHROW(resolve_config(json::parse(R"({"scenario": "stirap", "numerics": {"y_n": 1000}})")));
    CHECK_THROWS_AS(resolve_config(json::parse(R"({"scenario": "waveguide", "numerics": {"y_n": 1000}})")),
                    ConfigError);
}

TEST_CASE("scan block") {
    const auto cfg = resolve_config(json::parse(R"({
        "scan": {"axis1": {"path": "trajectory.t_delay", "min": 0, "max": 300, "count": 4},
                 "axis2": {"path": "trajectory.d_min", "min": 1.2, "max": 3.0, "count": 3},
                 "metric": "rho_R"}})"));
    REQUIRE(cfg.scan);
    CHECK(cfg.scan->cell_count() == 12);
    CHECK(cfg.scan->axis1.value(1) == doctest::Approx(100.0));
    CHECK(cfg.scan->axis2->values().back() == 3.0);
}

TEST_CASE("with_value") {
    const json doc = default_document();
    CHECK(with_value(doc, "trajectory.t_delay", 60.0)["trajectory"]["t_delay"] == 60.0);
    CHECK(with_value(doc, "numerics.dt", 0.5)["numerics"]["dt"] == 0.5);
    CHECK(with_value(doc, "trajectory.lm.d_min", 2.0)["trajectory"]["lm"]["d_min"] == 2.0);
    CHECK_THROWS_AS(with_value(doc, "trajectory.bogus", 1.0), ConfigError);
    CHECK_THROWS_AS(with_value(doc, "trajectory", 1.0), ConfigError);
    CHECK_THROWS_AS(with_value(doc, "trajectory.order", 1.0), ConfigError);
    CHECK_THROWS_AS(with_value(doc, "trajectory.t_delay.x", 1.0), ConfigError);
}

TEST_CASE("config hash") {
    const json a = default_document();
    CHECK(config_hash(a).size() == 16);
    CHECK(config_hash(a) == config_hash(default_document()));
    CHECK(config_hash(a) != config_hash(with_value(a, "trap.depth", 90.0)));
}

TEST_CASE("every preset resolves") {
    const auto names = list_presets(TLAO_PRESET_DIR);
    CHECK(names.size() >= 12);
    for (const auto& name : names) {
        CAPTURE(name);
        CHECK_NOTHROW(resolve_config(read_json_file(preset_path(name, TLAO_PRESET_DIR))));
    }
    CHECK_THROWS_AS(preset_path("no-such-preset", TLAO_PRESET_DIR), ConfigError);
}

TEST_CASE("scenario metrics") {
    auto cfg = resolve_config(json::parse(R"({"scenario": "eig", "numerics": {"n": 512}, "eig": {"samples": 3}})"));
    const auto out = run_scenario(cfg);
    for (const auto& m : scenario_metrics(Scenario::Eig)) CHECK(out.metrics.count(m) == 1);
    CHECK(out.metrics.at("E_0") == doctest::Approx(-99.5).epsilon(1e-3));
    CHECK_THROWS_AS(run_metric(cfg, "rho_R"), ConfigError);
}

namespace {
// Walks the defaults and the schema together; every default key must be declared
// and any schema default must equal the built-in one.
void compare_with_schema(const json& doc, const json& node, const json& defs, const std::string& at) {
    const json& props = node.at("properties");
    CHECK_MESSAGE(props.size() == doc.size(), at);
    for (const auto& [key, value] : doc.items()) {
        const std::string path = at.empty() ? key : at + "." + key;
        REQUIRE_MESSAGE(props.contains(key), path);
        json sub = props.at(key);
        if (sub.contains("$ref")) {
            const auto ref = sub["$ref"].get<std::string>();
            sub = defs.at(ref.substr(ref.rfind('/') + 1));
        }
        if (value.is_object()) {
            compare_with_schema(value, sub, defs, path);
        } else if (props.at(key).contains("default")) {
            CHECK_MESSAGE(props.at(key)["default"] == value, path);
        }
    }
}
}  // namespace

TEST_CASE("schema matches the built-in defaults") {
    const json schema = read_json_file(TLAO_SCHEMA_PATH);
    compare_with_schema(default_document(), schema, schema.at("$defs"), "");
}
