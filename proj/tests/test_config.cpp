#include <doctest.h>

#include <stdexcept>

#include "layerlab/config.hpp"
#include "layerlab/io.hpp"

using namespace layerlab;

TEST_CASE("empty config yields the documented defaults") {
    const RunConfig cfg = parse_config_text("");
    CHECK(cfg.preset == "paper_poly8");
    CHECK(cfg.v_star == 1.0);
    CHECK(cfg.horizon == 0.25);
    CHECK(cfg.epsilon_list.size() == 9);
    CHECK(cfg.epsilon_list.front() == 1.0 / 64);
    CHECK(cfg.epsilon_list.back() == 1.0 / 16384);
    CHECK(cfg.z_max == 32.0);
    CHECK(cfg.m_layer == 2048);
    const auto t = cfg.resolved_output_times();
    CHECK(t.size() == 5);
    CHECK(t.back() == 0.25);
}

TEST_CASE("constraint violations carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_config_text("model.v_star = -1\n"),
                         "config line 1: model.v_star must be >= 0", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config_text("\n\ngrid.z_max = 20\n"),
                         "config line 3: grid.z_max below decay budget (28)", std::runtime_error);
    CHECK_THROWS_AS(parse_config_text("no_such.key = 1\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_config_text("model.v_star = abc\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_config_text("model.v_star 1\n"), std::runtime_error);
}

TEST_CASE("overrides land in the echoed config") {
    const RunConfig cfg = parse_config_text("grid.z_max = 40\n# comment\nmodel.v_star = 0.5\n");
    CHECK(cfg.z_max == 40.0);
    CHECK(cfg.v_star == 0.5);
    const std::string echoed = cfg.echo();
    CHECK(echoed.find("grid.z_max = 40") != std::string::npos);
    CHECK(echoed.find("model.v_star = 0.5") != std::string::npos);
}

TEST_CASE("echoed config round-trips") {
    RunConfig cfg = parse_config_text(
        "model.epsilon_list = 0.05, 0.025\n"
        "model.v_star = 2\n"
        "model.T = 0.5\n"
        "grid.m = 1024\n"
        "time.output_times = 0.25, 0.5\n"
        "analysis.delta = 0.3\n"
        "output.write_profiles = true\n");
    const RunConfig again = parse_config_text(cfg.echo());
    CHECK(again.epsilon_list == cfg.epsilon_list);
    CHECK(again.v_star == cfg.v_star);
    CHECK(again.horizon == cfg.horizon);
    CHECK(again.m_layer == cfg.m_layer);
    CHECK(again.resolved_output_times() == cfg.resolved_output_times());
    CHECK(again.interior_delta == cfg.interior_delta);
    CHECK(again.write_profiles == cfg.write_profiles);
    CHECK(again.echo() == cfg.echo());
}

TEST_CASE("config maps onto a sweep plan") {
    const RunConfig cfg = parse_config_text(
        "model.epsilon_list = 0.015625, 0.0078125\n"
        "grid.n_profile = 512\n"
        "time.profile_steps = 400\n");
    const SweepPlan plan = cfg.to_sweep_plan();
    CHECK(plan.epsilons.size() == 2);
    CHECK(plan.n_profile == 512);
    CHECK(plan.profile_steps == 400);
    CHECK(plan.params.initial_data.preset == "paper_poly8");
    plan.validate();
}

TEST_CASE("output times outside the horizon are rejected") {
    CHECK_THROWS_AS(parse_config_text("time.output_times = 0.1, 0.9\n"), std::runtime_error);
}

TEST_CASE("report emission formats") {
    ConvergenceReport rep;
    rep.complete = true;
    EpsRecord e;
    e.epsilon = 1.0 / 3.0;
    e.n = 128;
    e.Eu = 0.125;
    e.Ev = 1e-7;
    e.Ephi = 2.0;
    e.thickness_left = e.thickness_right = 0.034;
    e.thickness_defined = true;
    e.boundary_residual = 5e-4;
    rep.entries.push_back(e);
    rep.battery.push_back({"demo", 0.0, 1e-10, true});

    const std::string csv = report_csv(rep);
    CHECK(csv.rfind("epsilon,n,E_u,E_v,E_phi,thickness_left,thickness_right,boundary_residual\n",
                    0) == 0);
    // 17 significant digits, locale-independent decimal point
    CHECK(csv.find("0.33333333333333331") != std::string::npos);
    CHECK(csv.find(',') != std::string::npos);
    CHECK(format_g17(1.0 / 3.0) == "0.33333333333333331");

    const std::string json = report_json(rep);
    CHECK(json.find("\"battery_pass\": true") != std::string::npos);
    CHECK(json.find("\"E_v\"") != std::string::npos);
}
