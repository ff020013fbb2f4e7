#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <random>
#include <sstream>

#include "dbox/config.hpp"
#include "dbox/io.hpp"
#include "dbox/svg.hpp"

using namespace dbox;

TEST_CASE("17-digit formatting round-trips exactly") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::ldexp(mant(rng), expo(rng));
        const std::string s = io::format17(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(std::strtod(io::format17(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
}

TEST_CASE("config parsing") {
    SECTION("dimensionless") {
        const RunConfig cfg = parse_config_text("g = 80\nlk0 = 20\nn0 = 1\n# comment\n");
        CHECK(cfg.g == 80.0);
        CHECK(cfg.lk0 == 20.0);
        const ProblemConfig p = cfg.problem();
        CHECK(p.coupling == 80.0);
        CHECK(p.k0 == 20.0);
    }
    SECTION("physical") {
        const RunConfig cfg = parse_config_text(
            "mass1 = 1\nmass2 = 2\nbox_length = 1.5\ncoupling = -3\nk0 = 4\n");
        const ProblemConfig p = cfg.problem();
        CHECK(p.mass2 == 2.0);
        CHECK(p.coupling == -3.0);
        CHECK(p.hbar == 1.0);
    }
    SECTION("unknown keys are named") {
        try {
            parse_config_text("g = 1\nlk0 = 2\nbogus_key = 3\n");
            FAIL("expected config_error");
        } catch (const config_error& e) {
            CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
        }
    }
    SECTION("duplicates rejected") {
        CHECK_THROWS_AS(parse_config_text("g = 1\ng = 2\n"), config_error);
    }
    SECTION("mixing styles rejected") {
        CHECK_THROWS_AS(parse_config_text("g = 1\nmass1 = 1\n"), config_error);
    }
    SECTION("malformed values rejected") {
        CHECK_THROWS_AS(parse_config_text("g = fast\n"), config_error);
        CHECK_THROWS_AS(parse_config_text("n0 = 1.5\n"), config_error);
        CHECK_THROWS_AS(parse_config_text("solver = qr\n"), config_error);
        CHECK_THROWS_AS(parse_config_text("just a line\n"), config_error);
    }
    SECTION("missing problem keys rejected") {
        CHECK_THROWS_AS(parse_config_text("g = 1\n").problem(), config_error);
        CHECK_THROWS_AS(parse_config_text("mass1 = 1\nk0 = 2\n").problem(), config_error);
    }
    SECTION("plans from config") {
        const RunConfig cfg = parse_config_text(
            "g = 2\nlk0 = 5\nsweep_points = 7\nlk0_min = 1\nlk0_max = 8\n"
            "truncation = 9\nt_min = 10\nt_max = 40\nt_step = 10\nsolver = separable\n");
        const SweepPlan sweep = cfg.sweep_plan();
        CHECK(sweep.lk0_grid.size() == 7);
        CHECK(sweep.truncation == 9);
        CHECK(sweep.solver == SolverKind::separable);
        const ConvergencePlan conv = cfg.convergence_plan();
        CHECK(conv.t_list == std::vector<int>{10, 20, 30, 40});
        CHECK(conv.lk0 == 5.0);
    }
}

TEST_CASE("csv and json encode identical numbers") {
    SweepPlan plan;
    plan.lk0_grid = SweepPlan::open_interval_grid(2.0, 9.0, 5);
    plan.g = 3.3;
    plan.truncation = 10;
    plan.solver = SolverKind::separable;
    const SweepResult result = run_sweep(plan);

    const std::string csv = io::sweep_csv(result);
    const nlohmann::json js = io::sweep_json(result, {{"g", "3.3"}});

    // walk CSV rows and match them against the JSON records
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "Lk0,n,p_plus,p_minus,p_total,defect,cond_estimate,status");
    size_t row = 0;
    size_t point_idx = 0, outcome_idx = 0;
    while (std::getline(lines, line)) {
        std::vector<std::string> fields;
        std::istringstream fs(line);
        std::string field;
        while (std::getline(fs, field, ',')) fields.push_back(field);
        REQUIRE(fields.size() == 8);

        const auto& point = js["points"][point_idx];
        const auto& outcome = point["outcomes"][outcome_idx];
        CHECK(std::strtod(fields[0].c_str(), nullptr) == point["Lk0"].get<double>());
        CHECK(std::strtod(fields[2].c_str(), nullptr) == outcome["p_plus"].get<double>());
        CHECK(std::strtod(fields[3].c_str(), nullptr) == outcome["p_minus"].get<double>());
        CHECK(std::strtod(fields[4].c_str(), nullptr) == outcome["p_total"].get<double>());
        CHECK(std::strtod(fields[5].c_str(), nullptr) == point["defect"].get<double>());
        CHECK(fields[7] == point["status"].get<std::string>());

        ++row;
        if (++outcome_idx >= point["outcomes"].size()) {
            outcome_idx = 0;
            ++point_idx;
        }
    }
    CHECK(point_idx == result.points.size());

    // provenance echoes the configuration verbatim
    CHECK(js["provenance"]["config"]["g"] == "3.3");
    CHECK(js["provenance"]["artifact"] == artifact_name);
}

TEST_CASE("solve report serialization") {
    const ProblemConfig cfg = ProblemConfig::from_dimensionless(2.0, 9.0, 1);
    const KernelContext ctx = KernelContext::make(cfg, 12);
    const OutcomeReport rep =
        probabilities(solve_separable(ctx, Discretization::trapezoid(24, 1.0)));

    const std::string csv = io::solve_csv(rep);
    const nlohmann::json js = io::solve_json(rep, {});
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "n,k_n,E_n,p_plus,p_minus,p_total");
    size_t i = 0;
    while (std::getline(lines, line)) {
        const auto comma = line.find(',');
        CHECK(std::stoi(line.substr(0, comma)) == js["outcomes"][i]["n"].get<int>());
        ++i;
    }
    CHECK(i == rep.outcomes.size());
    CHECK(js["open_channel_count"].get<size_t>() == rep.outcomes.size());
    CHECK(js["unitarity_defect"].get<double>() == rep.unitarity_defect);
}

TEST_CASE("svg chart emission") {
    svg::LineChart chart("demo", "x", "y", true);
    chart.add_series("n = 2", {{1.0, 0.5}, {2.0, 0.0}, {3.0, 1e-8}, {4.0, 2e-3}});
    chart.add_series("n = 3", {{1.0, 1e-4}, {4.0, 3e-2}});
    const std::string body = chart.render(); // must cope with the y = 0 point
    CHECK(body.find("<svg") != std::string::npos);
    CHECK(body.find("n = 2") != std::string::npos);
    CHECK(body.find("path d=") != std::string::npos);
}
