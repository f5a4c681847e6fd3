#include <doctest.h>

#include <cstdio>
#include <set>
#include <stdexcept>
#include <string>

#include <ntn/io.hpp>
#include <ntn/scenario.hpp>

using namespace ntn;
using doctest::Approx;

TEST_CASE("built-in scenario carries the reference configuration") {
    const Scenario s = default_scenario();
    CHECK(s.name == "default");
    CHECK(s.orbits.size() == 3);
    CHECK(s.orbit("leo600").altitude_km == 600.0);
    CHECK(s.orbit("leo1200").altitude_km == 1200.0);
    CHECK(s.orbit("geo").altitude_km == 35786.0);
    CHECK(s.orbit("geo").min_elevation_deg == 10.0);
    CHECK(s.budgets.size() == 4);
    CHECK(s.budgets.count("geo_ul") == 1);
    CHECK(s.budgets.count("leo_dl") == 1);
    CHECK(s.retx.slope == 1.0);
    CHECK_FALSE(s.retx.snr50_db.has_value());
    CHECK(s.timers.rtt_ms == 541.0);
    CHECK(s.timers.config.sr_prohibit_periods == 7);
    CHECK(s.mobility.plane.altitude_km == 750.0);
    CHECK(s.mobility.plane.n_satellites == 70);
    CHECK(s.pass_step_s == 1.0);

    CHECK_THROWS_AS(s.orbit("nope"), std::invalid_argument);
    CHECK_THROWS_AS(s.budget("nope"), std::invalid_argument);
}

TEST_CASE("curve resolution") {
    Scenario s = default_scenario();

    // default: anchored so the reference downlink budget sees 10% BLER
    const BlerCurve calibrated = s.curve();
    CHECK(calibrated.slope == 1.0);
    CHECK(calibrated.snr50_db == Approx(1.36953786779).epsilon(1e-10));
    CHECK(bler(calibrated, snr(s.budget("leo_dl")).snr_db) == Approx(0.10).epsilon(1e-12));

    // an explicit midpoint bypasses calibration entirely
    s.retx.snr50_db = -2.5;
    CHECK(s.curve().snr50_db == -2.5);

    s.retx.snr50_db.reset();
    s.retx.calibration_budget = "missing";
    CHECK_THROWS_AS(s.curve(), std::invalid_argument);
}

TEST_CASE("snr grid is inclusive of both endpoints") {
    Scenario s = default_scenario();
    const std::vector<double> grid = s.snr_grid();
    REQUIRE(grid.size() == 61);
    CHECK(grid.front() == -12.0);
    CHECK(grid.back() == 3.0);
    CHECK(grid[1] - grid[0] == 0.25);

    s.retx.grid_start_db = 0.0;
    s.retx.grid_stop_db = 1.0;
    s.retx.grid_step_db = 0.3;
    CHECK(s.snr_grid().size() == 4);  // 0, 0.3, 0.6, 0.9

    s.retx.grid_step_db = 0.0;
    CHECK_THROWS_AS(s.snr_grid(), std::invalid_argument);
    s.retx.grid_step_db = 0.25;
    s.retx.grid_stop_db = -1.0;
    CHECK_THROWS_AS(s.snr_grid(), std::invalid_argument);
}

TEST_CASE("parsing overlays onto the defaults") {
    const Scenario empty = parse_scenario("{}");
    CHECK(empty.name == "default");
    CHECK(empty.orbits.size() == 3);

    const Scenario named = parse_scenario(R"({"name": "field-trial"})");
    CHECK(named.name == "field-trial");

    // touching one retx knob leaves the rest at their defaults
    const Scenario retx = parse_scenario(R"({"retx": {"blind_n": 8}})");
    CHECK(retx.retx.blind_n == 8);
    CHECK(retx.retx.slope == 1.0);
    CHECK(retx.retx.harq_max_transmissions == 32);

    // known orbits merge field by field instead of being replaced
    const Scenario orb =
        parse_scenario(R"({"orbits": {"leo1200": {"min_elevation_deg": 25.0}}})");
    CHECK(orb.orbit("leo1200").min_elevation_deg == 25.0);
    CHECK(orb.orbit("leo1200").altitude_km == 1200.0);

    const Scenario extra = parse_scenario(R"({"orbits": {"meo": {"altitude_km": 8000.0}}})");
    CHECK(extra.orbits.size() == 4);
    CHECK(extra.orbit("meo").altitude_km == 8000.0);
    CHECK(extra.orbit("meo").min_elevation_deg == 10.0);

    const Scenario bud = parse_scenario(R"({"budgets": {"geo_ul": {"eirp_dbw": 40.0}}})");
    CHECK(bud.budget("geo_ul").eirp_dbw == 40.0);
    CHECK(bud.budget("geo_ul").fspl_db == Approx(190.63));

    const Scenario tim = parse_scenario(
        R"({"timers": {"reordering_losses": [2, 5], "rtt_ms": 25.77}})");
    CHECK(tim.timers.reordering_losses == std::set<int>{2, 5});
    CHECK(tim.timers.rtt_ms == 25.77);
    CHECK(tim.timers.config.t_reordering_ms == 200.0);

    const Scenario con = parse_scenario(
        R"({"orbits": {"leo600": {"constants": {"c": 149896229.0}}}})");
    CHECK(con.orbit("leo600").constants.c == 149896229.0);
    CHECK(con.orbit("leo600").constants.re == 6371.0);

    const Scenario mob = parse_scenario(
        R"({"mobility": {"n_satellites": 9, "hysteresis_db": 0.0}})");
    CHECK(mob.mobility.plane.n_satellites == 9);
    CHECK(mob.mobility.hysteresis_db == 0.0);
    CHECK(mob.mobility.horizon_s == 7200.0);

    const Scenario syn = parse_scenario(R"({"sync": {"drift_us_per_s": 25.0}})");
    CHECK(syn.sync.drift_us_per_s == 25.0);
    CHECK(syn.sync.error_budget_us == 80.0);
}

TEST_CASE("unknown keys are rejected wherever they appear") {
    CHECK_THROWS_AS(parse_scenario(R"({"nonsense": 1})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario(R"({"orbits": {"leo600": {"height_km": 700}}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario(R"({"budgets": {"geo_ul": {"eirp": 1}}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario(R"({"retx": {"slopes": 1}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario(R"({"timers": {"t_reo": 1}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario(R"({"sync": {"cp": 1}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario(R"({"mobility": {"sats": 9}})"), std::invalid_argument);
    CHECK_THROWS_AS(
        parse_scenario(R"({"orbits": {"leo600": {"constants": {"g": 9.8}}}})"),
        std::invalid_argument);
}

TEST_CASE("type errors are reported") {
    CHECK_THROWS_AS(parse_scenario(R"({"retx": {"slope": "steep"}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario(R"({"pass_step_s": "1"})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario(R"([1, 2, 3])"), std::invalid_argument);
}

TEST_CASE("scenario files round trip through disk") {
    const std::string path = "scenario_io_roundtrip.json";
    write_text_file(path, R"({"name": "from-disk", "retx": {"slope": 2.0}})");
    const Scenario s = load_scenario(path);
    CHECK(s.name == "from-disk");
    CHECK(s.retx.slope == 2.0);

    write_text_file(path, "{\"name\": ");  // truncated
    try {
        load_scenario(path);
        FAIL("expected a parse failure");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find(path) != std::string::npos);
    }
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_scenario("does_not_exist.json"), std::runtime_error);
}

TEST_CASE("fnv1a64 matches the published test vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a64_hex("abc") == "e71fa2190541574b");
    CHECK(fnv1a64("abc") != fnv1a64("abd"));
}

TEST_CASE("double formatting is stable") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(541.4570123) == "541.4570123");
    CHECK(format_double(1931.63535891) == "1931.635359");
    CHECK(format_double(-3.5) == "-3.5");
    CHECK(format_double(0.25) == "0.25");
}

TEST_CASE("csv assembly enforces shape and content") {
    Csv csv({"a", "b"});
    csv.row({"1", "2"});
    csv.row({"3.5", "x"});
    CHECK(csv.str() == "a,b\n1,2\n3.5,x\n");

    CHECK_THROWS_AS(csv.row({"only-one"}), std::invalid_argument);
    CHECK_THROWS_AS(csv.row({"1", "2,3"}), std::invalid_argument);
    CHECK_THROWS_AS(csv.row({"1", "line\nbreak"}), std::invalid_argument);
    CHECK_THROWS_AS(csv.row({"1", "cr\rhere"}), std::invalid_argument);
    CHECK_THROWS_AS(Csv({}), std::invalid_argument);
    CHECK_THROWS_AS(Csv({"a,b"}), std::invalid_argument);
}

TEST_CASE("text file round trip") {
    const std::string path = "io_roundtrip_tmp.txt";
    const std::string content = "line one\nline two\n";
    write_text_file(path, content);
    CHECK(read_text_file(path) == content);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text_file(path), std::runtime_error);
}
