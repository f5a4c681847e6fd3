#include "ntn/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "ntn/io.hpp"

namespace ntn {

using nlohmann::json;

BlerCurve Scenario::curve() const {
    if (retx.snr50_db) {
        BlerCurve c;
        c.slope = retx.slope;
        c.snr50_db = *retx.snr50_db;
        c.validate();
        return c;
    }
    const double ref = snr(budget(retx.calibration_budget)).snr_db;
    return calibrate_snr50(retx.slope, ref, retx.calibration_target_bler);
}

std::vector<double> Scenario::snr_grid() const {
    if (!(retx.grid_step_db > 0.0) || retx.grid_stop_db < retx.grid_start_db)
        throw std::invalid_argument("scenario: invalid snr grid");
    std::vector<double> grid;
    const auto n = static_cast<std::size_t>(
        std::floor((retx.grid_stop_db - retx.grid_start_db) / retx.grid_step_db + 1.0e-9));
    grid.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        grid.push_back(retx.grid_start_db + static_cast<double>(i) * retx.grid_step_db);
    return grid;
}

const OrbitScenario& Scenario::orbit(const std::string& key) const {
    auto it = orbits.find(key);
    if (it == orbits.end())
        throw std::invalid_argument("scenario is missing orbit '" + key + "'");
    return it->second;
}

const LinkBudgetInput& Scenario::budget(const std::string& key) const {
    auto it = budgets.find(key);
    if (it == budgets.end())
        throw std::invalid_argument("scenario is missing budget '" + key + "'");
    return it->second;
}

Scenario default_scenario() {
    Scenario s;
    s.orbits["leo600"] = OrbitScenario{600.0, 10.0};
    s.orbits["leo1200"] = OrbitScenario{1200.0, 10.0};
    s.orbits["geo"] = OrbitScenario{35786.0, 10.0};
    for (const std::string& name : budget_fixture_names())
        s.budgets[name] = budget_fixture(name);
    s.timers.config.ra_response_window_ms = 10.0;
    s.timers.config.mac_contention_resolution_ms = 10.0;
    s.timers.config.sr_period_ms = 10.0;
    s.timers.config.sr_prohibit_periods = 7;
    s.timers.config.t_reordering_ms = 200.0;
    s.timers.config.rtt_offset_enabled = false;
    s.mobility.plane.altitude_km = 750.0;
    s.mobility.plane.n_satellites = 70;
    return s;
}

namespace {

void expect_keys(const json& node, const char* section,
                 std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : node.items()) {
        bool known = false;
        for (const char* candidate : allowed)
            if (key == candidate) known = true;
        if (!known)
            throw std::invalid_argument("scenario: unknown key '" + key + "' in " +
                                        section);
    }
}

double number(const json& node, const char* what) {
    if (!node.is_number())
        throw std::invalid_argument(std::string("scenario: ") + what + " must be a number");
    return node.get<double>();
}

void parse_constants(const json& node, PhysicalConstants& constants) {
    expect_keys(node, "constants", {"c", "re", "mu", "v_eq"});
    if (node.contains("c")) constants.c = number(node["c"], "constants.c");
    if (node.contains("re")) constants.re = number(node["re"], "constants.re");
    if (node.contains("mu")) constants.mu = number(node["mu"], "constants.mu");
    if (node.contains("v_eq")) constants.v_eq = number(node["v_eq"], "constants.v_eq");
}

void parse_orbit(const json& node, OrbitScenario& orbit) {
    expect_keys(node, "orbit",
                {"altitude_km", "min_elevation_deg", "feeder_equals_service",
                 "feeder_distance_km", "constants"});
    if (node.contains("altitude_km"))
        orbit.altitude_km = number(node["altitude_km"], "altitude_km");
    if (node.contains("min_elevation_deg"))
        orbit.min_elevation_deg = number(node["min_elevation_deg"], "min_elevation_deg");
    if (node.contains("feeder_equals_service"))
        orbit.feeder_equals_service = node["feeder_equals_service"].get<bool>();
    if (node.contains("feeder_distance_km"))
        orbit.feeder_distance_km = number(node["feeder_distance_km"], "feeder_distance_km");
    if (node.contains("constants")) parse_constants(node["constants"], orbit.constants);
}

void parse_budget(const json& node, LinkBudgetInput& budget) {
    expect_keys(node, "budget",
                {"eirp_dbw", "g_over_t_db_k", "bandwidth_hz", "fspl_db",
                 "atmospheric_loss_db", "polarization_loss_db", "scintillation_loss_db",
                 "shadow_fading_db"});
    if (node.contains("eirp_dbw")) budget.eirp_dbw = number(node["eirp_dbw"], "eirp_dbw");
    if (node.contains("g_over_t_db_k"))
        budget.g_over_t_db_k = number(node["g_over_t_db_k"], "g_over_t_db_k");
    if (node.contains("bandwidth_hz"))
        budget.bandwidth_hz = number(node["bandwidth_hz"], "bandwidth_hz");
    if (node.contains("fspl_db")) budget.fspl_db = number(node["fspl_db"], "fspl_db");
    if (node.contains("atmospheric_loss_db"))
        budget.atmospheric_loss_db = number(node["atmospheric_loss_db"], "atmospheric_loss_db");
    if (node.contains("polarization_loss_db"))
        budget.polarization_loss_db = number(node["polarization_loss_db"], "polarization_loss_db");
    if (node.contains("scintillation_loss_db"))
        budget.scintillation_loss_db = number(node["scintillation_loss_db"], "scintillation_loss_db");
    if (node.contains("shadow_fading_db"))
        budget.shadow_fading_db = number(node["shadow_fading_db"], "shadow_fading_db");
}

void parse_retx(const json& node, RetxSettings& retx) {
    expect_keys(node, "retx",
                {"slope", "snr50_db", "calibration_budget", "calibration_target_bler",
                 "harq_max_transmissions", "arq_max_transmissions", "blind_n",
                 "blind_max_rlc_rounds", "grid_start_db", "grid_stop_db", "grid_step_db"});
    if (node.contains("slope")) retx.slope = number(node["slope"], "retx.slope");
    if (node.contains("snr50_db") && !node["snr50_db"].is_null())
        retx.snr50_db = number(node["snr50_db"], "retx.snr50_db");
    if (node.contains("calibration_budget"))
        retx.calibration_budget = node["calibration_budget"].get<std::string>();
    if (node.contains("calibration_target_bler"))
        retx.calibration_target_bler =
            number(node["calibration_target_bler"], "calibration_target_bler");
    if (node.contains("harq_max_transmissions"))
        retx.harq_max_transmissions = node["harq_max_transmissions"].get<int>();
    if (node.contains("arq_max_transmissions"))
        retx.arq_max_transmissions = node["arq_max_transmissions"].get<int>();
    if (node.contains("blind_n")) retx.blind_n = node["blind_n"].get<int>();
    if (node.contains("blind_max_rlc_rounds"))
        retx.blind_max_rlc_rounds = node["blind_max_rlc_rounds"].get<int>();
    if (node.contains("grid_start_db"))
        retx.grid_start_db = number(node["grid_start_db"], "grid_start_db");
    if (node.contains("grid_stop_db"))
        retx.grid_stop_db = number(node["grid_stop_db"], "grid_stop_db");
    if (node.contains("grid_step_db"))
        retx.grid_step_db = number(node["grid_step_db"], "grid_step_db");
}

void parse_timers(const json& node, TimerSettings& timers) {
    expect_keys(node, "timers",
                {"ra_response_window_ms", "mac_contention_resolution_ms",
                 "sr_prohibit_periods", "sr_period_ms", "t_reordering_ms",
                 "rtt_offset_enabled", "rtt_ms", "preamble_attempts_max",
                 "grant_issue_delay_ms", "t_reordering_extended_ms",
                 "reordering_losses", "reordering_n_pdus"});
    TimerConfig& cfg = timers.config;
    if (node.contains("ra_response_window_ms"))
        cfg.ra_response_window_ms = number(node["ra_response_window_ms"], "ra_response_window_ms");
    if (node.contains("mac_contention_resolution_ms"))
        cfg.mac_contention_resolution_ms =
            number(node["mac_contention_resolution_ms"], "mac_contention_resolution_ms");
    if (node.contains("sr_prohibit_periods"))
        cfg.sr_prohibit_periods = node["sr_prohibit_periods"].get<int>();
    if (node.contains("sr_period_ms"))
        cfg.sr_period_ms = number(node["sr_period_ms"], "sr_period_ms");
    if (node.contains("t_reordering_ms"))
        cfg.t_reordering_ms = number(node["t_reordering_ms"], "t_reordering_ms");
    if (node.contains("rtt_offset_enabled"))
        cfg.rtt_offset_enabled = node["rtt_offset_enabled"].get<bool>();
    if (node.contains("rtt_ms")) timers.rtt_ms = number(node["rtt_ms"], "timers.rtt_ms");
    if (node.contains("preamble_attempts_max"))
        timers.preamble_attempts_max = node["preamble_attempts_max"].get<int>();
    if (node.contains("grant_issue_delay_ms"))
        timers.grant_issue_delay_ms = number(node["grant_issue_delay_ms"], "grant_issue_delay_ms");
    if (node.contains("t_reordering_extended_ms"))
        timers.t_reordering_extended_ms =
            number(node["t_reordering_extended_ms"], "t_reordering_extended_ms");
    if (node.contains("reordering_losses")) {
        timers.reordering_losses.clear();
        for (const auto& sn : node["reordering_losses"])
            timers.reordering_losses.insert(sn.get<int>());
    }
    if (node.contains("reordering_n_pdus"))
        timers.reordering_n_pdus = node["reordering_n_pdus"].get<int>();
}

void parse_sync(const json& node, SyncSettings& sync) {
    expect_keys(node, "sync",
                {"prach_cp_us", "prach_scs_hz", "carrier_hz", "drift_us_per_s",
                 "error_budget_us", "duration_s", "ephemeris_validity_s"});
    if (node.contains("prach_cp_us"))
        sync.limits.prach_cp_us = number(node["prach_cp_us"], "prach_cp_us");
    if (node.contains("prach_scs_hz"))
        sync.limits.prach_scs_hz = number(node["prach_scs_hz"], "prach_scs_hz");
    if (node.contains("carrier_hz"))
        sync.limits.carrier_hz = number(node["carrier_hz"], "carrier_hz");
    if (node.contains("drift_us_per_s"))
        sync.drift_us_per_s = number(node["drift_us_per_s"], "drift_us_per_s");
    if (node.contains("error_budget_us"))
        sync.error_budget_us = number(node["error_budget_us"], "error_budget_us");
    if (node.contains("duration_s"))
        sync.duration_s = number(node["duration_s"], "duration_s");
    if (node.contains("ephemeris_validity_s"))
        sync.ephemeris_validity_s = number(node["ephemeris_validity_s"], "ephemeris_validity_s");
}

void parse_mobility(const json& node, MobilitySettings& mobility) {
    expect_keys(node, "mobility",
                {"altitude_km", "n_satellites", "phase_offsets_rad", "constants",
                 "min_elevation_deg", "horizon_s", "hysteresis_db"});
    if (node.contains("altitude_km"))
        mobility.plane.altitude_km = number(node["altitude_km"], "mobility.altitude_km");
    if (node.contains("n_satellites"))
        mobility.plane.n_satellites = node["n_satellites"].get<int>();
    if (node.contains("phase_offsets_rad")) {
        mobility.plane.phase_offsets_rad.clear();
        for (const auto& phase : node["phase_offsets_rad"])
            mobility.plane.phase_offsets_rad.push_back(phase.get<double>());
    }
    if (node.contains("constants")) parse_constants(node["constants"], mobility.plane.constants);
    if (node.contains("min_elevation_deg"))
        mobility.min_elevation_deg = number(node["min_elevation_deg"], "mobility.min_elevation_deg");
    if (node.contains("horizon_s"))
        mobility.horizon_s = number(node["horizon_s"], "mobility.horizon_s");
    if (node.contains("hysteresis_db"))
        mobility.hysteresis_db = number(node["hysteresis_db"], "mobility.hysteresis_db");
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
    json root = json::parse(json_text);
    if (!root.is_object())
        throw std::invalid_argument("scenario: top level must be an object");
    expect_keys(root, "scenario",
                {"name", "orbits", "budgets", "retx", "timers", "sync", "mobility",
                 "pass_step_s"});

    Scenario s = default_scenario();
    if (root.contains("name")) s.name = root["name"].get<std::string>();
    if (root.contains("orbits")) {
        for (const auto& [key, value] : root["orbits"].items()) {
            OrbitScenario& orbit = s.orbits[key];  // overlays the default if present
            parse_orbit(value, orbit);
        }
    }
    if (root.contains("budgets")) {
        for (const auto& [key, value] : root["budgets"].items()) {
            LinkBudgetInput& budget = s.budgets[key];
            parse_budget(value, budget);
        }
    }
    if (root.contains("retx")) parse_retx(root["retx"], s.retx);
    if (root.contains("timers")) parse_timers(root["timers"], s.timers);
    if (root.contains("sync")) parse_sync(root["sync"], s.sync);
    if (root.contains("mobility")) parse_mobility(root["mobility"], s.mobility);
    if (root.contains("pass_step_s"))
        s.pass_step_s = number(root["pass_step_s"], "pass_step_s");
    return s;
}

Scenario load_scenario(const std::string& path) {
    try {
        return parse_scenario(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("scenario '" + path + "': " + e.what());
    }
}

}  // namespace ntn
