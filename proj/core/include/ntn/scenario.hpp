#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "ntn/linkbudget.hpp"
#include "ntn/mobility.hpp"
#include "ntn/orbit.hpp"
#include "ntn/protocol_timers.hpp"
#include "ntn/retx.hpp"
#include "ntn/sync.hpp"

namespace ntn {

// One scenario file drives every command: orbit geometries, link budget
// fixtures, the retransmission model, protocol timer settings, sync
// parameters, and the constellation plane. JSON schema mirrors the fields;
// missing sections inherit the built-in defaults and unknown keys are
// rejected.

struct RetxSettings {
    double slope = 1.0;                    // BLER curve steepness, 1/dB
    std::optional<double> snr50_db{};      // unset: calibrate from a budget
    std::string calibration_budget = "leo_dl";
    double calibration_target_bler = 0.10;
    int harq_max_transmissions = 32;       // CE mode A cap
    int arq_max_transmissions = 32;
    int blind_n = 4;
    int blind_max_rlc_rounds = 512;
    double grid_start_db = -12.0;
    double grid_stop_db = 3.0;
    double grid_step_db = 0.25;
};

struct TimerSettings {
    TimerConfig config{};
    double rtt_ms = 541.0;                  // GEO service round trip
    int preamble_attempts_max = 1;
    double grant_issue_delay_ms = 0.0;
    double t_reordering_extended_ms = 1600.0;
    std::set<int> reordering_losses = {3};
    int reordering_n_pdus = 10;
};

struct SyncSettings {
    SyncLimits limits{};
    double drift_us_per_s = 40.0;
    double error_budget_us = 80.0;
    double duration_s = 3600.0;
    double ephemeris_validity_s = kDefaultEphemerisValidityS;
};

struct MobilitySettings {
    ConstellationPlane plane{};
    double min_elevation_deg = 10.0;
    double horizon_s = 7200.0;
    double hysteresis_db = 3.0;
};

struct Scenario {
    std::string name = "default";
    std::map<std::string, OrbitScenario> orbits;
    std::map<std::string, LinkBudgetInput> budgets;
    RetxSettings retx{};
    TimerSettings timers{};
    SyncSettings sync{};
    MobilitySettings mobility{};
    double pass_step_s = 1.0;

    // Resolves the BLER curve, calibrating snr50 against the configured
    // budget's SNR when it is not pinned explicitly.
    BlerCurve curve() const;
    std::vector<double> snr_grid() const;
    const OrbitScenario& orbit(const std::string& key) const;
    const LinkBudgetInput& budget(const std::string& key) const;
};

// The built-in scenario: three reference orbits (leo600, leo1200, geo), the
// four reference budgets, and the parameter values used throughout the tests.
Scenario default_scenario();

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

}  // namespace ntn
