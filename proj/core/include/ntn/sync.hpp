#pragma once

#include <array>
#include <stdexcept>
#include <vector>

namespace ntn {

// GNSS/ephemeris-driven uplink pre-compensation and connected-mode timing
// maintenance. Positions are ECEF km; velocities km/s.

struct EphemerisRecord {
    double epoch_s = 0.0;
    std::array<double, 3> position_km{};
    std::array<double, 3> velocity_km_s{};

    void validate(double earth_radius_km) const;
};

struct UEState {
    std::array<double, 3> position_km{};
    double gnss_position_error_m = 0.0;  // 1-sigma
    double local_clock_error_ppm = 0.0;
};

struct SyncLimits {
    double prach_cp_us = 100.0;    // test fixture value, not a standard default
    double prach_scs_hz = 1250.0;
    double carrier_hz = 2.0e9;

    void validate() const;
    double max_cfo_hz() const { return prach_scs_hz / 2.0; }
};

class StaleEphemerisError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Precompensation {
    double ta_ms = 0.0;          // 2*d/c service component + broadcast common delay
    double freq_offset_hz = 0.0; // applied on UL; cancels the service-link Doppler
};

inline constexpr double kDefaultEphemerisValidityS = 30.0;

// Throws StaleEphemerisError when |t_request_s - eph.epoch_s| exceeds the
// validity window. freq_offset = +(range rate / c) * carrier, the negative of
// the observed Doppler shift.
Precompensation precompensation(const UEState& ue, const EphemerisRecord& eph,
                                const SyncLimits& limits,
                                double common_feeder_delay_ms,
                                double t_request_s,
                                double validity_window_s = kDefaultEphemerisValidityS);

struct ResidualVerdict {
    bool timing_ok = false;
    bool cfo_ok = false;
    bool pass() const { return timing_ok && cfo_ok; }
};

// Strict limits: |timing| < CP duration, |cfo| < scs/2 (boundaries excluded).
ResidualVerdict validate_residuals(double timing_residual_us, double cfo_residual_hz,
                                   const SyncLimits& limits);

enum class TaMaintenanceMode { NetworkCommands, Autonomous };

struct TaSimSample {
    double t_s = 0.0;
    double error_us = 0.0;   // residual after any correction at this instant
    bool command_issued = false;
};

struct TaSimResult {
    int commands_sent = 0;
    double max_error_us = 0.0;
    std::vector<TaSimSample> trace;
};

// NetworkCommands: a TA command fires each time the accumulated error reaches
// the budget, plus one final top-up at end of window if drift remains; the
// count equals ceil(duration * drift / budget). Autonomous: the UE recomputes
// from ephemeris every recompute_period_s and sends nothing.
TaSimResult ta_maintenance_sim(double drift_us_per_s, double error_budget_us,
                               double duration_s, TaMaintenanceMode mode,
                               double recompute_period_s = 1.0);

}  // namespace ntn
