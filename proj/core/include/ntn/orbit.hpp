#pragma once

#include <optional>
#include <vector>

#include "ntn/constants.hpp"

namespace ntn {

// Circular-orbit geometry around a spherical Earth. Distances in km,
// delays in ms, Doppler in parts-per-million of the carrier.

struct OrbitScenario {
    double altitude_km = 600.0;
    double min_elevation_deg = 10.0;
    // Transparent payload: RTT = 2*(service + feeder)/c. When
    // feeder_equals_service is set the feeder leg mirrors the service leg,
    // otherwise feeder_distance_km must be provided.
    bool feeder_equals_service = true;
    std::optional<double> feeder_distance_km{};
    PhysicalConstants constants{};

    void validate() const;
};

struct PassSample {
    double t_s = 0.0;              // seconds since the first sample of the pass
    double elevation_deg = 0.0;
    double slant_range_km = 0.0;
    double one_way_delay_ms = 0.0;
    double rtt_ms = 0.0;
    double doppler_ppm = 0.0;      // positive while approaching
};

struct PassStats {
    double max_doppler_rate_ppm_s = 0.0;  // max |d(doppler)/dt|, central differences
    double max_elevation_deg = 0.0;
    std::size_t zenith_index = 0;         // sample with maximum elevation
    double duration_s = 0.0;
};

double slant_range(const OrbitScenario& scenario, double elevation_deg);
double one_way_delay_ms(const OrbitScenario& scenario, double elevation_deg);
double rtt_transparent(const OrbitScenario& scenario, double elevation_deg);

double orbital_velocity(const OrbitScenario& scenario);   // km/s
double orbital_period_min(const OrbitScenario& scenario); // minutes

// Worst-case Doppler at the horizon with counter-rotating ground motion:
// ((v_sat + v_eq)/c) * (Re/(Re+h)) in ppm. An ideal geostationary orbit
// (period within 0.1% of the sidereal day) reports exactly 0.
double max_doppler_ppm(const OrbitScenario& scenario);

// Simulates one overhead pass (ground point on the sub-satellite track) from
// min_elevation up through zenith and back down, sampled every step_s seconds
// with the zenith instant exactly on a sample. rotating_earth folds the
// ground point's angular rate (v_eq/Re, prograde) into the relative motion.
// Rejects step sizes yielding fewer than 10 samples and geometries with no
// relative angular motion (geostationary).
std::vector<PassSample> propagate_pass(const OrbitScenario& scenario,
                                       bool rotating_earth,
                                       double step_s);

PassStats analyze_pass(const std::vector<PassSample>& pass);

}  // namespace ntn
