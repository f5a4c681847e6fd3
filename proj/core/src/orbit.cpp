#include "ntn/orbit.hpp"

#include <cmath>
#include <stdexcept>

namespace ntn {

namespace {

constexpr double kSiderealDayS = 86164.0905;

void check_elevation(double elevation_deg) {
    if (!(elevation_deg >= 0.0 && elevation_deg <= 90.0))
        throw std::invalid_argument("elevation must be in [0, 90] degrees");
}

// ms of propagation delay for a path of d km
double delay_ms(double d_km, double c_m_s) { return d_km * 1.0e6 / c_m_s; }

}  // namespace

void OrbitScenario::validate() const {
    constants.validate();
    if (!(altitude_km > 0.0))
        throw std::invalid_argument("OrbitScenario: altitude_km must be > 0");
    if (!(min_elevation_deg >= 0.0 && min_elevation_deg < 90.0))
        throw std::invalid_argument("OrbitScenario: min_elevation_deg must be in [0, 90)");
    if (!feeder_equals_service && !feeder_distance_km)
        throw std::invalid_argument("OrbitScenario: explicit feeder_distance_km required");
    if (feeder_distance_km && !(*feeder_distance_km > 0.0))
        throw std::invalid_argument("OrbitScenario: feeder_distance_km must be > 0");
}

double slant_range(const OrbitScenario& scenario, double elevation_deg) {
    scenario.validate();
    check_elevation(elevation_deg);
    const double re = scenario.constants.re;
    const double r = re + scenario.altitude_km;
    const double eps = deg_to_rad(elevation_deg);
    const double ce = std::cos(eps);
    return std::sqrt(r * r - re * re * ce * ce) - re * std::sin(eps);
}

double one_way_delay_ms(const OrbitScenario& scenario, double elevation_deg) {
    return delay_ms(slant_range(scenario, elevation_deg), scenario.constants.c);
}

double rtt_transparent(const OrbitScenario& scenario, double elevation_deg) {
    const double d_service = slant_range(scenario, elevation_deg);
    const double d_feeder =
        scenario.feeder_equals_service ? d_service : *scenario.feeder_distance_km;
    return 2.0 * delay_ms(d_service + d_feeder, scenario.constants.c);
}

double orbital_velocity(const OrbitScenario& scenario) {
    scenario.validate();
    const double r = scenario.constants.re + scenario.altitude_km;
    return std::sqrt(scenario.constants.mu / r);
}

double orbital_period_min(const OrbitScenario& scenario) {
    scenario.validate();
    const double r = scenario.constants.re + scenario.altitude_km;
    return 2.0 * kPi * std::sqrt(r * r * r / scenario.constants.mu) / 60.0;
}

double max_doppler_ppm(const OrbitScenario& scenario) {
    scenario.validate();
    const double period_s = orbital_period_min(scenario) * 60.0;
    if (std::abs(period_s - kSiderealDayS) / kSiderealDayS < 1.0e-3)
        return 0.0;  // geostationary: satellite fixed relative to the ground
    const double r = scenario.constants.re + scenario.altitude_km;
    const double v = orbital_velocity(scenario);
    return (v + scenario.constants.v_eq) / (scenario.constants.c * 1.0e-3) *
           (scenario.constants.re / r) * 1.0e6;
}

std::vector<PassSample> propagate_pass(const OrbitScenario& scenario,
                                       bool rotating_earth,
                                       double step_s) {
    scenario.validate();
    if (!(step_s > 0.0))
        throw std::invalid_argument("propagate_pass: step_s must be > 0");

    const double re = scenario.constants.re;
    const double r = re + scenario.altitude_km;
    const double c_km_s = scenario.constants.c * 1.0e-3;

    const double omega_sat = orbital_velocity(scenario) / r;
    const double omega_ground = rotating_earth ? scenario.constants.v_eq / re : 0.0;
    const double omega_rel = omega_sat - omega_ground;  // rad/s, prograde pass
    if (omega_rel < 1.0e-6)
        throw std::invalid_argument(
            "propagate_pass: negligible relative angular rate (geostationary geometry)");

    // Central angle swept from zenith down to the minimum elevation.
    const double eps_min = deg_to_rad(scenario.min_elevation_deg);
    const double lambda = std::acos(re / r * std::cos(eps_min)) - eps_min;
    const double half_duration_s = lambda / omega_rel;

    // Symmetric sampling about the zenith instant so the Doppler zero
    // crossing lands exactly on a sample.
    const auto half_steps = static_cast<std::size_t>(std::floor(half_duration_s / step_s));
    const std::size_t n = 2 * half_steps + 1;
    if (n < 10)
        throw std::invalid_argument("propagate_pass: step_s yields fewer than 10 samples");

    std::vector<PassSample> pass;
    pass.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = (static_cast<double>(i) - static_cast<double>(half_steps)) * step_s;
        const double theta = omega_rel * dt;  // satellite angle relative to ground point
        const double range =
            std::sqrt(re * re + r * r - 2.0 * re * r * std::cos(theta));
        const double range_rate = re * r * std::sin(theta) * omega_rel / range;  // km/s

        PassSample s;
        s.t_s = static_cast<double>(i) * step_s;
        s.elevation_deg = rad_to_deg(
            std::atan2(r * std::cos(theta) - re, r * std::abs(std::sin(theta))));
        s.slant_range_km = range;
        s.one_way_delay_ms = delay_ms(range, scenario.constants.c);
        const double feeder =
            scenario.feeder_equals_service ? range : *scenario.feeder_distance_km;
        s.rtt_ms = 2.0 * delay_ms(range + feeder, scenario.constants.c);
        s.doppler_ppm = -range_rate / c_km_s * 1.0e6;
        pass.push_back(s);
    }
    return pass;
}

PassStats analyze_pass(const std::vector<PassSample>& pass) {
    if (pass.size() < 3)
        throw std::invalid_argument("analyze_pass: need at least 3 samples");
    PassStats stats;
    stats.duration_s = pass.back().t_s - pass.front().t_s;
    for (std::size_t i = 0; i < pass.size(); ++i) {
        if (pass[i].elevation_deg > stats.max_elevation_deg) {
            stats.max_elevation_deg = pass[i].elevation_deg;
            stats.zenith_index = i;
        }
    }
    for (std::size_t i = 1; i + 1 < pass.size(); ++i) {
        const double dt = pass[i + 1].t_s - pass[i - 1].t_s;
        const double rate =
            std::abs((pass[i + 1].doppler_ppm - pass[i - 1].doppler_ppm) / dt);
        if (rate > stats.max_doppler_rate_ppm_s) stats.max_doppler_rate_ppm_s = rate;
    }
    return stats;
}

}  // namespace ntn
