#include "ntn/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ntn {

void ConstellationPlane::validate() const {
    constants.validate();
    if (!(altitude_km > 0.0))
        throw std::invalid_argument("ConstellationPlane: altitude_km must be > 0");
    if (n_satellites < 1)
        throw std::invalid_argument("ConstellationPlane: need at least one satellite");
    if (!phase_offsets_rad.empty()) {
        if (static_cast<int>(phase_offsets_rad.size()) != n_satellites)
            throw std::invalid_argument(
                "ConstellationPlane: phase offsets must match satellite count");
        for (std::size_t i = 0; i < phase_offsets_rad.size(); ++i)
            for (std::size_t j = i + 1; j < phase_offsets_rad.size(); ++j) {
                double diff = std::remainder(
                    phase_offsets_rad[i] - phase_offsets_rad[j], 2.0 * kPi);
                if (std::abs(diff) < 1.0e-12)
                    throw std::invalid_argument(
                        "ConstellationPlane: phases must be distinct modulo 2*pi");
            }
    }
}

std::vector<double> ConstellationPlane::phases() const {
    validate();
    if (!phase_offsets_rad.empty()) return phase_offsets_rad;
    std::vector<double> out(n_satellites);
    for (int k = 0; k < n_satellites; ++k)
        out[k] = -2.0 * kPi * k / n_satellites;  // successors trail the leader
    return out;
}

namespace {

double central_angle_rad(double h_km, double eps_min_deg, const PhysicalConstants& c) {
    c.validate();
    if (!(h_km > 0.0))
        throw std::invalid_argument("altitude must be > 0");
    if (!(eps_min_deg >= 0.0 && eps_min_deg <= 90.0))
        throw std::invalid_argument("elevation must be in [0, 90]");
    const double eps = deg_to_rad(eps_min_deg);
    return std::acos(c.re / (c.re + h_km) * std::cos(eps)) - eps;
}

double elevation_at_offset_deg(double theta_rad, double re, double r) {
    return rad_to_deg(
        std::atan2(r * std::cos(theta_rad) - re, r * std::abs(std::sin(theta_rad))));
}

}  // namespace

CoverageGeometry coverage_geometry(double h_km, double eps_min_deg,
                                   const PhysicalConstants& constants) {
    const double lambda = central_angle_rad(h_km, eps_min_deg, constants);
    CoverageGeometry geometry;
    geometry.central_angle_deg = rad_to_deg(lambda);
    geometry.diameter_km = 2.0 * constants.re * lambda;
    return geometry;
}

double visibility_window(double h_km, double eps_min_deg, double omega_earth_rad_s,
                         const PhysicalConstants& constants) {
    const double lambda = central_angle_rad(h_km, eps_min_deg, constants);
    const double r = constants.re + h_km;
    const double omega_sat = std::sqrt(constants.mu / (r * r * r));
    const double omega_rel = omega_sat - omega_earth_rad_s;
    if (!(omega_rel > 0.0))
        throw std::invalid_argument(
            "visibility_window: satellite does not overtake the ground point");
    return 2.0 * lambda / omega_rel;
}

ScheduleResult switch_schedule(const ConstellationPlane& plane, double eps_min_deg,
                               double ground_point_angle_rad, double horizon_s,
                               double omega_earth_rad_s) {
    plane.validate();
    if (!(horizon_s > 0.0))
        throw std::invalid_argument("switch_schedule: horizon must be > 0");
    const double lambda = central_angle_rad(plane.altitude_km, eps_min_deg, plane.constants);
    const double re = plane.constants.re;
    const double r = re + plane.altitude_km;
    const double omega_sat = std::sqrt(plane.constants.mu / (r * r * r));
    const double omega_rel = omega_sat - omega_earth_rad_s;
    if (!(omega_rel > 0.0))
        throw std::invalid_argument(
            "switch_schedule: satellite does not overtake the ground point");
    const double half_window = lambda / omega_rel;
    const double orbit_period = 2.0 * kPi / omega_rel;
    if (horizon_s < orbit_period / plane.n_satellites)
        throw std::invalid_argument(
            "switch_schedule: horizon shorter than one inter-satellite interval");

    ScheduleResult result;
    const std::vector<double> phases = plane.phases();
    for (int k = 0; k < plane.n_satellites; ++k) {
        // zenith crossings: phase + omega_rel*t = ground angle (mod 2*pi)
        const double base = (ground_point_angle_rad - phases[k]) / omega_rel;
        const auto m_first = static_cast<long>(
            std::ceil((0.0 - half_window - base) / orbit_period - 1.0e-9));
        for (long m = m_first;; ++m) {
            const double t_zenith = base + static_cast<double>(m) * orbit_period;
            if (t_zenith - half_window > horizon_s + 1.0e-9) break;
            if (t_zenith + half_window < -1.0e-9) continue;
            ServingInterval interval;
            interval.sat_id = k;
            interval.t_start_s = std::max(0.0, t_zenith - half_window);
            interval.t_stop_s = std::min(horizon_s, t_zenith + half_window);
            if (interval.t_stop_s > interval.t_start_s + 1.0e-9)
                result.intervals.push_back(interval);
        }
    }
    std::sort(result.intervals.begin(), result.intervals.end(),
              [](const ServingInterval& a, const ServingInterval& b) {
                  if (a.t_start_s != b.t_start_s) return a.t_start_s < b.t_start_s;
                  return a.sat_id < b.sat_id;
              });

    // Elevation of satellite k as seen from the ground point at time t.
    auto elevation_deg = [&](int k, double t) {
        const double theta =
            std::remainder(phases[k] + omega_rel * t - ground_point_angle_rad, 2.0 * kPi);
        return elevation_at_offset_deg(theta, re, r);
    };
    auto range_km = [&](int k, double t) {
        const double theta =
            std::remainder(phases[k] + omega_rel * t - ground_point_angle_rad, 2.0 * kPi);
        return std::sqrt(re * re + r * r - 2.0 * re * r * std::cos(theta));
    };

    for (std::size_t i = 0; i + 1 < result.intervals.size(); ++i) {
        const ServingInterval& serving = result.intervals[i];
        const ServingInterval& target = result.intervals[i + 1];
        AssistanceInfo info;
        info.t_stop_serving_s = serving.t_stop_s;
        info.t_start_serving_s = target.t_start_s;
        // Evaluate the target where it is actually visible.
        const double t_eval = std::max(serving.t_stop_s, target.t_start_s);
        info.ta_to_target_ms =
            2.0 * range_km(target.sat_id, t_eval) * 1.0e6 / plane.constants.c;
        info.serving_elevation_deg = elevation_deg(serving.sat_id, serving.t_stop_s);
        info.target_elevation_deg = elevation_deg(target.sat_id, t_eval);
        result.handovers.push_back(info);
    }

    // Gaps inside [0, horizon].
    const double tol = 1.0e-6;
    double covered_until = 0.0;
    for (const ServingInterval& interval : result.intervals) {
        if (interval.t_start_s > covered_until + tol)
            result.gaps.push_back(CoverageGap{covered_until, interval.t_start_s});
        covered_until = std::max(covered_until, interval.t_stop_s);
    }
    if (covered_until < horizon_s - tol)
        result.gaps.push_back(CoverageGap{covered_until, horizon_s});
    result.gap_free = result.gaps.empty();
    return result;
}

SelectionDecision select_cell_decision(const std::vector<CellCandidate>& candidates,
                                       double hysteresis_db, double now_s) {
    if (candidates.empty())
        throw std::invalid_argument("select_cell: candidate list must be nonempty");
    if (hysteresis_db < 0.0)
        throw std::invalid_argument("select_cell: hysteresis must be >= 0");
    for (const CellCandidate& c : candidates)
        if (!std::isfinite(c.rsrp_db))
            throw std::invalid_argument("select_cell: rsrp must be finite");

    if (candidates.size() == 1)
        return SelectionDecision{candidates.front().cell_id, SelectionRule::SingleCandidate};

    const CellCandidate* best = &candidates.front();
    double second_rsrp = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const CellCandidate& c = candidates[i];
        if (c.rsrp_db > best->rsrp_db ||
            (c.rsrp_db == best->rsrp_db && c.cell_id < best->cell_id)) {
            second_rsrp = std::max(second_rsrp, best->rsrp_db);
            best = &c;
        } else {
            second_rsrp = std::max(second_rsrp, c.rsrp_db);
        }
    }

    if (best->rsrp_db - second_rsrp >= hysteresis_db)
        return SelectionDecision{best->cell_id, SelectionRule::RsrpArgmax};

    const CellCandidate* longest = &candidates.front();
    for (const CellCandidate& c : candidates) {
        const double remaining = c.assistance.t_stop_serving_s - now_s;
        const double current = longest->assistance.t_stop_serving_s - now_s;
        if (remaining > current || (remaining == current && c.cell_id < longest->cell_id))
            longest = &c;
    }
    return SelectionDecision{longest->cell_id, SelectionRule::LongestRemainingService};
}

int select_cell(const std::vector<CellCandidate>& candidates, double hysteresis_db,
                double now_s) {
    return select_cell_decision(candidates, hysteresis_db, now_s).cell_id;
}

}  // namespace ntn
