#pragma once

#include <vector>

#include "ntn/constants.hpp"

namespace ntn {

// Single-plane LEO pass/coverage prediction along the ground track, service
// link switch scheduling, and assistance-aided cell selection.

inline constexpr double kEarthRotationRadS = 7.2921e-5;  // prograde equatorial

struct ConstellationPlane {
    double altitude_km = 750.0;
    int n_satellites = 70;
    // Phase of each satellite at t=0, radians. Empty means evenly spaced with
    // satellite 0 at the ground point's zenith and successors trailing.
    std::vector<double> phase_offsets_rad{};
    PhysicalConstants constants{};

    void validate() const;
    std::vector<double> phases() const;  // resolved offsets
};

struct CoverageGeometry {
    double central_angle_deg = 0.0;  // ground-point-to-nadir half angle
    double diameter_km = 0.0;        // great-circle footprint diameter
};

// lambda = arccos(Re/(Re+h) * cos eps) - eps; diameter = 2 * Re * lambda.
CoverageGeometry coverage_geometry(double h_km, double eps_min_deg,
                                   const PhysicalConstants& constants = {});

// Maximal overhead pass duration 2*lambda / (omega_sat - omega_earth).
double visibility_window(double h_km, double eps_min_deg,
                         double omega_earth_rad_s = kEarthRotationRadS,
                         const PhysicalConstants& constants = {});

struct AssistanceInfo {
    double t_stop_serving_s = 0.0;
    double t_start_serving_s = 0.0;  // next satellite
    double ta_to_target_ms = 0.0;    // service-link round trip at handover
    double serving_elevation_deg = 0.0;
    double target_elevation_deg = 0.0;
};

struct ServingInterval {
    int sat_id = 0;
    double t_start_s = 0.0;
    double t_stop_s = 0.0;
};

struct CoverageGap {
    double t_start_s = 0.0;
    double t_stop_s = 0.0;
};

struct ScheduleResult {
    std::vector<ServingInterval> intervals;  // time ordered
    std::vector<AssistanceInfo> handovers;   // one per consecutive interval pair
    std::vector<CoverageGap> gaps;           // uncovered spans inside [0, horizon]
    bool gap_free = false;
};

// Serving intervals of every satellite pass over a ground point on the track
// (ground_point_angle_rad along the plane), clipped to [0, horizon_s]. Gaps
// are reported rather than papered over with fabricated assistance entries.
ScheduleResult switch_schedule(const ConstellationPlane& plane, double eps_min_deg,
                               double ground_point_angle_rad, double horizon_s,
                               double omega_earth_rad_s = kEarthRotationRadS);

struct CellCandidate {
    int cell_id = 0;
    double rsrp_db = 0.0;
    AssistanceInfo assistance{};
};

enum class SelectionRule { SingleCandidate, RsrpArgmax, LongestRemainingService };

struct SelectionDecision {
    int cell_id = 0;
    SelectionRule rule = SelectionRule::RsrpArgmax;
};

// Strongest cell when the top-two RSRP gap reaches the hysteresis; otherwise
// the cell with the most remaining service time. Ties break to the smaller
// cell id.
SelectionDecision select_cell_decision(const std::vector<CellCandidate>& candidates,
                                       double hysteresis_db, double now_s);
int select_cell(const std::vector<CellCandidate>& candidates, double hysteresis_db,
                double now_s);

}  // namespace ntn
