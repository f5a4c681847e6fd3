#include "ntn/sync.hpp"

#include <algorithm>
#include <cmath>

#include "ntn/constants.hpp"

namespace ntn {

namespace {

double norm(const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace

void EphemerisRecord::validate(double earth_radius_km) const {
    if (!(norm(position_km) > earth_radius_km))
        throw std::invalid_argument("EphemerisRecord: position must be above the surface");
    for (double v : velocity_km_s)
        if (!std::isfinite(v))
            throw std::invalid_argument("EphemerisRecord: velocity must be finite");
}

void SyncLimits::validate() const {
    if (!(prach_cp_us > 0.0) || !(prach_scs_hz > 0.0) || !(carrier_hz > 0.0))
        throw std::invalid_argument("SyncLimits: all fields must be positive");
}

Precompensation precompensation(const UEState& ue, const EphemerisRecord& eph,
                                const SyncLimits& limits,
                                double common_feeder_delay_ms,
                                double t_request_s,
                                double validity_window_s) {
    limits.validate();
    const PhysicalConstants constants{};
    eph.validate(constants.re);
    if (std::abs(t_request_s - eph.epoch_s) > validity_window_s)
        throw StaleEphemerisError("ephemeris is stale: epoch " +
                                  std::to_string(eph.epoch_s) + " s vs request " +
                                  std::to_string(t_request_s) + " s");

    const std::array<double, 3> los = {eph.position_km[0] - ue.position_km[0],
                                       eph.position_km[1] - ue.position_km[1],
                                       eph.position_km[2] - ue.position_km[2]};
    const double range_km = norm(los);
    if (!(range_km > 0.0))
        throw std::invalid_argument("precompensation: UE coincides with satellite");
    const double range_rate_km_s = dot(eph.velocity_km_s, los) / range_km;

    Precompensation out;
    out.ta_ms = 2.0 * range_km * 1.0e6 / constants.c + common_feeder_delay_ms;
    // Offset applied to the UL carrier; the satellite then observes the
    // nominal frequency (first-order Doppler model).
    out.freq_offset_hz =
        range_rate_km_s / (constants.c * 1.0e-3) * limits.carrier_hz;
    return out;
}

ResidualVerdict validate_residuals(double timing_residual_us, double cfo_residual_hz,
                                   const SyncLimits& limits) {
    limits.validate();
    ResidualVerdict verdict;
    verdict.timing_ok = std::abs(timing_residual_us) < limits.prach_cp_us;
    verdict.cfo_ok = std::abs(cfo_residual_hz) < limits.max_cfo_hz();
    return verdict;
}

TaSimResult ta_maintenance_sim(double drift_us_per_s, double error_budget_us,
                               double duration_s, TaMaintenanceMode mode,
                               double recompute_period_s) {
    if (!(error_budget_us > 0.0) || !(duration_s > 0.0))
        throw std::invalid_argument("ta_maintenance_sim: budget and duration must be > 0");
    if (drift_us_per_s < 0.0)
        throw std::invalid_argument("ta_maintenance_sim: drift must be >= 0");
    if (!(recompute_period_s > 0.0))
        throw std::invalid_argument("ta_maintenance_sim: recompute period must be > 0");

    TaSimResult result;

    // Correction instants: network commands fire when the error reaches the
    // budget (interval budget/drift), with a final top-up at end of window;
    // autonomous recomputations fire on the recompute grid and count as zero
    // commands.
    const bool network = mode == TaMaintenanceMode::NetworkCommands;
    std::vector<double> corrections;
    if (drift_us_per_s > 0.0 && network) {
        const double interval_s = error_budget_us / drift_us_per_s;
        const double tol = 1.0e-9 * std::max(1.0, duration_s);
        for (double t = interval_s; t < duration_s + tol; t += interval_s)
            corrections.push_back(std::min(t, duration_s));
        if (corrections.empty() || corrections.back() < duration_s - tol)
            corrections.push_back(duration_s);  // final top-up
        result.commands_sent = static_cast<int>(corrections.size());
        result.max_error_us = std::min(error_budget_us, drift_us_per_s * duration_s);
    } else if (drift_us_per_s > 0.0) {
        const double tol = 1.0e-9 * std::max(1.0, duration_s);
        for (double t = recompute_period_s; t < duration_s + tol; t += recompute_period_s)
            corrections.push_back(std::min(t, duration_s));
        result.commands_sent = 0;
        result.max_error_us = drift_us_per_s * std::min(recompute_period_s, duration_s);
    } else {
        result.commands_sent = 0;
        result.max_error_us = 0.0;
    }

    // Emit a 1 Hz sample grid merged with the correction instants.
    std::size_t next_correction = 0;
    double last_correction_t = 0.0;
    auto emit = [&](double t) {
        bool corrected = false;
        while (next_correction < corrections.size() &&
               corrections[next_correction] <= t + 1.0e-12) {
            last_correction_t = corrections[next_correction];
            ++next_correction;
            corrected = std::abs(t - last_correction_t) < 1.0e-9;
        }
        TaSimSample sample;
        sample.t_s = t;
        sample.error_us = drift_us_per_s * (t - last_correction_t);
        sample.command_issued = corrected && network;
        result.trace.push_back(sample);
    };
    const auto whole_seconds = static_cast<std::size_t>(std::floor(duration_s));
    double prev = -1.0;
    for (std::size_t i = 0; i <= whole_seconds; ++i) {
        double t = static_cast<double>(i);
        // interleave any correction instants that fall strictly before t
        while (next_correction < corrections.size() &&
               corrections[next_correction] < t - 1.0e-12) {
            emit(corrections[next_correction]);
        }
        emit(t);
        prev = t;
    }
    if (duration_s > prev + 1.0e-12) emit(duration_s);
    return result;
}

}  // namespace ntn
