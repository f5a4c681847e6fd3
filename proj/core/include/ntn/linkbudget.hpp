#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ntn/constants.hpp"

namespace ntn {

// SNR = EIRP + G/T - 10log10(k) - FSPL - SF - SL - AL - PL - 10log10(BW)
// with the Boltzmann term fixed at +228.601 dB (kBoltzmannTermDb).

struct LinkBudgetInput {
    double eirp_dbw = 0.0;
    double g_over_t_db_k = 0.0;
    double bandwidth_hz = 1.0;
    double fspl_db = 0.0;
    double atmospheric_loss_db = 0.0;   // AL
    double polarization_loss_db = 0.0;  // PL
    double scintillation_loss_db = 0.0; // SL
    double shadow_fading_db = 0.0;      // SF

    void validate() const;
};

struct LinkBudgetResult {
    double snr_db = 0.0;
    // Signed dB contributions in the equation's left-to-right order;
    // accumulating them in sequence reproduces snr_db bit for bit.
    std::vector<std::pair<std::string, double>> breakdown;
};

LinkBudgetResult snr(const LinkBudgetInput& input);

double fspl(double distance_km, double carrier_hz, double c_m_s = PhysicalConstants{}.c);
// Closed-form inverse of fspl() for the same carrier: distance in km.
double fspl_inverse_km(double fspl_db, double carrier_hz, double c_m_s = PhysicalConstants{}.c);

std::vector<std::pair<double, double>> sub_prb_sweep(const LinkBudgetInput& base,
                                                     const std::vector<double>& bandwidths_hz);

// Built-in parameter sets for the four reference budgets: "geo_dl", "geo_ul",
// "leo_dl", "leo_ul".
LinkBudgetInput budget_fixture(std::string_view name);
std::vector<std::string> budget_fixture_names();

}  // namespace ntn
