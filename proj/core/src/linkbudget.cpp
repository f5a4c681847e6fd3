#include "ntn/linkbudget.hpp"

#include <cmath>
#include <stdexcept>

namespace ntn {

void LinkBudgetInput::validate() const {
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("LinkBudgetInput: bandwidth_hz must be > 0");
    if (atmospheric_loss_db < 0.0 || polarization_loss_db < 0.0 ||
        scintillation_loss_db < 0.0 || shadow_fading_db < 0.0)
        throw std::invalid_argument("LinkBudgetInput: loss terms must be >= 0");
}

LinkBudgetResult snr(const LinkBudgetInput& input) {
    input.validate();
    LinkBudgetResult result;
    result.breakdown = {
        {"eirp", input.eirp_dbw},
        {"g_over_t", input.g_over_t_db_k},
        {"boltzmann", kBoltzmannTermDb},
        {"fspl", -input.fspl_db},
        {"shadow_fading", -input.shadow_fading_db},
        {"scintillation", -input.scintillation_loss_db},
        {"atmospheric", -input.atmospheric_loss_db},
        {"polarization", -input.polarization_loss_db},
        {"bandwidth", -10.0 * std::log10(input.bandwidth_hz)},
    };
    double acc = 0.0;
    for (const auto& [name, db] : result.breakdown) acc += db;
    result.snr_db = acc;
    return result;
}

double fspl(double distance_km, double carrier_hz, double c_m_s) {
    if (!(distance_km > 0.0) || !(carrier_hz > 0.0) || !(c_m_s > 0.0))
        throw std::invalid_argument("fspl: distance, carrier, and c must be > 0");
    return 20.0 * std::log10(4.0 * kPi * distance_km * 1000.0 * carrier_hz / c_m_s);
}

double fspl_inverse_km(double fspl_db, double carrier_hz, double c_m_s) {
    if (!(carrier_hz > 0.0) || !(c_m_s > 0.0))
        throw std::invalid_argument("fspl_inverse_km: carrier and c must be > 0");
    return std::pow(10.0, fspl_db / 20.0) * c_m_s / (4.0 * kPi * carrier_hz) / 1000.0;
}

std::vector<std::pair<double, double>> sub_prb_sweep(const LinkBudgetInput& base,
                                                     const std::vector<double>& bandwidths_hz) {
    if (bandwidths_hz.empty())
        throw std::invalid_argument("sub_prb_sweep: bandwidth list must be nonempty");
    std::vector<std::pair<double, double>> out;
    out.reserve(bandwidths_hz.size());
    for (double bw : bandwidths_hz) {
        LinkBudgetInput point = base;
        point.bandwidth_hz = bw;
        out.emplace_back(bw, snr(point).snr_db);
    }
    return out;
}

LinkBudgetInput budget_fixture(std::string_view name) {
    // Reference S-band (2 GHz) budgets; FSPL is carried as a fixed input so
    // each budget stands on its own without implying a particular elevation.
    LinkBudgetInput b;
    b.polarization_loss_db = 3.0;
    b.scintillation_loss_db = 2.2;
    b.shadow_fading_db = 3.0;
    if (name == "geo_dl") {
        b.eirp_dbw = 59.3;
        b.g_over_t_db_k = -31.6;
        b.bandwidth_hz = 1.08e6;
        b.fspl_db = 190.63;
        b.atmospheric_loss_db = 0.190;
    } else if (name == "geo_ul") {
        b.eirp_dbw = -7.0;
        b.g_over_t_db_k = 19.0;
        b.bandwidth_hz = 30.0e3;
        b.fspl_db = 190.63;
        b.atmospheric_loss_db = 0.190;
    } else if (name == "leo_dl") {
        b.eirp_dbw = 34.3;
        b.g_over_t_db_k = -31.6;
        b.bandwidth_hz = 1.08e6;
        b.fspl_db = 159.1;
        b.atmospheric_loss_db = 0.1;
    } else if (name == "leo_ul") {
        b.eirp_dbw = -7.0;
        b.g_over_t_db_k = 1.1;
        b.bandwidth_hz = 30.0e3;
        b.fspl_db = 159.1;
        b.atmospheric_loss_db = 0.1;
    } else {
        throw std::invalid_argument("unknown budget fixture: " + std::string(name));
    }
    return b;
}

std::vector<std::string> budget_fixture_names() {
    return {"geo_dl", "geo_ul", "leo_dl", "leo_ul"};
}

}  // namespace ntn
