#pragma once

#include <stdexcept>

namespace ntn {

// Physical constants used by the geometry and delay calculations.
// Units are chosen to match how the quantities are consumed: the speed of
// light stays in m/s (delay math converts once), everything orbital is in km.
struct PhysicalConstants {
    double c = 299792458.0;     // speed of light, m/s
    double re = 6371.0;         // mean Earth radius, km
    double mu = 398600.4418;    // geocentric gravitational parameter, km^3/s^2
    double v_eq = 0.4651;       // Earth equatorial rotation speed, km/s

    void validate() const {
        if (c <= 0.0 || re <= 0.0 || mu <= 0.0 || v_eq <= 0.0)
            throw std::invalid_argument("PhysicalConstants: all fields must be strictly positive");
    }
};

// dB value of -10*log10(k) for Boltzmann's constant k = 1.380649e-23 J/K.
// Kept as a fixed literal so link budgets are reproducible to the digit.
inline constexpr double kBoltzmannTermDb = 228.601;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace ntn
