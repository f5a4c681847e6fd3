#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <ntn/orbit.hpp>

using namespace ntn;
using doctest::Approx;

namespace {

OrbitScenario orbit(double altitude_km, double min_elevation_deg = 10.0) {
    OrbitScenario s;
    s.altitude_km = altitude_km;
    s.min_elevation_deg = min_elevation_deg;
    return s;
}

}  // namespace

TEST_CASE("slant range at the reference geometries") {
    CHECK(slant_range(orbit(600), 10.0) == Approx(1931.63535891).epsilon(1e-10));
    CHECK(slant_range(orbit(1200), 10.0) == Approx(3130.94216519).epsilon(1e-10));
    CHECK(slant_range(orbit(35786), 10.0) == Approx(40581.1788146).epsilon(1e-10));
    // straight overhead the slant range collapses to the altitude
    CHECK(slant_range(orbit(600), 90.0) == Approx(600.0).epsilon(1e-12));
    CHECK(slant_range(orbit(35786), 90.0) == Approx(35786.0).epsilon(1e-12));
}

TEST_CASE("slant range shrinks monotonically as elevation rises") {
    for (double h : {600.0, 1200.0, 35786.0}) {
        double prev = slant_range(orbit(h), 0.0);
        for (int el = 1; el <= 90; ++el) {
            const double d = slant_range(orbit(h), static_cast<double>(el));
            CHECK(d < prev);
            prev = d;
        }
    }
}

TEST_CASE("one-way delay and transparent round trip at the band edges") {
    CHECK(one_way_delay_ms(orbit(600), 90.0) == Approx(2.00138457119).epsilon(1e-10));
    CHECK(one_way_delay_ms(orbit(600), 10.0) == Approx(6.44324200747).epsilon(1e-10));

    CHECK(rtt_transparent(orbit(600), 90.0) == Approx(8.00553828476).epsilon(1e-10));
    CHECK(rtt_transparent(orbit(600), 10.0) == Approx(25.7729680299).epsilon(1e-10));
    CHECK(rtt_transparent(orbit(1200), 90.0) == Approx(16.0110765695).epsilon(1e-10));
    CHECK(rtt_transparent(orbit(1200), 10.0) == Approx(41.774795618).epsilon(1e-10));
    CHECK(rtt_transparent(orbit(35786), 90.0) == Approx(477.47698843).epsilon(1e-10));
    CHECK(rtt_transparent(orbit(35786), 10.0) == Approx(541.456967735).epsilon(1e-10));
}

TEST_CASE("transparent round trip doubles the bent-pipe path") {
    // with a mirrored feeder leg the rtt is exactly four one-way delays
    for (double el : {10.0, 30.0, 55.0, 90.0}) {
        CHECK(rtt_transparent(orbit(600), el) ==
              Approx(4.0 * one_way_delay_ms(orbit(600), el)).epsilon(1e-14));
    }

    // an explicit feeder distance replaces the mirrored leg
    OrbitScenario s = orbit(600);
    s.feeder_equals_service = false;
    s.feeder_distance_km = 1000.0;
    const double d = slant_range(s, 40.0);
    CHECK(rtt_transparent(s, 40.0) ==
          Approx(2.0 * (d + 1000.0) * 1.0e6 / s.constants.c).epsilon(1e-14));
}

TEST_CASE("halving the speed of light doubles every delay") {
    OrbitScenario slow = orbit(600);
    slow.constants.c /= 2.0;
    for (double el : {10.0, 45.0, 90.0}) {
        CHECK(one_way_delay_ms(slow, el) ==
              Approx(2.0 * one_way_delay_ms(orbit(600), el)).epsilon(1e-14));
        CHECK(rtt_transparent(slow, el) ==
              Approx(2.0 * rtt_transparent(orbit(600), el)).epsilon(1e-14));
    }
}

TEST_CASE("circular orbit velocity and period") {
    CHECK(orbital_velocity(orbit(600)) == Approx(7.56173313687).epsilon(1e-10));
    CHECK(orbital_velocity(orbit(750)) == Approx(7.48166735508).epsilon(1e-10));
    CHECK(orbital_period_min(orbit(600)) == Approx(96.5389018266).epsilon(1e-10));
    CHECK(orbital_period_min(orbit(35786)) == Approx(1435.70190556).epsilon(1e-10));

    // higher orbits are slower but take longer to complete
    CHECK(orbital_velocity(orbit(1200)) < orbital_velocity(orbit(600)));
    CHECK(orbital_period_min(orbit(1200)) > orbital_period_min(orbit(600)));
}

TEST_CASE("worst-case Doppler at the horizon") {
    CHECK(max_doppler_ppm(orbit(600)) == Approx(24.4701174753).epsilon(1e-10));
    CHECK(max_doppler_ppm(orbit(1200)) == Approx(21.6724557902).epsilon(1e-10));

    // cross-check against the closed form assembled by hand
    const OrbitScenario s = orbit(600);
    const double r = s.constants.re + s.altitude_km;
    const double expected = (orbital_velocity(s) + s.constants.v_eq) /
                            (s.constants.c * 1.0e-3) * (s.constants.re / r) * 1.0e6;
    CHECK(max_doppler_ppm(s) == Approx(expected).epsilon(1e-14));
}

TEST_CASE("an ideal geostationary orbit reports zero Doppler") {
    CHECK(max_doppler_ppm(orbit(35786)) == 0.0);
    // a slightly detuned altitude falls outside the stationary band again
    CHECK(max_doppler_ppm(orbit(36500)) > 0.0);
    CHECK(max_doppler_ppm(orbit(35000)) > 0.0);
}

TEST_CASE("pass propagation produces a symmetric overhead pass") {
    const auto pass = propagate_pass(orbit(600), true, 1.0);
    const auto stats = analyze_pass(pass);

    CHECK(pass.size() == 547);
    CHECK(pass.size() % 2 == 1);
    CHECK(stats.duration_s == Approx(546.0));
    CHECK(stats.zenith_index == pass.size() / 2);
    CHECK(stats.max_elevation_deg == Approx(90.0).epsilon(1e-12));

    // the zenith sample carries the exact Doppler zero crossing
    CHECK(std::abs(pass[stats.zenith_index].doppler_ppm) < 1e-12);

    // elevation is mirrored and Doppler antisymmetric about the zenith
    const std::size_t n = pass.size();
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(pass[i].elevation_deg == Approx(pass[n - 1 - i].elevation_deg).epsilon(1e-9));
        CHECK(pass[i].doppler_ppm == Approx(-pass[n - 1 - i].doppler_ppm).epsilon(1e-9));
    }

    // approaching first (positive shift), receding after culmination
    CHECK(pass.front().doppler_ppm > 0.0);
    CHECK(pass.back().doppler_ppm < 0.0);
    CHECK(pass.front().doppler_ppm == Approx(21.1730892539).epsilon(1e-9));

    // the pass never dips below the configured mask and starts near it
    for (const PassSample& s : pass) CHECK(s.elevation_deg >= 10.0 - 1e-9);
    CHECK(pass.front().elevation_deg == Approx(10.0168653404).epsilon(1e-9));

    // per-sample delay columns stay consistent with the closed forms
    for (std::size_t i = 0; i < n; i += 37) {
        CHECK(pass[i].one_way_delay_ms ==
              Approx(pass[i].slant_range_km * 1.0e6 / 299792458.0).epsilon(1e-14));
        CHECK(pass[i].rtt_ms == Approx(4.0 * pass[i].one_way_delay_ms).epsilon(1e-14));
    }
}

TEST_CASE("Doppler rate maxima from the sampled series") {
    const auto rot600 = analyze_pass(propagate_pass(orbit(600), true, 1.0));
    CHECK(rot600.max_doppler_rate_ppm_s == Approx(0.252720281101).epsilon(1e-10));

    const auto rot1200 = analyze_pass(propagate_pass(orbit(1200), true, 1.0));
    CHECK(rot1200.max_doppler_rate_ppm_s == Approx(0.105102417251).epsilon(1e-10));

    // turning the ground-point motion off speeds up the geometry
    const auto inertial = analyze_pass(propagate_pass(orbit(600), false, 1.0));
    CHECK(inertial.max_doppler_rate_ppm_s == Approx(0.290503692964).epsilon(1e-10));
    CHECK(inertial.max_doppler_rate_ppm_s > rot600.max_doppler_rate_ppm_s);

    // the finite-difference estimate is already converged at 1 s steps
    const auto fine = analyze_pass(propagate_pass(orbit(600), true, 0.5));
    CHECK(std::abs(fine.max_doppler_rate_ppm_s - rot600.max_doppler_rate_ppm_s) /
              fine.max_doppler_rate_ppm_s <
          2e-3);
}

TEST_CASE("pass propagation rejects degenerate requests") {
    CHECK_THROWS_AS(propagate_pass(orbit(35786), true, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(propagate_pass(orbit(600), true, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(propagate_pass(orbit(600), true, -1.0), std::invalid_argument);
    // a step so coarse that fewer than 10 samples remain
    CHECK_THROWS_AS(propagate_pass(orbit(600), true, 100.0), std::invalid_argument);
    CHECK_THROWS_AS(analyze_pass({}), std::invalid_argument);
}

TEST_CASE("scenario validation") {
    CHECK_THROWS_AS(slant_range(orbit(-1.0), 10.0), std::invalid_argument);
    CHECK_THROWS_AS(slant_range(orbit(600, -2.0), 10.0), std::invalid_argument);
    CHECK_THROWS_AS(slant_range(orbit(600, 90.0), 10.0), std::invalid_argument);
    CHECK_THROWS_AS(slant_range(orbit(600), 91.0), std::invalid_argument);
    CHECK_THROWS_AS(slant_range(orbit(600), -0.5), std::invalid_argument);

    OrbitScenario s = orbit(600);
    s.feeder_equals_service = false;  // no explicit feeder distance given
    CHECK_THROWS_AS(rtt_transparent(s, 10.0), std::invalid_argument);

    s.feeder_distance_km = -5.0;
    CHECK_THROWS_AS(rtt_transparent(s, 10.0), std::invalid_argument);

    OrbitScenario bad = orbit(600);
    bad.constants.c = 0.0;
    CHECK_THROWS_AS(slant_range(bad, 10.0), std::invalid_argument);
}
