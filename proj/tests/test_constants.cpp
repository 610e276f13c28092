#include <doctest.h>

#include <cmath>

#include "spinrelax/constants.hpp"
#include "spinrelax/errors.hpp"

using namespace spinrelax;
using doctest::Approx;

TEST_CASE("energy conversion matches reference values") {
    // Independently computed from CODATA 2018 exact constants.
    CHECK(units::convert_energy(1.0, "cm-1", "meV") == Approx(0.12398419843320026).epsilon(1e-14));
    CHECK(units::convert_energy(273.0, "cm-1", "meV") == Approx(33.84768617226367).epsilon(1e-14));
    CHECK(units::convert_energy(497.0, "cm-1", "meV") == Approx(61.62014662130053).epsilon(1e-14));
    CHECK(units::convert_energy(1.0, "meV", "cm-1") == Approx(8.065543937349211).epsilon(1e-14));
    CHECK(units::convert_energy(1.0, "meV", "K") == Approx(11.60451812155008).epsilon(1e-14));
    CHECK(units::convert_energy(1.0, "K", "meV") == Approx(0.08617333262145178).epsilon(1e-14));
    CHECK(units::convert_energy(1.0, "K", "cm-1") == Approx(0.6950348004861275).epsilon(1e-14));
    CHECK(units::convert_energy(60.0, "meV", "J") == Approx(9.613059803999998e-21).epsilon(1e-14));
    CHECK(units::convert_energy(1.0, "J", "J") == 1.0);
}

TEST_CASE("energy unit parsing accepts aliases and rejects junk") {
    CHECK(units::parse_energy_unit("J") == units::EnergyUnit::Joule);
    CHECK(units::parse_energy_unit("meV") == units::EnergyUnit::MilliElectronVolt);
    CHECK(units::parse_energy_unit("cm-1") == units::EnergyUnit::Wavenumber);
    CHECK(units::parse_energy_unit("cm^-1") == units::EnergyUnit::Wavenumber);
    CHECK(units::parse_energy_unit("1/cm") == units::EnergyUnit::Wavenumber);
    CHECK(units::parse_energy_unit("K") == units::EnergyUnit::Kelvin);
    CHECK_THROWS_AS(units::parse_energy_unit("eV"), InputError);
    CHECK_THROWS_AS(units::parse_energy_unit(""), InputError);
}

TEST_CASE("energy conversion round trips through every unit pair") {
    const char* names[] = {"J", "meV", "cm-1", "K"};
    const double values[] = {1e-25, 3.7e-3, 1.0, 60.0, 273.0, 1e4};
    for (const char* from : names) {
        for (const char* to : names) {
            for (double v : values) {
                double there = units::convert_energy(v, from, to);
                double back = units::convert_energy(there, to, from);
                CHECK(back == Approx(v).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("species registry holds the five built-in isotopes") {
    const auto& reg = species::registry();
    CHECK(reg.size() == 5);
    CHECK(species::find("1H") != nullptr);
    CHECK(species::find("2H") != nullptr);
    CHECK(species::find("35Cl") != nullptr);
    CHECK(species::find("37Cl") != nullptr);
    CHECK(species::find("14N") != nullptr);
    CHECK(species::find("3He") == nullptr);
    CHECK_THROWS_AS(species::require("3He"), InputError);

    // gamma ratios against tabulated values
    CHECK(constants::gamma_electron / species::proton().gamma_n ==
          Approx(658.210687898523).epsilon(1e-12));
    CHECK(species::chlorine35().gamma_n / (2.0 * constants::pi) / 1e6 ==
          Approx(4.176384861674426).epsilon(1e-12));
    CHECK(species::chlorine37().gamma_n / (2.0 * constants::pi) / 1e6 ==
          Approx(3.476325928990415).epsilon(1e-12));
    CHECK(species::proton().spin == 0.5);
    CHECK(species::deuteron().spin == 1.0);
    CHECK(species::chlorine35().spin == 1.5);
    CHECK(species::chlorine35().abundance == Approx(0.7576));
    CHECK(species::chlorine37().abundance == Approx(0.2424));
}

TEST_CASE("species validation enforces the field contracts") {
    NuclearSpecies ok{"19F", 2.518148e8, 0.5, 1.0};
    CHECK_NOTHROW(ok.validate());

    NuclearSpecies bad_spin = ok;
    bad_spin.spin = 0.3;  // not a half-integer
    CHECK_THROWS_AS(bad_spin.validate(), InputError);

    NuclearSpecies zero_spin = ok;
    zero_spin.spin = 0.0;
    CHECK_THROWS_AS(zero_spin.validate(), InputError);

    NuclearSpecies bad_abundance = ok;
    bad_abundance.abundance = 1.5;
    CHECK_THROWS_AS(bad_abundance.validate(), InputError);

    NuclearSpecies zero_gamma = ok;
    zero_gamma.gamma_n = 0.0;
    CHECK_THROWS_AS(zero_gamma.validate(), InputError);

    NuclearSpecies integer_spin = ok;
    integer_spin.spin = 3.0;
    CHECK_NOTHROW(integer_spin.validate());
}

TEST_CASE("zeeman frequencies at 0.34 T") {
    auto z = zeeman_frequencies(0.34, species::proton());
    CHECK(z.omega_e == Approx(5.986922742782e10).epsilon(1e-14));
    CHECK(z.omega_n == Approx(9.09575437296e7).epsilon(1e-14));
    CHECK(z.omega_e / z.omega_n == Approx(658.210687898523).epsilon(1e-12));

    CHECK_THROWS_AS(zeeman_frequencies(0.0, species::proton()), DomainError);
    CHECK_THROWS_AS(zeeman_frequencies(-0.1, species::proton()), DomainError);
}

TEST_CASE("zeeman frequency magnitudes are positive regardless of gamma sign") {
    NuclearSpecies negative{"15N", -2.7126e7, 0.5, 0.00364};
    auto z = zeeman_frequencies(1.0, negative);
    CHECK(z.omega_n > 0.0);
    CHECK(z.omega_n == Approx(2.7126e7).epsilon(1e-14));
}
