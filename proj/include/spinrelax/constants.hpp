#pragma once

#include <string>
#include <vector>

#include "spinrelax/errors.hpp"

namespace spinrelax {

// CODATA 2018 exact SI values. Everything internal runs in SI; conventional
// units (meV, cm^-1, cm^2/s, nm, us) appear only at API and CLI boundaries.
namespace constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double k_boltzmann = 1.380649e-23;           // J/K
inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double hbar = planck / (2.0 * pi);           // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double speed_of_light = 2.99792458e8;        // m/s
inline constexpr double avogadro = 6.02214076e23;             // 1/mol
inline constexpr double gamma_electron = 1.76085963023e11;    // rad s^-1 T^-1
inline constexpr double mu0_over_4pi = 1e-7;                  // T m/A

}  // namespace constants

namespace units {

inline constexpr double nm_to_m = 1e-9;
inline constexpr double us_to_s = 1e-6;
inline constexpr double cm2s_to_m2s = 1e-4;
inline constexpr double per_cm3_to_per_m3 = 1e6;

enum class EnergyUnit { Joule, MilliElectronVolt, Wavenumber, Kelvin };

// Accepts "J", "meV", "cm-1" (also "cm^-1", "1/cm"), "K". Unknown -> InputError.
EnergyUnit parse_energy_unit(const std::string& token);
std::string energy_unit_name(EnergyUnit unit);

// Hub-and-spoke conversion through joules; round trips are exact to ~2 ulp.
double convert_energy(double value, EnergyUnit from, EnergyUnit to);
double convert_energy(double value, const std::string& from, const std::string& to);

}  // namespace units

// A nuclear isotope as seen by the electron spin: gyromagnetic ratio,
// spin quantum number, and natural abundance of the isotope.
struct NuclearSpecies {
    std::string label;
    double gamma_n = 0.0;    // rad s^-1 T^-1, sign as tabulated
    double spin = 0.0;       // I, positive half-integer or integer
    double abundance = 1.0;  // isotopic fraction in [0, 1]

    // Throws InputError when a field is out of contract.
    void validate() const;
};

namespace species {

const NuclearSpecies& proton();      // 1H
const NuclearSpecies& deuteron();    // 2H
const NuclearSpecies& chlorine35();  // 35Cl
const NuclearSpecies& chlorine37();  // 37Cl
const NuclearSpecies& nitrogen14();  // 14N

const std::vector<NuclearSpecies>& registry();

// nullptr when the label is not in the registry.
const NuclearSpecies* find(const std::string& label);

// Like find() but throws InputError naming the known labels.
const NuclearSpecies& require(const std::string& label);

}  // namespace species

struct ZeemanFrequencies {
    double omega_e;  // electron angular frequency magnitude, rad/s
    double omega_n;  // nuclear angular frequency magnitude, rad/s
};

// field_T <= 0 -> DomainError.
ZeemanFrequencies zeeman_frequencies(double field_T, const NuclearSpecies& sp);

}  // namespace spinrelax
