#include "spinrelax/constants.hpp"

#include <cmath>

namespace spinrelax {

namespace units {

namespace {

// Each unit's size in joules; conversions multiply in and divide out of the
// same constant so round trips lose at most two roundings.
double unit_in_joules(EnergyUnit unit) {
    switch (unit) {
        case EnergyUnit::Joule:
            return 1.0;
        case EnergyUnit::MilliElectronVolt:
            return 1e-3 * constants::elementary_charge;
        case EnergyUnit::Wavenumber:
            // E = h c / lambda with wavenumber in cm^-1.
            return constants::planck * constants::speed_of_light * 100.0;
        case EnergyUnit::Kelvin:
            return constants::k_boltzmann;
    }
    throw DomainError("unknown energy unit");
}

}  // namespace

EnergyUnit parse_energy_unit(const std::string& token) {
    if (token == "J") return EnergyUnit::Joule;
    if (token == "meV") return EnergyUnit::MilliElectronVolt;
    if (token == "cm-1" || token == "cm^-1" || token == "1/cm") return EnergyUnit::Wavenumber;
    if (token == "K") return EnergyUnit::Kelvin;
    throw InputError("unknown energy unit '" + token + "' (expected J, meV, cm-1, or K)");
}

std::string energy_unit_name(EnergyUnit unit) {
    switch (unit) {
        case EnergyUnit::Joule: return "J";
        case EnergyUnit::MilliElectronVolt: return "meV";
        case EnergyUnit::Wavenumber: return "cm-1";
        case EnergyUnit::Kelvin: return "K";
    }
    return "?";
}

double convert_energy(double value, EnergyUnit from, EnergyUnit to) {
    if (!std::isfinite(value)) throw DomainError("energy value must be finite");
    if (from == to) return value;
    return value * unit_in_joules(from) / unit_in_joules(to);
}

double convert_energy(double value, const std::string& from, const std::string& to) {
    return convert_energy(value, parse_energy_unit(from), parse_energy_unit(to));
}

}  // namespace units

void NuclearSpecies::validate() const {
    if (label.empty()) throw InputError("nuclear species needs a label");
    if (!(gamma_n != 0.0) || !std::isfinite(gamma_n))
        throw InputError("species '" + label + "': gamma_n must be finite and nonzero");
    if (!(spin > 0.0) || !std::isfinite(spin))
        throw InputError("species '" + label + "': spin must be > 0");
    // Spins are half-integers; 2I must be a positive integer.
    double twice = 2.0 * spin;
    if (std::abs(twice - std::round(twice)) > 1e-9)
        throw InputError("species '" + label + "': spin must be integer or half-integer");
    if (!(abundance >= 0.0 && abundance <= 1.0))
        throw InputError("species '" + label + "': abundance must be in [0, 1]");
}

namespace species {

const NuclearSpecies& proton() {
    static const NuclearSpecies sp{"1H", 2.6752218744e8, 0.5, 0.999885};
    return sp;
}

const NuclearSpecies& deuteron() {
    static const NuclearSpecies sp{"2H", 4.10662791e7, 1.0, 0.000115};
    return sp;
}

const NuclearSpecies& chlorine35() {
    static const NuclearSpecies sp{"35Cl", 2.62410e7, 1.5, 0.7576};
    return sp;
}

const NuclearSpecies& chlorine37() {
    static const NuclearSpecies sp{"37Cl", 2.18424e7, 1.5, 0.2424};
    return sp;
}

const NuclearSpecies& nitrogen14() {
    static const NuclearSpecies sp{"14N", 1.93377e7, 1.0, 0.99636};
    return sp;
}

const std::vector<NuclearSpecies>& registry() {
    static const std::vector<NuclearSpecies> all{
        proton(), deuteron(), chlorine35(), chlorine37(), nitrogen14()};
    return all;
}

const NuclearSpecies* find(const std::string& label) {
    for (const auto& sp : registry())
        if (sp.label == label) return &sp;
    return nullptr;
}

const NuclearSpecies& require(const std::string& label) {
    const NuclearSpecies* sp = find(label);
    if (!sp) {
        std::string known;
        for (const auto& s : registry()) {
            if (!known.empty()) known += ", ";
            known += s.label;
        }
        throw InputError("unknown nuclear species '" + label + "' (known: " + known + ")");
    }
    return *sp;
}

}  // namespace species

ZeemanFrequencies zeeman_frequencies(double field_T, const NuclearSpecies& sp) {
    if (!(field_T > 0.0) || !std::isfinite(field_T))
        throw DomainError("magnetic field must be > 0");
    return {constants::gamma_electron * field_T, std::abs(sp.gamma_n) * field_T};
}

}  // namespace spinrelax
