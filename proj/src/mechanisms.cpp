#include "spinrelax/mechanisms.hpp"

#include <cmath>
#include <limits>

namespace spinrelax::mechanisms {

double spectral_density(double z) {
    if (!(z >= 0.0) || !std::isfinite(z))
        throw DomainError("spectral density argument must be finite and >= 0");
    double z2 = z * z;
    double z3 = z2 * z;
    double z4 = z2 * z2;
    double num = 1.0 + (5.0 / 8.0) * z + z2 / 8.0;
    double den = 1.0 + z + z2 + z3 / 6.0 + (4.0 / 81.0) * z4 + z4 * z / 81.0 + z4 * z2 / 648.0;
    return num / den;
}

double spectral_density_at(double omega, double tau_D_s) {
    if (!(omega >= 0.0) || !std::isfinite(omega))
        throw DomainError("angular frequency must be finite and >= 0");
    if (!(tau_D_s > 0.0) || !std::isfinite(tau_D_s))
        throw DomainError("correlation time must be > 0");
    return spectral_density(std::sqrt(2.0 * omega * tau_D_s));
}

double correlation_time(double d_m, double D_m2s) {
    if (!(d_m > 0.0) || !std::isfinite(d_m))
        throw DomainError("closest approach must be > 0");
    if (!(D_m2s > 0.0) || !std::isfinite(D_m2s))
        throw DomainError("diffusion coefficient must be > 0");
    return 2.0 * d_m * d_m / D_m2s;
}

double kappa_for(double gamma_n, double spin) {
    if (!std::isfinite(gamma_n)) throw DomainError("gamma_n must be finite");
    if (!(spin >= 0.0) || !std::isfinite(spin)) throw DomainError("spin must be >= 0");
    double ge = constants::gamma_electron;
    double coupling = constants::mu0_over_4pi * ge * gamma_n * constants::hbar;
    return (16.0 * constants::pi / 405.0) * coupling * coupling * spin * (spin + 1.0);
}

double kappa(const NuclearSpecies& sp) {
    sp.validate();
    return kappa_for(sp.gamma_n, sp.spin);
}

OrbachParams OrbachParams::from_meV(double prefactor_per_s, double delta_meV) {
    OrbachParams p;
    p.prefactor_per_s = prefactor_per_s;
    p.delta_J = units::convert_energy(delta_meV, units::EnergyUnit::MilliElectronVolt,
                                      units::EnergyUnit::Joule);
    return p;
}

double OrbachParams::delta_meV() const {
    return units::convert_energy(delta_J, units::EnergyUnit::Joule,
                                 units::EnergyUnit::MilliElectronVolt);
}

RateResult orbach_rates(const OrbachParams& params, double T, double t2_ratio) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("temperature must be > 0 K");
    if (!(params.prefactor_per_s > 0.0))
        throw DomainError("thermally activated prefactor must be > 0");
    if (!(params.delta_J > 0.0)) throw DomainError("activation energy must be > 0");
    if (!(t2_ratio > 0.0 && t2_ratio <= 1.0)) throw DomainError("T2/T1 ratio must be in (0, 1]");
    double r1 = params.prefactor_per_s * std::exp(-params.delta_J / (constants::k_boltzmann * T));
    return {r1, r1 / t2_ratio};
}

double DiffusionMechanism::total_diffusion(double T) const {
    return solvent_diffusion.m2_per_s(T) + solute_diffusion.m2_per_s(T);
}

bool DiffusionMechanism::in_range(double T) const {
    return concentration.in_range(T) && solvent_diffusion.in_range(T) &&
           solute_diffusion.in_range(T);
}

void DiffusionMechanism::validate() const {
    species.validate();
    if (!(closest_approach_m > 0.0) || !std::isfinite(closest_approach_m))
        throw InputError("diffusion mechanism: closest approach must be > 0");
    if (!(field_T > 0.0) || !std::isfinite(field_T))
        throw InputError("diffusion mechanism: field must be > 0");
}

RateResult diffusion_rates_at(const DiffusionMechanism& mech, double T, double D) {
    mech.validate();
    if (!(D > 0.0) || !std::isfinite(D))
        throw DomainError("diffusion coefficient must be > 0");
    double tau = correlation_time(mech.closest_approach_m, D);
    ZeemanFrequencies w = zeeman_frequencies(mech.field_T, mech.species);
    double c = mech.concentration.spins_per_m3(T);
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("concentration must be > 0");
    double strength = kappa(mech.species) * c / (mech.closest_approach_m * D);
    double j_e = spectral_density_at(w.omega_e, tau);
    double j_n = spectral_density_at(w.omega_n, tau);
    // J(0) = 1 exactly in this normalization.
    return {strength * 2.0 * 10.0 * j_e, strength * (4.0 + 10.0 * j_e + 6.0 * j_n)};
}

RateResult diffusion_rates(const DiffusionMechanism& mech, double T) {
    return diffusion_rates_at(mech, T, mech.total_diffusion(T));
}

RelaxationChannel RelaxationChannel::orbach(OrbachParams params, double t2_ratio) {
    if (!(t2_ratio > 0.0 && t2_ratio <= 1.0)) throw InputError("T2/T1 ratio must be in (0, 1]");
    RelaxationChannel ch;
    ch.kind_ = Kind::Orbach;
    ch.orbach_ = params;
    ch.t2_ratio_ = t2_ratio;
    ch.label_ = "orbach";
    return ch;
}

RelaxationChannel RelaxationChannel::translational_diffusion(DiffusionMechanism mech) {
    mech.validate();
    RelaxationChannel ch;
    ch.kind_ = Kind::Diffusion;
    ch.mech_ = std::make_shared<const DiffusionMechanism>(std::move(mech));
    ch.label_ = "diffusion_" + ch.mech_->species.label;
    return ch;
}

RateResult RelaxationChannel::rates(double T) const {
    switch (kind_) {
        case Kind::Orbach: return orbach_rates(orbach_, T, t2_ratio_);
        case Kind::Diffusion: return diffusion_rates(*mech_, T);
    }
    throw DomainError("relaxation channel not configured");
}

const DiffusionMechanism& RelaxationChannel::diffusion() const {
    if (kind_ != Kind::Diffusion) throw DomainError("channel has no diffusion mechanism");
    return *mech_;
}

const OrbachParams& RelaxationChannel::orbach_params() const {
    if (kind_ != Kind::Orbach) throw DomainError("channel has no activation parameters");
    return orbach_;
}

RateResult compose_channels(const std::vector<RelaxationChannel>& channels, double T) {
    if (channels.empty()) throw InputError("at least one relaxation channel required");
    RateResult total{0.0, 0.0};
    for (const auto& ch : channels) {
        RateResult r = ch.rates(T);
        total.r1 += r.r1;
        total.r2 += r.r2;
    }
    return total;
}

std::vector<TimePoint> predict_times(const std::vector<RelaxationChannel>& channels,
                                     const std::vector<double>& temperatures) {
    std::vector<TimePoint> out;
    out.reserve(temperatures.size());
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (double T : temperatures) {
        RateResult r = compose_channels(channels, T);
        out.push_back({T, r.r1 > 0.0 ? 1.0 / r.r1 : inf, r.r2 > 0.0 ? 1.0 / r.r2 : inf});
    }
    return out;
}

}  // namespace spinrelax::mechanisms
