#include "spinrelax/solvent.hpp"

#include <algorithm>
#include <cmath>

namespace spinrelax::solvent {

namespace {

constexpr double toluene_critical_K = 591.8;

void require_finite_temperature(double T) {
    if (!std::isfinite(T)) throw DomainError("temperature must be finite");
}

}  // namespace

double proton_concentration_toluene(double T) {
    require_finite_temperature(T);
    if (T <= 0.0) throw DomainError("temperature must be > 0 K");
    if (T >= toluene_critical_K)
        throw DomainError("toluene proton concentration undefined at or above 591.8 K");
    // Rackett-type density correlation recast as proton count.
    double exponent = -(1.0 + std::pow(1.0 - T / toluene_critical_K, 0.2878));
    return 4.089e21 * std::pow(0.26655, exponent);
}

bool proton_concentration_in_range(double T) { return T >= 150.0 && T <= 330.0; }

double toluene_self_diffusion(double T) {
    require_finite_temperature(T);
    if (T <= 0.0) throw DomainError("temperature must be > 0 K");
    double arrhenius = std::exp(-1000.0 / T);
    double supercooled = std::exp(-std::pow(190.0 / T, 6.0));
    return 6.1e-4 * arrhenius * supercooled;
}

bool toluene_self_diffusion_in_range(double T) { return T >= 135.0 && T <= 330.0; }

double stokes_einstein(double T, double radius_m, double viscosity_Pa_s) {
    require_finite_temperature(T);
    if (T <= 0.0) throw DomainError("temperature must be > 0 K");
    if (!(radius_m > 0.0)) throw DomainError("hydrodynamic radius must be > 0");
    if (!(viscosity_Pa_s > 0.0)) throw DomainError("viscosity must be > 0");
    return constants::k_boltzmann * T / (6.0 * constants::pi * radius_m * viscosity_Pa_s);
}

Table::Table(std::vector<TablePoint> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw InputError("table needs at least 2 points");
    log_values_.reserve(points_.size());
    for (size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!std::isfinite(p.temperature_K) || !std::isfinite(p.value))
            throw InputError("table entries must be finite");
        if (!(p.value > 0.0)) throw InputError("table values must be > 0");
        if (i > 0 && !(p.temperature_K > points_[i - 1].temperature_K))
            throw InputError("table temperatures must be strictly increasing");
        log_values_.push_back(std::log(p.value));
    }
}

double Table::evaluate(double T) const {
    require_finite_temperature(T);
    if (points_.empty()) throw DomainError("empty table");
    // Exact hit returns the stored value, not exp(log()).
    for (size_t i = 0; i < points_.size(); ++i)
        if (points_[i].temperature_K == T) return points_[i].value;
    // Segment index; end segments extrapolate.
    size_t hi = 1;
    while (hi + 1 < points_.size() && points_[hi].temperature_K < T) ++hi;
    size_t lo = hi - 1;
    double t0 = points_[lo].temperature_K, t1 = points_[hi].temperature_K;
    double f = (T - t0) / (t1 - t0);
    return std::exp(log_values_[lo] + f * (log_values_[hi] - log_values_[lo]));
}

bool Table::in_range(double T) const {
    if (points_.empty()) return false;
    return T >= points_.front().temperature_K && T <= points_.back().temperature_K;
}

ConcentrationModel ConcentrationModel::toluene_protons() {
    ConcentrationModel m;
    m.kind_ = Kind::TolueneProtons;
    return m;
}

ConcentrationModel ConcentrationModel::constant(double spins_per_m3) {
    if (!(spins_per_m3 > 0.0) || !std::isfinite(spins_per_m3))
        throw InputError("constant concentration must be > 0");
    ConcentrationModel m;
    m.kind_ = Kind::Constant;
    m.constant_ = spins_per_m3;
    return m;
}

ConcentrationModel ConcentrationModel::table(std::vector<TablePoint> points) {
    ConcentrationModel m;
    m.kind_ = Kind::Tabulated;
    m.table_ = Table(std::move(points));
    return m;
}

double ConcentrationModel::spins_per_m3(double T) const {
    switch (kind_) {
        case Kind::TolueneProtons:
            return proton_concentration_toluene(T) * units::per_cm3_to_per_m3;
        case Kind::Constant:
            if (constant_ <= 0.0) throw DomainError("concentration model not configured");
            return constant_;
        case Kind::Tabulated:
            return table_.evaluate(T);
    }
    throw DomainError("concentration model not configured");
}

bool ConcentrationModel::in_range(double T) const {
    switch (kind_) {
        case Kind::TolueneProtons: return proton_concentration_in_range(T);
        case Kind::Constant: return true;
        case Kind::Tabulated: return table_.in_range(T);
    }
    return false;
}

ViscosityModel ViscosityModel::vogel_fulcher(double eta0, double B, double T0) {
    if (!(eta0 > 0.0)) throw InputError("Vogel-Fulcher eta0 must be > 0");
    if (!(B > 0.0)) throw InputError("Vogel-Fulcher B must be > 0");
    if (!(T0 >= 0.0)) throw InputError("Vogel-Fulcher T0 must be >= 0");
    ViscosityModel m;
    m.kind_ = Kind::VogelFulcher;
    m.eta0_ = eta0;
    m.B_ = B;
    m.T0_ = T0;
    return m;
}

ViscosityModel ViscosityModel::table(std::vector<TablePoint> points) {
    ViscosityModel m;
    m.kind_ = Kind::Tabulated;
    m.table_ = Table(std::move(points));
    return m;
}

double ViscosityModel::pascal_seconds(double T) const {
    require_finite_temperature(T);
    switch (kind_) {
        case Kind::VogelFulcher:
            if (T <= T0_)
                throw DomainError("Vogel-Fulcher viscosity undefined at or below T0");
            return eta0_ * std::exp(B_ / (T - T0_));
        case Kind::Tabulated:
            return table_.evaluate(T);
    }
    throw DomainError("viscosity model not configured");
}

bool ViscosityModel::in_range(double T) const {
    switch (kind_) {
        case Kind::VogelFulcher: return T > T0_;
        case Kind::Tabulated: return table_.in_range(T);
    }
    return false;
}

DiffusionModel DiffusionModel::toluene_self_diffusion() {
    DiffusionModel m;
    m.kind_ = Kind::TolueneSelf;
    return m;
}

DiffusionModel DiffusionModel::stokes_einstein(double radius_m, ViscosityModel viscosity) {
    if (!(radius_m > 0.0)) throw InputError("hydrodynamic radius must be > 0");
    DiffusionModel m;
    m.kind_ = Kind::StokesEinstein;
    m.p0_ = radius_m;
    m.viscosity_ = std::move(viscosity);
    return m;
}

DiffusionModel DiffusionModel::parametric(double D0, double T_activation, double T_vft) {
    if (!(D0 > 0.0)) throw InputError("parametric diffusion D0 must be > 0");
    if (!(T_activation >= 0.0)) throw InputError("parametric diffusion T_activation must be >= 0");
    if (!(T_vft >= 0.0)) throw InputError("parametric diffusion T_vft must be >= 0");
    DiffusionModel m;
    m.kind_ = Kind::Parametric;
    m.p0_ = D0;
    m.p1_ = T_activation;
    m.p2_ = T_vft;
    return m;
}

DiffusionModel DiffusionModel::table(std::vector<TablePoint> points) {
    DiffusionModel m;
    m.kind_ = Kind::Tabulated;
    m.table_ = Table(std::move(points));
    return m;
}

DiffusionModel DiffusionModel::constant(double D) {
    if (!(D > 0.0) || !std::isfinite(D)) throw InputError("constant diffusion must be > 0");
    DiffusionModel m;
    m.kind_ = Kind::Constant;
    m.p0_ = D;
    return m;
}

DiffusionModel DiffusionModel::zero() {
    DiffusionModel m;
    m.kind_ = Kind::Zero;
    return m;
}

DiffusionModel DiffusionModel::sum(std::vector<DiffusionModel> terms) {
    if (terms.empty()) throw InputError("diffusion sum needs at least one term");
    DiffusionModel m;
    m.kind_ = Kind::Sum;
    m.terms_ = std::make_shared<const std::vector<DiffusionModel>>(std::move(terms));
    return m;
}

double DiffusionModel::m2_per_s(double T) const {
    require_finite_temperature(T);
    switch (kind_) {
        case Kind::TolueneSelf:
            return solvent::toluene_self_diffusion(T) * units::cm2s_to_m2s;
        case Kind::StokesEinstein:
            return solvent::stokes_einstein(T, p0_, viscosity_.pascal_seconds(T));
        case Kind::Parametric: {
            if (T <= 0.0) throw DomainError("temperature must be > 0 K");
            return p0_ * std::exp(-p1_ / T) * std::exp(-std::pow(p2_ / T, 6.0));
        }
        case Kind::Tabulated:
            return table_.evaluate(T);
        case Kind::Constant:
            if (p0_ <= 0.0) throw DomainError("diffusion model not configured");
            return p0_;
        case Kind::Zero:
            return 0.0;
        case Kind::Sum: {
            double total = 0.0;
            for (const auto& term : *terms_) total += term.m2_per_s(T);
            return total;
        }
    }
    throw DomainError("diffusion model not configured");
}

bool DiffusionModel::in_range(double T) const {
    switch (kind_) {
        case Kind::TolueneSelf: return toluene_self_diffusion_in_range(T);
        case Kind::StokesEinstein: return viscosity_.in_range(T);
        case Kind::Parametric: return T > 0.0;
        case Kind::Tabulated: return table_.in_range(T);
        case Kind::Constant: return true;
        case Kind::Zero: return true;
        case Kind::Sum:
            return std::all_of(terms_->begin(), terms_->end(),
                               [T](const DiffusionModel& m) { return m.in_range(T); });
    }
    return false;
}

namespace {

void validate_mixture(const std::vector<MixtureComponent>& mixture) {
    if (mixture.empty()) throw InputError("mixture needs at least one component");
    double total = 0.0;
    for (const auto& comp : mixture) {
        if (!(comp.density_g_cm3 > 0.0))
            throw InputError("mixture component '" + comp.label + "': density must be > 0");
        if (!(comp.molar_mass_g_mol > 0.0))
            throw InputError("mixture component '" + comp.label + "': molar mass must be > 0");
        if (!(comp.volume_fraction >= 0.0))
            throw InputError("mixture component '" + comp.label +
                             "': volume fraction must be >= 0");
        for (const auto& [label, count] : comp.nuclei_per_molecule)
            if (!(count >= 0.0))
                throw InputError("mixture component '" + comp.label + "': nucleus count for " +
                                 label + " must be >= 0");
        total += comp.volume_fraction;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw InputError("mixture volume fractions must sum to 1");
}

}  // namespace

double mixture_concentration(const std::vector<MixtureComponent>& mixture,
                             const NuclearSpecies& sp) {
    validate_mixture(mixture);
    sp.validate();
    double c = 0.0;  // spins/cm^3
    for (const auto& comp : mixture) {
        auto it = comp.nuclei_per_molecule.find(sp.label);
        if (it == comp.nuclei_per_molecule.end()) continue;
        double molecules_per_cm3 =
            comp.density_g_cm3 / comp.molar_mass_g_mol * constants::avogadro;
        c += comp.volume_fraction * molecules_per_cm3 * it->second * sp.abundance;
    }
    return c;
}

std::map<std::string, double> mole_fractions(const std::vector<MixtureComponent>& mixture) {
    validate_mixture(mixture);
    std::map<std::string, double> moles;
    double total = 0.0;
    for (const auto& comp : mixture) {
        double n = comp.volume_fraction * comp.density_g_cm3 / comp.molar_mass_g_mol;
        moles[comp.label] += n;
        total += n;
    }
    if (!(total > 0.0)) throw InputError("mixture has zero total moles");
    for (auto& [label, n] : moles) n /= total;
    return moles;
}

}  // namespace spinrelax::solvent
