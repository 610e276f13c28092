#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "spinrelax/constants.hpp"

namespace spinrelax::solvent {

// Empirical proton number density of liquid toluene, spins/cm^3.
// Valid fit range is [150, 330] K; the form diverges at the critical
// temperature 591.8 K, so T >= 591.8 (or T <= 0) -> DomainError.
double proton_concentration_toluene(double temperature_K);
bool proton_concentration_in_range(double temperature_K);

// Empirical self-diffusion coefficient of liquid toluene, cm^2/s.
// Fit range [135, 330] K; T <= 0 -> DomainError.
double toluene_self_diffusion(double temperature_K);
bool toluene_self_diffusion_in_range(double temperature_K);

// Stokes-Einstein translational diffusion, m^2/s.
// Any nonpositive argument -> DomainError.
double stokes_einstein(double temperature_K, double radius_m, double viscosity_Pa_s);

// One knot of a tabulated temperature-dependent quantity. Values are
// interpolated log-linearly (ln value linear in T), so they must be > 0.
struct TablePoint {
    double temperature_K;
    double value;
};

// Tabulated positive quantity of temperature. Knot temperatures must be
// strictly increasing; evaluation at a knot returns the stored value exactly;
// outside the knot range the end segments extrapolate and in_range() reports
// false.
class Table {
public:
    Table() = default;
    explicit Table(std::vector<TablePoint> points);

    double evaluate(double temperature_K) const;
    bool in_range(double temperature_K) const;
    bool empty() const { return points_.empty(); }

private:
    std::vector<TablePoint> points_;   // (T, value), T strictly increasing
    std::vector<double> log_values_;
};

// Number density of magnetic nuclei in the solvent, spins/m^3.
class ConcentrationModel {
public:
    ConcentrationModel() = default;

    static ConcentrationModel toluene_protons();
    static ConcentrationModel constant(double spins_per_m3);
    static ConcentrationModel table(std::vector<TablePoint> points_per_m3);

    double spins_per_m3(double temperature_K) const;
    bool in_range(double temperature_K) const;

private:
    enum class Kind { TolueneProtons, Constant, Tabulated };
    Kind kind_ = Kind::Constant;
    double constant_ = 0.0;
    Table table_;
};

// Dynamic shear viscosity, Pa s.
class ViscosityModel {
public:
    ViscosityModel() = default;

    // eta(T) = eta0 * exp(B / (T - T0)); T <= T0 -> DomainError.
    static ViscosityModel vogel_fulcher(double eta0_Pa_s, double B_K, double T0_K);
    static ViscosityModel table(std::vector<TablePoint> points_Pa_s);

    double pascal_seconds(double temperature_K) const;
    bool in_range(double temperature_K) const;

private:
    enum class Kind { VogelFulcher, Tabulated };
    Kind kind_ = Kind::Tabulated;
    double eta0_ = 0.0, B_ = 0.0, T0_ = 0.0;
    Table table_;
};

// Translational diffusion coefficient of one partner, m^2/s.
class DiffusionModel {
public:
    DiffusionModel() = default;

    static DiffusionModel toluene_self_diffusion();
    static DiffusionModel stokes_einstein(double radius_m, ViscosityModel viscosity);
    // D(T) = D0 * exp(-T_activation / T) * exp(-(T_vft / T)^6)
    static DiffusionModel parametric(double D0_m2s, double T_activation_K, double T_vft_K);
    static DiffusionModel table(std::vector<TablePoint> points_m2s);
    static DiffusionModel constant(double D_m2s);
    // Identically zero: a partner that does not move (frozen solute).
    static DiffusionModel zero();
    // Relative diffusion of two partners is the sum of their coefficients.
    static DiffusionModel sum(std::vector<DiffusionModel> terms);

    double m2_per_s(double temperature_K) const;
    bool in_range(double temperature_K) const;
    bool is_zero() const { return kind_ == Kind::Zero; }

private:
    enum class Kind { TolueneSelf, StokesEinstein, Parametric, Tabulated, Constant, Zero, Sum };
    Kind kind_ = Kind::Constant;
    double p0_ = 0.0, p1_ = 0.0, p2_ = 0.0;
    ViscosityModel viscosity_;
    Table table_;
    std::shared_ptr<const std::vector<DiffusionModel>> terms_;
};

// One liquid component of a solvent mixture.
struct MixtureComponent {
    std::string label;
    double density_g_cm3 = 0.0;
    double molar_mass_g_mol = 0.0;
    // Magnetic nuclei per molecule, keyed by species label ("1H", "35Cl", ...).
    // Counts are per element site; isotopic abundance is applied separately.
    std::map<std::string, double> nuclei_per_molecule;
    double volume_fraction = 0.0;
};

// Number density of one nuclear species in the mixture, spins/cm^3.
// Volume fractions must sum to 1 +- 1e-9. Ideal mixing (no excess volume).
double mixture_concentration(const std::vector<MixtureComponent>& mixture,
                             const NuclearSpecies& sp);

// Mole fraction of each component, keyed by label. Output sums to 1 +- 1e-12.
std::map<std::string, double> mole_fractions(const std::vector<MixtureComponent>& mixture);

}  // namespace spinrelax::solvent
