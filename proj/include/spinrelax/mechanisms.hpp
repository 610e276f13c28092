#pragma once

#include <memory>
#include <string>
#include <vector>

#include "spinrelax/constants.hpp"
#include "spinrelax/solvent.hpp"

namespace spinrelax::mechanisms {

// Force-free hard-sphere spectral density for translational diffusion,
// normalized so J(0) = 1. Argument z = sqrt(2 omega tau_D); z < 0 or
// non-finite -> DomainError. Strictly decreasing; J ~ 81/z^4 at large z.
double spectral_density(double z);

// J evaluated at angular frequency omega (rad/s) for correlation time tau_D.
double spectral_density_at(double omega, double tau_D_s);

// Translational correlation time tau_D = 2 d^2 / D. Nonpositive -> DomainError.
double correlation_time(double closest_approach_m, double D_m2s);

// Dipolar coupling strength (16 pi / 405) (mu0/4pi)^2 gamma_e^2 gamma_n^2
// hbar^2 I(I+1), SI units m^6 s^-2 * (spins density * length^-1 * D^-1 -> rate).
double kappa_for(double gamma_n, double spin);
double kappa(const NuclearSpecies& sp);

struct RateResult {
    double r1;  // 1/T1, 1/s
    double r2;  // 1/T2, 1/s
};

// Thermally activated relaxation through a vibrational mode at energy delta:
// R1 = prefactor * exp(-delta / kB T). R2 follows R1 through a fixed ratio
// T2 = t2_ratio * T1 (2/3 for the electron-spin triplet manifold).
struct OrbachParams {
    double prefactor_per_s = 0.0;
    double delta_J = 0.0;

    static OrbachParams from_meV(double prefactor_per_s, double delta_meV);
    double delta_meV() const;
};

RateResult orbach_rates(const OrbachParams& params, double temperature_K,
                        double t2_ratio = 2.0 / 3.0);

// Relaxation of the electron by translational diffusion of solvent nuclear
// moments past the solute (force-free hard-sphere model). The relative
// diffusion coefficient is the sum of the partners' coefficients.
struct DiffusionMechanism {
    NuclearSpecies species;
    double closest_approach_m = 0.0;
    double field_T = 0.34;
    solvent::ConcentrationModel concentration;
    solvent::DiffusionModel solvent_diffusion;
    solvent::DiffusionModel solute_diffusion = solvent::DiffusionModel::zero();

    // Relative diffusion coefficient at T, m^2/s.
    double total_diffusion(double temperature_K) const;
    // True when every temperature-dependent submodel is inside its fit range.
    bool in_range(double temperature_K) const;
    void validate() const;
};

// Rates with D taken from the mechanism's own diffusion model.
RateResult diffusion_rates(const DiffusionMechanism& mech, double temperature_K);

// Rates at an explicitly supplied relative diffusion coefficient; the
// mechanism supplies geometry, field, and concentration only.
RateResult diffusion_rates_at(const DiffusionMechanism& mech, double temperature_K,
                              double D_m2s);

// One additive contribution to the total relaxation rate.
class RelaxationChannel {
public:
    static RelaxationChannel orbach(OrbachParams params, double t2_ratio = 2.0 / 3.0);
    static RelaxationChannel translational_diffusion(DiffusionMechanism mech);

    RateResult rates(double temperature_K) const;
    const std::string& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    bool is_diffusion() const { return kind_ == Kind::Diffusion; }
    const DiffusionMechanism& diffusion() const;
    const OrbachParams& orbach_params() const;
    double t2_ratio() const { return t2_ratio_; }

private:
    enum class Kind { Orbach, Diffusion };
    Kind kind_ = Kind::Orbach;
    OrbachParams orbach_{};
    double t2_ratio_ = 2.0 / 3.0;
    std::shared_ptr<const DiffusionMechanism> mech_;
    std::string label_;
};

// Total rates are the sum over channels; empty list -> InputError.
RateResult compose_channels(const std::vector<RelaxationChannel>& channels,
                            double temperature_K);

struct TimePoint {
    double temperature_K;
    double t1_s;  // infinity when the total rate is zero
    double t2_s;
};

std::vector<TimePoint> predict_times(const std::vector<RelaxationChannel>& channels,
                                     const std::vector<double>& temperatures_K);

}  // namespace spinrelax::mechanisms
