#pragma once

#include <span>
#include <string>

#include "spinrelax/constants.hpp"

namespace spinrelax::echodecay {

enum class EchoModelKind { Mono, Stretched, ModulatedBi };

EchoModelKind parse_echo_model(const std::string& token);  // InputError on unknown
std::string echo_model_name(EchoModelKind kind);

// Hahn-echo amplitude as a function of interpulse delay tau. All models are
// expressed against total evolution time 2*tau.
class EchoDecayModel {
public:
    // A * exp(-2 tau / T2)
    static EchoDecayModel mono(double amplitude, double t2_s);
    // A * exp(-(2 tau / T2)^n), n in [1, 3]
    static EchoDecayModel stretched(double amplitude, double t2_s, double exponent);
    // Two-component decay with nuclear-modulation beating on the second
    // component:
    //   A_i exp(-2 tau / T2_i) + A_o cos(omega_mod tau + phase) exp(-2 tau / T2_o)
    static EchoDecayModel modulated_bi(double amp_inner, double t2_inner_s,
                                       double amp_outer, double t2_outer_s,
                                       double omega_mod_rad_s, double phase_rad);

    // tau < 0 -> DomainError.
    double evaluate(double tau_s) const;

    EchoModelKind kind() const { return kind_; }
    // Parameter vector in fit order for the kind:
    //   Mono:        amplitude, t2_s
    //   Stretched:   amplitude, t2_s, exponent
    //   ModulatedBi: amp_inner, t2_inner_s, amp_outer, t2_outer_s, omega_mod, phase
    std::span<const double> parameters() const { return {params_, n_params_}; }

private:
    EchoModelKind kind_ = EchoModelKind::Mono;
    double params_[6] = {};
    size_t n_params_ = 0;
};

// Low-concentration criterion for the force-free hard-sphere treatment:
// c d^3 < 0.1 with c in spins/m^3 and d in m.
struct ConcentrationCriterion {
    double c_d3;
    bool low_concentration;
};

ConcentrationCriterion concentration_criterion(double spins_per_m3, double d_m);

// Diffusion coefficient separating slow from fast diffusion,
// D_min = 0.1 (mu0/4pi) gamma_e gamma_n hbar / d, m^2/s.
double crossover_diffusion(const NuclearSpecies& sp, double d_m);

enum class DiffusionRegime { Rigid, SlowDiffusion, FastDiffusion };

std::string regime_name(DiffusionRegime regime);

// Rigid below this fraction of D_min; motion slower than that contributes
// no echo decay on experimental timescales.
inline constexpr double rigid_fraction = 1e-6;

struct RegimeReport {
    double D_m2s;
    double D_min_m2s;
    double c_d3;
    DiffusionRegime regime;
    // Leading power of tau in the echo-decay exponent: 2 rigid-side,
    // 9/8 in slow diffusion, 1 in fast diffusion.
    double dominant_exponent;
    bool low_concentration;
};

// Total and deterministic over D >= 0: rigid iff D < rigid_fraction * D_min
// (D = 0 means a frozen matrix), fast iff D >= D_min, slow otherwise.
RegimeReport classify_regime(double D_m2s, double D_min_m2s, double c_d3);

struct ScalingExponent {
    double exponent;        // p in T2 ~ D^-p
    double standard_error;  // 0 when there are no degrees of freedom
};

// Ordinary least squares of ln T2 against ln D; exponent is -slope.
// Needs >= 2 points, positive values; equal D values -> InputError.
ScalingExponent scaling_exponent(std::span<const double> t2_s,
                                 std::span<const double> D_m2s);

}  // namespace spinrelax::echodecay
