#include "spinrelax/echodecay.hpp"

#include <cmath>

#include "spinrelax/mechanisms.hpp"

namespace spinrelax::echodecay {

EchoModelKind parse_echo_model(const std::string& token) {
    if (token == "mono") return EchoModelKind::Mono;
    if (token == "stretched") return EchoModelKind::Stretched;
    if (token == "modulated-bi" || token == "modulated_bi") return EchoModelKind::ModulatedBi;
    throw InputError("unknown echo model '" + token +
                     "' (expected mono, stretched, or modulated-bi)");
}

std::string echo_model_name(EchoModelKind kind) {
    switch (kind) {
        case EchoModelKind::Mono: return "mono";
        case EchoModelKind::Stretched: return "stretched";
        case EchoModelKind::ModulatedBi: return "modulated-bi";
    }
    return "?";
}

namespace {

void require_t2(double t2, const char* which) {
    if (!(t2 > 0.0) || !std::isfinite(t2))
        throw InputError(std::string(which) + " must be > 0");
}

void require_amplitude(double a, const char* which) {
    if (!(a >= 0.0) || !std::isfinite(a))
        throw InputError(std::string(which) + " must be >= 0");
}

}  // namespace

EchoDecayModel EchoDecayModel::mono(double amplitude, double t2_s) {
    require_amplitude(amplitude, "amplitude");
    require_t2(t2_s, "T2");
    EchoDecayModel m;
    m.kind_ = EchoModelKind::Mono;
    m.params_[0] = amplitude;
    m.params_[1] = t2_s;
    m.n_params_ = 2;
    return m;
}

EchoDecayModel EchoDecayModel::stretched(double amplitude, double t2_s, double exponent) {
    require_amplitude(amplitude, "amplitude");
    require_t2(t2_s, "T2");
    if (!(exponent >= 1.0 && exponent <= 3.0))
        throw InputError("stretch exponent must be in [1, 3]");
    EchoDecayModel m;
    m.kind_ = EchoModelKind::Stretched;
    m.params_[0] = amplitude;
    m.params_[1] = t2_s;
    m.params_[2] = exponent;
    m.n_params_ = 3;
    return m;
}

EchoDecayModel EchoDecayModel::modulated_bi(double amp_inner, double t2_inner_s,
                                            double amp_outer, double t2_outer_s,
                                            double omega_mod_rad_s, double phase_rad) {
    require_amplitude(amp_inner, "inner amplitude");
    require_amplitude(amp_outer, "outer amplitude");
    require_t2(t2_inner_s, "inner T2");
    require_t2(t2_outer_s, "outer T2");
    if (!(omega_mod_rad_s >= 0.0) || !std::isfinite(omega_mod_rad_s))
        throw InputError("modulation frequency must be >= 0");
    if (!std::isfinite(phase_rad)) throw InputError("modulation phase must be finite");
    EchoDecayModel m;
    m.kind_ = EchoModelKind::ModulatedBi;
    m.params_[0] = amp_inner;
    m.params_[1] = t2_inner_s;
    m.params_[2] = amp_outer;
    m.params_[3] = t2_outer_s;
    m.params_[4] = omega_mod_rad_s;
    m.params_[5] = phase_rad;
    m.n_params_ = 6;
    return m;
}

double EchoDecayModel::evaluate(double tau_s) const {
    if (!(tau_s >= 0.0) || !std::isfinite(tau_s))
        throw DomainError("interpulse delay must be >= 0");
    switch (kind_) {
        case EchoModelKind::Mono:
            return params_[0] * std::exp(-2.0 * tau_s / params_[1]);
        case EchoModelKind::Stretched:
            return params_[0] * std::exp(-std::pow(2.0 * tau_s / params_[1], params_[2]));
        case EchoModelKind::ModulatedBi:
            return params_[0] * std::exp(-2.0 * tau_s / params_[1]) +
                   params_[2] * std::cos(params_[4] * tau_s + params_[5]) *
                       std::exp(-2.0 * tau_s / params_[3]);
    }
    throw DomainError("echo model not configured");
}

ConcentrationCriterion concentration_criterion(double spins_per_m3, double d_m) {
    if (!(spins_per_m3 > 0.0) || !std::isfinite(spins_per_m3))
        throw DomainError("concentration must be > 0");
    if (!(d_m > 0.0) || !std::isfinite(d_m))
        throw DomainError("closest approach must be > 0");
    double c_d3 = spins_per_m3 * d_m * d_m * d_m;
    return {c_d3, c_d3 < 0.1};
}

double crossover_diffusion(const NuclearSpecies& sp, double d_m) {
    sp.validate();
    if (!(d_m > 0.0) || !std::isfinite(d_m))
        throw DomainError("closest approach must be > 0");
    return 0.1 * constants::mu0_over_4pi * constants::gamma_electron * std::abs(sp.gamma_n) *
           constants::hbar / d_m;
}

std::string regime_name(DiffusionRegime regime) {
    switch (regime) {
        case DiffusionRegime::Rigid: return "rigid";
        case DiffusionRegime::SlowDiffusion: return "slow_diffusion";
        case DiffusionRegime::FastDiffusion: return "fast_diffusion";
    }
    return "?";
}

RegimeReport classify_regime(double D_m2s, double D_min_m2s, double c_d3) {
    // D = 0 is a legal input meaning a frozen matrix: always rigid.
    if (!(D_m2s >= 0.0) || !std::isfinite(D_m2s))
        throw DomainError("diffusion coefficient must be >= 0");
    if (!(D_min_m2s > 0.0) || !std::isfinite(D_min_m2s))
        throw DomainError("crossover diffusion coefficient must be > 0");
    if (!(c_d3 >= 0.0) || !std::isfinite(c_d3)) throw DomainError("c*d^3 must be >= 0");

    RegimeReport report{};
    report.D_m2s = D_m2s;
    report.D_min_m2s = D_min_m2s;
    report.c_d3 = c_d3;
    report.low_concentration = c_d3 < 0.1;
    if (D_m2s < rigid_fraction * D_min_m2s) {
        report.regime = DiffusionRegime::Rigid;
        report.dominant_exponent = 2.0;
    } else if (D_m2s < D_min_m2s) {
        report.regime = DiffusionRegime::SlowDiffusion;
        report.dominant_exponent = 9.0 / 8.0;
    } else {
        report.regime = DiffusionRegime::FastDiffusion;
        report.dominant_exponent = 1.0;
    }
    return report;
}

ScalingExponent scaling_exponent(std::span<const double> t2_s, std::span<const double> D_m2s) {
    if (t2_s.size() != D_m2s.size()) throw InputError("T2 and D lists must match in length");
    size_t n = t2_s.size();
    if (n < 2) throw InputError("scaling exponent needs at least 2 points");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        if (!(t2_s[i] > 0.0) || !(D_m2s[i] > 0.0))
            throw InputError("scaling exponent needs positive T2 and D");
        double x = std::log(D_m2s[i]);
        double y = std::log(t2_s[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double dn = static_cast<double>(n);
    double det = dn * sxx - sx * sx;
    if (!(det > 0.0) || det <= 1e-14 * dn * sxx)
        throw InputError("scaling exponent needs at least two distinct D values");
    double slope = (dn * sxy - sx * sy) / det;
    double intercept = (sy - slope * sx) / dn;

    double se = 0.0;
    if (n > 2) {
        double ss = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double r = std::log(t2_s[i]) - (slope * std::log(D_m2s[i]) + intercept);
            ss += r * r;
        }
        se = std::sqrt(ss / (dn - 2.0) * dn / det);
    }
    return {-slope, se};
}

}  // namespace spinrelax::echodecay
