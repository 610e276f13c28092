#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "spinrelax/constants.hpp"
#include "spinrelax/data.hpp"
#include "spinrelax/echodecay.hpp"
#include "spinrelax/errors.hpp"
#include "spinrelax/fitting.hpp"
#include "spinrelax/mechanisms.hpp"
#include "spinrelax/solvent.hpp"

namespace py = pybind11;
using namespace spinrelax;

namespace {

py::dict species_to_dict(const NuclearSpecies& sp) {
    py::dict d;
    d["label"] = sp.label;
    d["gamma_n"] = sp.gamma_n;
    d["spin"] = sp.spin;
    d["abundance"] = sp.abundance;
    return d;
}

py::dict outcome_to_dict(const fitting::FitOutcome& out) {
    py::dict d;
    d["parameters"] = out.parameters;
    d["stderrs"] = out.stderrs;
    d["reduced_chi2"] = out.reduced_chi2;
    d["iterations"] = out.iterations;
    d["converged"] = out.converged;
    d["singular"] = out.singular;
    d["warnings"] = out.warnings;
    return d;
}

fitting::FitOptions make_options(bool weighted) {
    fitting::FitOptions opts;
    opts.weighted = weighted;
    return opts;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Electron-spin relaxation models: rates, regimes, and fits";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.attr("k_boltzmann") = constants::k_boltzmann;
    m.attr("hbar") = constants::hbar;
    m.attr("gamma_electron") = constants::gamma_electron;
    m.attr("avogadro") = constants::avogadro;

    m.def(
        "convert_energy",
        [](double value, const std::string& from, const std::string& to) {
            return units::convert_energy(value, from, to);
        },
        py::arg("value"), py::arg("from_unit"), py::arg("to_unit"),
        "Convert an energy value between J, meV, cm-1, and K");

    m.def(
        "species_labels",
        []() {
            std::vector<std::string> labels;
            for (const auto& sp : species::registry()) labels.push_back(sp.label);
            return labels;
        },
        "Labels of the built-in nuclear species");

    m.def(
        "species", [](const std::string& label) { return species_to_dict(species::require(label)); },
        py::arg("label"), "Gyromagnetic ratio, spin, and abundance of a built-in species");

    m.def(
        "zeeman_frequencies",
        [](double field_T, const std::string& label) {
            auto z = zeeman_frequencies(field_T, species::require(label));
            return py::make_tuple(z.omega_e, z.omega_n);
        },
        py::arg("field_T"), py::arg("species"),
        "(omega_e, omega_n) angular frequency magnitudes in rad/s");

    m.def("proton_concentration_toluene", &solvent::proton_concentration_toluene,
          py::arg("temperature_K"), "Proton number density of liquid toluene, spins/cm^3");
    m.def("toluene_self_diffusion", &solvent::toluene_self_diffusion, py::arg("temperature_K"),
          "Self-diffusion coefficient of liquid toluene, cm^2/s");
    m.def("stokes_einstein", &solvent::stokes_einstein, py::arg("temperature_K"),
          py::arg("radius_m"), py::arg("viscosity_Pa_s"),
          "Stokes-Einstein diffusion coefficient, m^2/s");

    m.def("spectral_density", &mechanisms::spectral_density, py::arg("z"),
          "Force-free hard-sphere spectral density, J(0) = 1");
    m.def("correlation_time", &mechanisms::correlation_time, py::arg("closest_approach_m"),
          py::arg("D_m2s"), "Translational correlation time 2 d^2 / D, s");
    m.def(
        "kappa", [](const std::string& label) { return mechanisms::kappa(species::require(label)); },
        py::arg("species"), "Dipolar coupling strength for a species, SI");

    m.def(
        "orbach_rates",
        [](double prefactor_per_s, double delta_meV, double temperature_K, double t2_ratio) {
            auto r = mechanisms::orbach_rates(
                mechanisms::OrbachParams::from_meV(prefactor_per_s, delta_meV), temperature_K,
                t2_ratio);
            return py::make_tuple(r.r1, r.r2);
        },
        py::arg("prefactor_per_s"), py::arg("delta_meV"), py::arg("temperature_K"),
        py::arg("t2_ratio") = 2.0 / 3.0,
        "(R1, R2) in 1/s for the thermally activated channel");

    m.def(
        "diffusion_rates",
        [](const std::string& label, double closest_approach_m, double field_T,
           double spins_per_m3, double D_m2s, double temperature_K) {
            mechanisms::DiffusionMechanism mech;
            mech.species = species::require(label);
            mech.closest_approach_m = closest_approach_m;
            mech.field_T = field_T;
            mech.concentration = solvent::ConcentrationModel::constant(spins_per_m3);
            mech.solvent_diffusion = solvent::DiffusionModel::constant(D_m2s);
            mech.validate();
            auto r = mechanisms::diffusion_rates_at(mech, temperature_K, D_m2s);
            return py::make_tuple(r.r1, r.r2);
        },
        py::arg("species"), py::arg("closest_approach_m"), py::arg("field_T"),
        py::arg("spins_per_m3"), py::arg("D_m2s"), py::arg("temperature_K"),
        "(R1, R2) in 1/s for the translational-diffusion channel");

    m.def(
        "crossover_diffusion",
        [](const std::string& label, double d_m) {
            return echodecay::crossover_diffusion(species::require(label), d_m);
        },
        py::arg("species"), py::arg("closest_approach_m"),
        "Slow/fast crossover diffusion coefficient, m^2/s");

    m.def(
        "classify_regime",
        [](const std::string& label, double closest_approach_m, double spins_per_m3,
           double D_m2s) {
            double d_min =
                echodecay::crossover_diffusion(species::require(label), closest_approach_m);
            auto crit = echodecay::concentration_criterion(spins_per_m3, closest_approach_m);
            auto rep = echodecay::classify_regime(D_m2s, d_min, crit.c_d3);
            py::dict d;
            d["D_m2s"] = rep.D_m2s;
            d["D_min_m2s"] = rep.D_min_m2s;
            d["c_d3"] = rep.c_d3;
            d["regime"] = echodecay::regime_name(rep.regime);
            d["dominant_exponent"] = rep.dominant_exponent;
            d["low_concentration"] = rep.low_concentration;
            return d;
        },
        py::arg("species"), py::arg("closest_approach_m"), py::arg("spins_per_m3"),
        py::arg("D_m2s"), "Motional-regime report for a diffusion coefficient");

    m.def(
        "scaling_exponent",
        [](const std::vector<double>& t2_s, const std::vector<double>& D_m2s) {
            auto se = echodecay::scaling_exponent(t2_s, D_m2s);
            return py::make_tuple(se.exponent, se.standard_error);
        },
        py::arg("t2_s"), py::arg("D_m2s"),
        "(p, stderr) for T2 ~ D^-p from a log-log straight-line fit");

    m.def(
        "fit_orbach",
        [](const std::vector<double>& temperature_K, const std::vector<double>& t1_s,
           const std::vector<double>& sigma_s, bool weighted) {
            if (temperature_K.size() != t1_s.size() || t1_s.size() != sigma_s.size())
                throw InputError("fit_orbach: arrays must have equal length");
            RelaxationDataset ds;
            ds.quantity = RelaxationQuantity::T1;
            for (size_t i = 0; i < t1_s.size(); ++i)
                ds.points.push_back({temperature_K[i], t1_s[i], sigma_s[i], ""});
            ds.sort_and_validate();
            return outcome_to_dict(fitting::fit_orbach(ds, make_options(weighted)));
        },
        py::arg("temperature_K"), py::arg("t1_s"), py::arg("sigma_s"), py::arg("weighted") = true,
        "Fit prefactor and barrier (meV) to T1(T) data");

    m.def(
        "fit_echo",
        [](const std::vector<double>& tau_s, const std::vector<double>& amplitude,
           const std::vector<double>& sigma, const std::string& model, bool weighted) {
            if (tau_s.size() != amplitude.size() || amplitude.size() != sigma.size())
                throw InputError("fit_echo: arrays must have equal length");
            EchoTrace trace;
            for (size_t i = 0; i < tau_s.size(); ++i)
                trace.points.push_back({tau_s[i], amplitude[i], sigma[i]});
            trace.sort_and_validate();
            return outcome_to_dict(fitting::fit_echo(trace, echodecay::parse_echo_model(model),
                                                     make_options(weighted)));
        },
        py::arg("tau_s"), py::arg("amplitude"), py::arg("sigma"), py::arg("model") = "mono",
        py::arg("weighted") = true, "Fit an echo-decay model to a trace");

    m.def(
        "mixture_concentration",
        [](const std::vector<py::dict>& components, const std::string& species_label) {
            std::vector<solvent::MixtureComponent> mix;
            for (const auto& comp : components) {
                solvent::MixtureComponent c;
                c.label = comp["label"].cast<std::string>();
                c.density_g_cm3 = comp["density_g_cm3"].cast<double>();
                c.molar_mass_g_mol = comp["molar_mass_g_mol"].cast<double>();
                c.volume_fraction = comp["volume_fraction"].cast<double>();
                c.nuclei_per_molecule =
                    comp["nuclei_per_molecule"].cast<std::map<std::string, double>>();
                mix.push_back(std::move(c));
            }
            return solvent::mixture_concentration(mix, species::require(species_label));
        },
        py::arg("components"), py::arg("species"),
        "Number density of one species in a liquid mixture, spins/cm^3");
}
