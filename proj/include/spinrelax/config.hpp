#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinrelax/echodecay.hpp"
#include "spinrelax/fitting.hpp"
#include "spinrelax/mechanisms.hpp"
#include "spinrelax/solvent.hpp"

namespace spinrelax::config {

// Parsed and validated model assembly. All config values are conventional
// units (nm, cm^2/s, meV, us, spins/cm^3); fields here are SI.
struct ConfigDocument {
    double field_T = 0.34;

    // User-defined species, consulted before the built-in registry.
    std::map<std::string, NuclearSpecies> extra_species;

    std::vector<mechanisms::RelaxationChannel> channels;
    // Indices into `channels` of the translational-diffusion entries, in
    // config order; fit-diffusion binds data files to these.
    std::vector<size_t> diffusion_channels;
    std::optional<mechanisms::OrbachParams> orbach;
    double orbach_t2_ratio = 2.0 / 3.0;

    std::vector<solvent::MixtureComponent> mixture;

    struct RegimeSection {
        std::string species_label;
        double closest_approach_m = 0.0;
        // Explicit concentration; when absent the mixture supplies it.
        std::optional<double> spins_per_m3;
    };
    std::optional<RegimeSection> regime;

    struct FitSection {
        fitting::FitOptions options;
        std::optional<unsigned long> seed;
        fitting::DiffusionFitMode mode = fitting::DiffusionFitMode::Parametric;
        fitting::ParameterSpec d_m;
        fitting::ParameterSpec solute_D0_m2s;
        fitting::ParameterSpec solute_T_activation_K;
        fitting::ParameterSpec solute_T_vft_K;
        std::vector<double> d_grid_m;
    };
    FitSection fit;

    std::optional<echodecay::EchoDecayModel> echo;

    const NuclearSpecies& species(const std::string& label) const;

    static ConfigDocument load(const std::string& path);
    static ConfigDocument parse(const nlohmann::json& doc, const std::string& context);
};

}  // namespace spinrelax::config
