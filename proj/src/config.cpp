#include "spinrelax/config.hpp"

#include <fstream>
#include <set>

namespace spinrelax::config {

using nlohmann::json;

namespace {

// Walks the config tree carrying a JSON-pointer-style path so every
// diagnostic names the offending field.
class Cursor {
public:
    Cursor(const json& node, std::string file, std::string path)
        : node_(&node), file_(std::move(file)), path_(std::move(path)) {}

    const json& raw() const { return *node_; }

    [[noreturn]] void fail(const std::string& what) const {
        throw InputError(file_ + ": " + (path_.empty() ? "(root)" : path_) + ": " + what);
    }

    bool has(const std::string& key) const { return node_->is_object() && node_->contains(key); }

    Cursor child(const std::string& key) const {
        if (!node_->is_object()) fail("expected an object");
        if (!node_->contains(key)) fail("missing key '" + key + "'");
        return Cursor((*node_)[key], file_, path_ + "/" + key);
    }

    Cursor at(size_t index) const {
        if (!node_->is_array()) fail("expected an array");
        return Cursor((*node_)[index], file_, path_ + "/" + std::to_string(index));
    }

    size_t size() const {
        if (!node_->is_array()) fail("expected an array");
        return node_->size();
    }

    double number() const {
        if (!node_->is_number()) fail("expected a number");
        return node_->get<double>();
    }

    double number(const std::string& key) const { return child(key).number(); }

    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    std::string str() const {
        if (!node_->is_string()) fail("expected a string");
        return node_->get<std::string>();
    }

    std::string str(const std::string& key) const { return child(key).str(); }

    bool boolean_or(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        Cursor c = child(key);
        if (!c.node_->is_boolean()) c.fail("expected a boolean");
        return c.node_->get<bool>();
    }

    void require_object() const {
        if (!node_->is_object()) fail("expected an object");
    }

private:
    const json* node_;
    std::string file_;
    std::string path_;
};

std::vector<solvent::TablePoint> parse_table_points(const Cursor& c, double value_to_si) {
    std::vector<solvent::TablePoint> pts;
    for (size_t i = 0; i < c.size(); ++i) {
        Cursor row = c.at(i);
        if (!row.raw().is_array() || row.raw().size() != 2)
            row.fail("expected [temperature_K, value] pairs");
        pts.push_back({row.at(0).number(), row.at(1).number() * value_to_si});
    }
    return pts;
}

solvent::ViscosityModel parse_viscosity(const Cursor& c) {
    std::string model = c.str("model");
    if (model == "vogel_fulcher")
        return solvent::ViscosityModel::vogel_fulcher(c.number("eta0_Pa_s"), c.number("B_K"),
                                                      c.number("T0_K"));
    if (model == "table")
        return solvent::ViscosityModel::table(parse_table_points(c.child("points_Pa_s"), 1.0));
    c.fail("unknown viscosity model '" + model + "' (expected vogel_fulcher or table)");
}

solvent::ConcentrationModel parse_concentration(const Cursor& c) {
    std::string model = c.str("model");
    if (model == "toluene_protons") return solvent::ConcentrationModel::toluene_protons();
    if (model == "constant")
        return solvent::ConcentrationModel::constant(c.number("spins_per_cm3") *
                                                     units::per_cm3_to_per_m3);
    if (model == "table")
        return solvent::ConcentrationModel::table(
            parse_table_points(c.child("points_per_cm3"), units::per_cm3_to_per_m3));
    c.fail("unknown concentration model '" + model +
           "' (expected toluene_protons, constant, or table)");
}

solvent::DiffusionModel parse_diffusion(const Cursor& c) {
    std::string model = c.str("model");
    if (model == "toluene_self_diffusion") return solvent::DiffusionModel::toluene_self_diffusion();
    if (model == "stokes_einstein")
        return solvent::DiffusionModel::stokes_einstein(c.number("radius_nm") * units::nm_to_m,
                                                        parse_viscosity(c.child("viscosity")));
    if (model == "parametric")
        return solvent::DiffusionModel::parametric(c.number("D0_cm2s") * units::cm2s_to_m2s,
                                                   c.number("T_activation_K"),
                                                   c.number("T_vft_K"));
    if (model == "table")
        return solvent::DiffusionModel::table(
            parse_table_points(c.child("points_cm2s"), units::cm2s_to_m2s));
    if (model == "constant")
        return solvent::DiffusionModel::constant(c.number("D_cm2s") * units::cm2s_to_m2s);
    if (model == "zero") return solvent::DiffusionModel::zero();
    if (model == "sum") {
        Cursor terms = c.child("terms");
        std::vector<solvent::DiffusionModel> parsed;
        for (size_t i = 0; i < terms.size(); ++i) parsed.push_back(parse_diffusion(terms.at(i)));
        return solvent::DiffusionModel::sum(std::move(parsed));
    }
    c.fail("unknown diffusion model '" + model +
           "' (expected toluene_self_diffusion, stokes_einstein, parametric, table, constant, "
           "zero, or sum)");
}

fitting::ParameterSpec parse_parameter_spec(const Cursor& c, double to_si) {
    fitting::ParameterSpec spec;
    spec.initial = c.number("initial") * to_si;
    spec.lower = c.number("lower") * to_si;
    spec.upper = c.number("upper") * to_si;
    if (!(spec.lower <= spec.initial && spec.initial <= spec.upper))
        c.fail("bounds must bracket the initial value");
    return spec;
}

echodecay::EchoDecayModel parse_echo(const Cursor& c) {
    std::string model = c.str("model");
    try {
        switch (echodecay::parse_echo_model(model)) {
            case echodecay::EchoModelKind::Mono:
                return echodecay::EchoDecayModel::mono(c.number("amplitude"),
                                                       c.number("t2_us") * units::us_to_s);
            case echodecay::EchoModelKind::Stretched:
                return echodecay::EchoDecayModel::stretched(c.number("amplitude"),
                                                            c.number("t2_us") * units::us_to_s,
                                                            c.number("exponent"));
            case echodecay::EchoModelKind::ModulatedBi:
                return echodecay::EchoDecayModel::modulated_bi(
                    c.number("amp_inner"), c.number("t2_inner_us") * units::us_to_s,
                    c.number("amp_outer"), c.number("t2_outer_us") * units::us_to_s,
                    c.number("omega_mod_rad_per_us") / units::us_to_s,
                    c.number_or("phase_rad", 0.0));
        }
    } catch (const InputError& err) {
        c.fail(err.what());
    }
    c.fail("unknown echo model");
}

}  // namespace

const NuclearSpecies& ConfigDocument::species(const std::string& label) const {
    auto it = extra_species.find(label);
    if (it != extra_species.end()) return it->second;
    return spinrelax::species::require(label);
}

ConfigDocument ConfigDocument::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);  // allow // comments
    } catch (const json::parse_error& err) {
        throw InputError(path + ": " + err.what());
    }
    return parse(doc, path);
}

ConfigDocument ConfigDocument::parse(const json& doc, const std::string& context) {
    Cursor root(doc, context, "");
    root.require_object();

    ConfigDocument cfg;
    cfg.field_T = root.number_or("field_T", 0.34);
    if (!(cfg.field_T > 0.0)) root.child("field_T").fail("field must be > 0");

    if (root.has("species")) {
        Cursor sp = root.child("species");
        sp.require_object();
        for (const auto& [label, node] : sp.raw().items()) {
            Cursor c = sp.child(label);
            NuclearSpecies s;
            s.label = label;
            s.gamma_n = c.number("gamma_n_rad_per_s_T");
            s.spin = c.number("spin");
            s.abundance = c.number_or("abundance", 1.0);
            try {
                s.validate();
            } catch (const InputError& err) {
                c.fail(err.what());
            }
            cfg.extra_species[label] = s;
        }
    }

    if (root.has("channels")) {
        Cursor chs = root.child("channels");
        std::set<std::string> labels;
        for (size_t i = 0; i < chs.size(); ++i) {
            Cursor c = chs.at(i);
            std::string type = c.str("type");
            mechanisms::RelaxationChannel channel;
            try {
                if (type == "orbach") {
                    auto params = mechanisms::OrbachParams::from_meV(c.number("prefactor_per_s"),
                                                                     c.number("delta_meV"));
                    double ratio = c.number_or("t2_ratio", 2.0 / 3.0);
                    if (!(params.prefactor_per_s > 0.0))
                        c.fail("prefactor_per_s must be > 0");
                    if (!(params.delta_J > 0.0)) c.fail("delta_meV must be > 0");
                    channel = mechanisms::RelaxationChannel::orbach(params, ratio);
                    if (cfg.orbach)
                        c.fail("only one orbach channel is supported");
                    cfg.orbach = params;
                    cfg.orbach_t2_ratio = ratio;
                } else if (type == "diffusion") {
                    mechanisms::DiffusionMechanism mech;
                    mech.species = cfg.species(c.str("species"));
                    mech.closest_approach_m = c.number("closest_approach_nm") * units::nm_to_m;
                    mech.field_T = cfg.field_T;
                    mech.concentration = parse_concentration(c.child("concentration"));
                    mech.solvent_diffusion = parse_diffusion(c.child("solvent_diffusion"));
                    mech.solute_diffusion = c.has("solute_diffusion")
                                                ? parse_diffusion(c.child("solute_diffusion"))
                                                : solvent::DiffusionModel::zero();
                    channel = mechanisms::RelaxationChannel::translational_diffusion(mech);
                    cfg.diffusion_channels.push_back(cfg.channels.size());
                } else {
                    c.fail("unknown channel type '" + type + "' (expected orbach or diffusion)");
                }
            } catch (const InputError& err) {
                // Re-raise with the channel's path unless already addressed.
                std::string what = err.what();
                if (what.find(context) == 0) throw;
                c.fail(what);
            }
            if (c.has("label")) channel.set_label(c.str("label"));
            std::string label = channel.label();
            for (int suffix = 2; labels.count(channel.label()); ++suffix)
                channel.set_label(label + "_" + std::to_string(suffix));
            labels.insert(channel.label());
            cfg.channels.push_back(std::move(channel));
        }
    }

    if (root.has("mixture")) {
        Cursor mix = root.child("mixture");
        for (size_t i = 0; i < mix.size(); ++i) {
            Cursor c = mix.at(i);
            solvent::MixtureComponent comp;
            comp.label = c.str("label");
            comp.density_g_cm3 = c.number("density_g_cm3");
            comp.molar_mass_g_mol = c.number("molar_mass_g_mol");
            comp.volume_fraction = c.number("volume_fraction");
            if (c.has("nuclei")) {
                Cursor nuclei = c.child("nuclei");
                nuclei.require_object();
                for (const auto& [label, node] : nuclei.raw().items())
                    comp.nuclei_per_molecule[label] = nuclei.number(label);
            }
            cfg.mixture.push_back(std::move(comp));
        }
    }

    if (root.has("regime")) {
        Cursor c = root.child("regime");
        RegimeSection section;
        section.species_label = c.str("species");
        cfg.species(section.species_label);  // validates the label
        section.closest_approach_m = c.number("closest_approach_nm") * units::nm_to_m;
        if (!(section.closest_approach_m > 0.0))
            c.child("closest_approach_nm").fail("must be > 0");
        if (c.has("spins_per_cm3"))
            section.spins_per_m3 = c.number("spins_per_cm3") * units::per_cm3_to_per_m3;
        cfg.regime = section;
    }

    if (root.has("fit")) {
        Cursor c = root.child("fit");
        cfg.fit.options.weighted = c.boolean_or("weighted", true);
        cfg.fit.options.max_iterations =
            static_cast<int>(c.number_or("max_iterations", cfg.fit.options.max_iterations));
        if (cfg.fit.options.max_iterations < 1)
            c.child("max_iterations").fail("must be >= 1");
        cfg.fit.options.chi2_rel_tol =
            c.number_or("chi2_rel_tol", cfg.fit.options.chi2_rel_tol);
        cfg.fit.options.step_tol = c.number_or("step_tol", cfg.fit.options.step_tol);
        if (c.has("seed")) {
            double seed = c.number("seed");
            if (seed < 0) c.child("seed").fail("seed must be >= 0");
            cfg.fit.seed = static_cast<unsigned long>(seed);
        }
        if (c.has("mode")) {
            std::string mode = c.str("mode");
            if (mode == "parametric")
                cfg.fit.mode = fitting::DiffusionFitMode::Parametric;
            else if (mode == "pointwise")
                cfg.fit.mode = fitting::DiffusionFitMode::Pointwise;
            else
                c.child("mode").fail("expected 'parametric' or 'pointwise'");
        }
        if (c.has("d_nm")) cfg.fit.d_m = parse_parameter_spec(c.child("d_nm"), units::nm_to_m);
        if (c.has("solute_D0_cm2s"))
            cfg.fit.solute_D0_m2s =
                parse_parameter_spec(c.child("solute_D0_cm2s"), units::cm2s_to_m2s);
        if (c.has("solute_T_activation_K"))
            cfg.fit.solute_T_activation_K =
                parse_parameter_spec(c.child("solute_T_activation_K"), 1.0);
        if (c.has("solute_T_vft_K"))
            cfg.fit.solute_T_vft_K = parse_parameter_spec(c.child("solute_T_vft_K"), 1.0);
        if (c.has("d_grid_nm")) {
            Cursor grid = c.child("d_grid_nm");
            for (size_t i = 0; i < grid.size(); ++i)
                cfg.fit.d_grid_m.push_back(grid.at(i).number() * units::nm_to_m);
        }
    }

    if (root.has("echo")) cfg.echo = parse_echo(root.child("echo"));

    return cfg;
}

}  // namespace spinrelax::config
