#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "spinrelax/commands.hpp"
#include "spinrelax/errors.hpp"

namespace cli = spinrelax::cli;

int main(int argc, char** argv) {
    CLI::App app{"Electron-spin relaxation modeling and fitting toolkit"};
    app.require_subcommand(1);

    int rc = cli::exit_ok;
    auto run = [&rc](auto&& fn) {
        return [&rc, fn]() {
            try {
                rc = fn();
            } catch (const spinrelax::InputError& err) {
                std::cerr << "error: " << err.what() << "\n";
                rc = cli::exit_input_error;
            } catch (const spinrelax::DomainError& err) {
                std::cerr << "error: " << err.what() << "\n";
                rc = cli::exit_input_error;
            } catch (const std::exception& err) {
                std::cerr << "error: " << err.what() << "\n";
                rc = cli::exit_input_error;
            }
        };
    };

    // convert VALUE FROM TO
    double conv_value = 0.0;
    std::string conv_from, conv_to;
    auto* convert = app.add_subcommand("convert", "Convert an energy value between units");
    convert->add_option("value", conv_value, "Value to convert")->required();
    convert->add_option("from", conv_from, "Source unit: J, meV, cm-1, K")->required();
    convert->add_option("to", conv_to, "Target unit: J, meV, cm-1, K")->required();
    convert->callback(run([&] { return cli::cmd_convert(conv_value, conv_from, conv_to); }));

    // predict
    std::string pr_config, pr_temps, pr_out, pr_plot;
    auto* predict = app.add_subcommand("predict", "Predict T1/T2 from configured channels");
    predict->add_option("--config", pr_config, "Model configuration (JSON)")->required();
    predict->add_option("--temps", pr_temps, "Temperature grid lo:hi:n (K)")->required();
    predict->add_option("--out", pr_out, "Write machine-readable report (JSON)");
    predict->add_option("--plot", pr_plot, "Write plot data (TSV)");
    predict->callback(run([&] { return cli::cmd_predict(pr_config, pr_temps, pr_out, pr_plot); }));

    // fit-orbach
    std::string fo_data, fo_config, fo_out;
    bool fo_unweighted = false;
    auto* fit_orbach =
        app.add_subcommand("fit-orbach", "Fit the thermally activated T1 channel (A, delta)");
    fit_orbach->add_option("--data", fo_data, "T1 dataset (CSV)")->required();
    fit_orbach->add_option("--config", fo_config, "Optional fit options (JSON)");
    fit_orbach->add_flag("--unweighted", fo_unweighted, "Ignore measurement uncertainties");
    fit_orbach->add_option("--out", fo_out, "Write machine-readable report (JSON)");
    fit_orbach->callback(
        run([&] { return cli::cmd_fit_orbach(fo_data, fo_config, fo_unweighted, fo_out); }));

    // fit-diffusion
    std::string fd_config, fd_mode, fd_out, fd_plot;
    std::vector<std::string> fd_data;
    auto* fit_diffusion = app.add_subcommand(
        "fit-diffusion", "Joint diffusion fit across isotope T2 datasets (shared d)");
    fit_diffusion->add_option("--config", fd_config, "Model + fit configuration (JSON)")
        ->required();
    fit_diffusion
        ->add_option("--data", fd_data, "T2 dataset (CSV), one per diffusion channel, in order")
        ->required();
    fit_diffusion->add_option("--mode", fd_mode, "Override fit mode: parametric or pointwise");
    fit_diffusion->add_option("--out", fd_out, "Write machine-readable report (JSON)");
    fit_diffusion->add_option("--plot", fd_plot, "Write plot data (TSV)");
    fit_diffusion->callback(run(
        [&] { return cli::cmd_fit_diffusion(fd_config, fd_data, fd_mode, fd_out, fd_plot); }));

    // fit-echo
    std::string fe_data, fe_model, fe_config, fe_out;
    bool fe_unweighted = false;
    auto* fit_echo = app.add_subcommand("fit-echo", "Fit an echo-decay model to a trace");
    fit_echo->add_option("--data", fe_data, "Echo trace (CSV)")->required();
    fit_echo->add_option("--model", fe_model, "mono, stretched, or modulated-bi")->required();
    fit_echo->add_option("--config", fe_config, "Optional fit options (JSON)");
    fit_echo->add_flag("--unweighted", fe_unweighted, "Ignore measurement uncertainties");
    fit_echo->add_option("--out", fe_out, "Write machine-readable report (JSON)");
    fit_echo->callback(run(
        [&] { return cli::cmd_fit_echo(fe_data, fe_model, fe_config, fe_unweighted, fe_out); }));

    // regime
    std::string rg_config, rg_out;
    double rg_D = 0.0;
    auto* regime =
        app.add_subcommand("regime", "Classify a diffusion coefficient against the crossover");
    regime->add_option("--config", rg_config, "Configuration with a 'regime' section (JSON)")
        ->required();
    regime->add_option("--D", rg_D, "Diffusion coefficient (cm^2/s); 0 means frozen")->required();
    regime->add_option("--out", rg_out, "Write machine-readable report (JSON)");
    regime->callback(run([&] { return cli::cmd_regime(rg_config, rg_D, rg_out); }));

    // synth relax | synth echo
    auto* synth = app.add_subcommand("synth", "Generate synthetic datasets from a model");
    synth->require_subcommand(1);

    std::string sr_config, sr_quantity = "T1", sr_temps, sr_out;
    double sr_noise = 0.0;
    std::optional<unsigned long> sr_seed;
    auto* synth_relax = synth->add_subcommand("relax", "Synthetic relaxation-time dataset");
    synth_relax->add_option("--config", sr_config, "Model configuration (JSON)")->required();
    synth_relax->add_option("--quantity", sr_quantity, "T1 or T2")->required();
    synth_relax->add_option("--temps", sr_temps, "Temperature grid lo:hi:n (K)")->required();
    synth_relax->add_option("--noise", sr_noise, "Multiplicative noise fraction");
    synth_relax->add_option("--seed", sr_seed, "RNG seed (required when noise > 0)");
    synth_relax->add_option("--out", sr_out, "Output CSV path")->required();
    synth_relax->callback(run([&] {
        return cli::cmd_synth_relax(sr_config, sr_quantity, sr_temps, sr_noise, sr_seed, sr_out);
    }));

    std::string se_config, se_taus, se_out;
    double se_noise = 0.0;
    std::optional<unsigned long> se_seed;
    auto* synth_echo = synth->add_subcommand("echo", "Synthetic echo-decay trace");
    synth_echo->add_option("--config", se_config, "Configuration with an 'echo' section (JSON)")
        ->required();
    synth_echo->add_option("--taus", se_taus, "Delay grid lo:hi:n (us)")->required();
    synth_echo->add_option("--noise", se_noise, "Additive noise fraction of the peak amplitude");
    synth_echo->add_option("--seed", se_seed, "RNG seed (required when noise > 0)");
    synth_echo->add_option("--out", se_out, "Output CSV path")->required();
    synth_echo->callback(run(
        [&] { return cli::cmd_synth_echo(se_config, se_taus, se_noise, se_seed, se_out); }));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_input_error;
    }
    return rc;
}
