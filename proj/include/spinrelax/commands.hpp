#pragma once

#include <optional>
#include <string>
#include <vector>

namespace spinrelax::cli {

// Exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 2;
inline constexpr int exit_not_converged = 3;

// Each command prints a human-readable report to stdout and optionally writes
// a machine-readable JSON report (--out) and plot TSV (--plot). They throw
// InputError/DomainError for bad input; main() maps those to exit_input_error.

int cmd_convert(double value, const std::string& from, const std::string& to);

int cmd_predict(const std::string& config_path, const std::string& temps_spec,
                const std::string& out_path, const std::string& plot_path);

int cmd_fit_orbach(const std::string& data_path, const std::string& config_path,
                   bool unweighted, const std::string& out_path);

int cmd_fit_diffusion(const std::string& config_path, const std::vector<std::string>& data_paths,
                      const std::string& mode_override, const std::string& out_path,
                      const std::string& plot_path);

int cmd_fit_echo(const std::string& data_path, const std::string& model,
                 const std::string& config_path, bool unweighted, const std::string& out_path);

int cmd_regime(const std::string& config_path, double D_cm2s, const std::string& out_path);

int cmd_synth_relax(const std::string& config_path, const std::string& quantity,
                    const std::string& temps_spec, double noise,
                    std::optional<unsigned long> seed, const std::string& out_csv);

int cmd_synth_echo(const std::string& config_path, const std::string& taus_spec, double noise,
                   std::optional<unsigned long> seed, const std::string& out_csv);

// "lo:hi:n" -> n evenly spaced values, inclusive; n = 1 -> {lo}.
std::vector<double> parse_grid(const std::string& spec, const std::string& flag_name);

}  // namespace spinrelax::cli
