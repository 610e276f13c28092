#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spinrelax/data.hpp"
#include "spinrelax/echodecay.hpp"
#include "spinrelax/mechanisms.hpp"

namespace spinrelax::fitting {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;      // from the known-sigma covariance
    double stderr_intercept = 0.0;
    double chi2 = 0.0;
    int dof = 0;
};

// Closed-form weighted least squares of y = intercept + slope * x.
// Needs >= 2 points with sigma > 0; all-equal x -> InputError.
LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> sigma);

struct FitOptions {
    int max_iterations = 200;
    double chi2_rel_tol = 1e-10;  // convergence: relative chi^2 change below this
    double step_tol = 1e-12;      // or relative step norm below this
    double lambda_init = 1e-3;
    bool weighted = true;  // false replaces measurement sigmas with 1
};

struct FitOutcome {
    std::map<std::string, double> parameters;
    // Present only when the normal equations are nonsingular; pinned
    // parameters (lower == upper) report 0.
    std::map<std::string, double> stderrs;
    double reduced_chi2 = 0.0;
    std::vector<double> residuals;  // weighted residuals at the optimum
    int iterations = 0;
    bool converged = false;
    bool singular = false;
    // chi^2 after each accepted step; non-increasing by construction.
    std::vector<double> chi2_history;
    // (dataset index, point index) pairs dropped by a campaign.
    std::vector<std::pair<int, int>> excluded_points;
    std::vector<std::string> warnings;
};

// Residual vector as a function of the parameter vector. Residuals carry
// their own weighting; chi^2 is the plain sum of squares.
using ResidualFn = std::function<std::vector<double>(std::span<const double>)>;

// Central-difference Jacobian, step h_j = 6e-6 * max(|p_j|, scale_j).
// Steps shrink one-sidedly at an active bound so evaluations stay feasible.
// Row i, column j = d residual_i / d parameter_j.
std::vector<std::vector<double>> numeric_jacobian(const ResidualFn& fn,
                                                  std::span<const double> params,
                                                  std::span<const double> scales,
                                                  std::span<const double> lower,
                                                  std::span<const double> upper);

struct NonlinearProblem {
    ResidualFn residuals;
    std::vector<std::string> names;
    std::vector<double> initial;
    std::vector<double> lower;  // lower[j] == upper[j] pins parameter j
    std::vector<double> upper;
};

// Damped least squares with Marquardt scaling lambda * diag(J^T J), bounds
// by projection. Non-convergence is reported in the outcome, not thrown.
FitOutcome nonlinear_least_squares(const NonlinearProblem& problem,
                                   const FitOptions& options = {});

// Arrhenius extraction from T1 data: linear fit of ln(1/T1) against 1/T.
// Parameters: prefactor_per_s, delta_meV. Standard errors scale with
// sqrt(reduced chi^2) so exact data reports vanishing uncertainty.
FitOutcome fit_orbach(const RelaxationDataset& dataset, const FitOptions& options = {});

// Solve R2(D) = target over [D_lo, D_hi] by bisection in log D to relative
// width 1e-10. R2 is strictly decreasing in D, so the bracket is checked at
// its ends; an unreachable target throws BracketError with the achievable
// rate range.
double invert_rate_for_D(double target_r2, const mechanisms::DiffusionMechanism& mech,
                         double temperature_K, double D_lo_m2s, double D_hi_m2s);

struct ParameterSpec {
    double initial = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

enum class DiffusionFitMode { Parametric, Pointwise };

// Joint diffusion fit across isotope datasets. The thermally activated
// channel is fixed beforehand from the T1 fit; datasets share the closest
// approach d and the solute diffusion law, while species, concentration,
// solvent diffusion, and field come from each dataset's mechanism.
struct DiffusionFitSpec {
    std::vector<RelaxationDataset> datasets;  // quantity T2, one per mechanism
    std::vector<mechanisms::DiffusionMechanism> mechanism_templates;
    mechanisms::OrbachParams orbach;
    double orbach_t2_ratio = 2.0 / 3.0;

    DiffusionFitMode mode = DiffusionFitMode::Parametric;
    ParameterSpec shared_d_m;
    // Solute diffusion D(T) = D0 exp(-T_activation/T) exp(-(T_vft/T)^6),
    // fitted jointly in parametric mode.
    ParameterSpec solute_D0_m2s;
    ParameterSpec solute_T_activation_K;
    ParameterSpec solute_T_vft_K;

    // Pointwise mode: candidate d values; empty means {shared_d_m.initial}.
    std::vector<double> d_grid_m;

    FitOptions options;
};

struct PointwiseD {
    double temperature_K;
    double D_m2s;  // recovered total (solvent + solute) diffusion coefficient
};

struct DiffusionFitResult {
    FitOutcome outcome;
    // Pointwise mode only: recovered D(T) per dataset at the selected d.
    std::vector<std::vector<PointwiseD>> recovered_D;
    // Pointwise selection metric at the chosen d: summed squared log-D
    // mismatch between datasets over overlapping temperatures.
    double inconsistency = 0.0;
};

DiffusionFitResult fit_diffusion(const DiffusionFitSpec& spec);

// Nonlinear fit of one echo-decay model to a trace. For ModulatedBi the
// modulation frequency is seeded from the dominant discrete-spectrum peak of
// the residual after a Mono pre-fit.
FitOutcome fit_echo(const EchoTrace& trace, echodecay::EchoModelKind kind,
                    const FitOptions& options = {});

}  // namespace spinrelax::fitting
