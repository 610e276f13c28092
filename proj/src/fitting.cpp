#include "spinrelax/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace spinrelax::fitting {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::string format_rate(double r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

double dot(const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
}

}  // namespace

LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> sigma) {
    size_t n = x.size();
    if (y.size() != n || sigma.size() != n)
        throw InputError("linear fit: input lengths differ");
    if (n < 2) throw InputError("linear fit needs at least 2 points");

    double S = 0, Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw InputError("linear fit: inputs must be finite");
        if (!(sigma[i] > 0.0) || !std::isfinite(sigma[i]))
            throw InputError("linear fit: sigma must be > 0");
        double w = 1.0 / (sigma[i] * sigma[i]);
        S += w;
        Sx += w * x[i];
        Sy += w * y[i];
        Sxx += w * x[i] * x[i];
        Sxy += w * x[i] * y[i];
    }
    double det = S * Sxx - Sx * Sx;
    if (!(det > 0.0) || det <= 1e-14 * S * Sxx)
        throw InputError("linear fit needs at least two distinct x values");

    LinearFit fit;
    fit.slope = (S * Sxy - Sx * Sy) / det;
    fit.intercept = (Sxx * Sy - Sx * Sxy) / det;
    fit.stderr_slope = std::sqrt(S / det);
    fit.stderr_intercept = std::sqrt(Sxx / det);
    for (size_t i = 0; i < n; ++i) {
        double r = (y[i] - fit.intercept - fit.slope * x[i]) / sigma[i];
        fit.chi2 += r * r;
    }
    fit.dof = static_cast<int>(n) - 2;
    return fit;
}

std::vector<std::vector<double>> numeric_jacobian(const ResidualFn& fn,
                                                  std::span<const double> params,
                                                  std::span<const double> scales,
                                                  std::span<const double> lower,
                                                  std::span<const double> upper) {
    size_t np = params.size();
    if (scales.size() != np || lower.size() != np || upper.size() != np)
        throw InputError("jacobian: parameter vector lengths differ");

    std::vector<double> work(params.begin(), params.end());
    std::vector<double> base;  // evaluated lazily, only when a bound is active
    std::vector<std::vector<double>> columns(np);
    size_t m = 0;

    for (size_t j = 0; j < np; ++j) {
        if (lower[j] == upper[j]) continue;  // pinned: zero column
        double h = 6e-6 * std::max(std::abs(params[j]), scales[j]);
        double hu = std::min(h, upper[j] - params[j]);
        double hl = std::min(h, params[j] - lower[j]);
        if (hu <= 0.0 && hl <= 0.0) continue;

        std::vector<double> rp, rm;
        if (hu > 0.0) {
            work[j] = params[j] + hu;
            rp = fn(work);
        } else {
            hu = 0.0;
            if (base.empty()) base = fn(params);
            rp = base;
        }
        if (hl > 0.0) {
            work[j] = params[j] - hl;
            rm = fn(work);
        } else {
            hl = 0.0;
            if (base.empty()) base = fn(params);
            rm = base;
        }
        work[j] = params[j];

        if (rp.size() != rm.size()) throw InputError("jacobian: residual size changed");
        m = rp.size();
        std::vector<double> col(m);
        double denom = hu + hl;
        for (size_t i = 0; i < m; ++i) col[i] = (rp[i] - rm[i]) / denom;
        columns[j] = std::move(col);
    }

    if (m == 0) {
        if (base.empty()) base = fn(params);
        m = base.size();
    }
    std::vector<std::vector<double>> jac(m, std::vector<double>(np, 0.0));
    for (size_t j = 0; j < np; ++j)
        if (!columns[j].empty())
            for (size_t i = 0; i < m; ++i) jac[i][j] = columns[j][i];
    return jac;
}

namespace {

struct FreeSet {
    std::vector<size_t> idx;  // indices of non-pinned parameters
};

FreeSet free_parameters(const NonlinearProblem& prob) {
    FreeSet fs;
    for (size_t j = 0; j < prob.initial.size(); ++j)
        if (prob.lower[j] != prob.upper[j]) fs.idx.push_back(j);
    return fs;
}

}  // namespace

FitOutcome nonlinear_least_squares(const NonlinearProblem& problem, const FitOptions& options) {
    size_t np = problem.initial.size();
    if (problem.names.size() != np || problem.lower.size() != np || problem.upper.size() != np)
        throw InputError("nonlinear fit: parameter vector lengths differ");
    if (np == 0) throw InputError("nonlinear fit: no parameters");
    for (size_t j = 0; j < np; ++j) {
        if (problem.lower[j] > problem.upper[j])
            throw InputError("nonlinear fit: lower bound above upper for '" +
                             problem.names[j] + "'");
        if (problem.initial[j] < problem.lower[j] || problem.initial[j] > problem.upper[j])
            throw InputError("nonlinear fit: initial value outside bounds for '" +
                             problem.names[j] + "'");
    }

    FreeSet fs = free_parameters(problem);
    size_t nf = fs.idx.size();

    std::vector<double> p = problem.initial;
    std::vector<double> r = problem.residuals(p);
    size_t m = r.size();
    if (m == 0) throw InputError("nonlinear fit: empty residual vector");
    if (m < nf) throw InputError("nonlinear fit: fewer residuals than free parameters");

    std::vector<double> scales(np);
    for (size_t j = 0; j < np; ++j)
        scales[j] = std::abs(problem.initial[j]) > 0.0 ? std::abs(problem.initial[j]) : 1.0;

    FitOutcome out;
    double chi2 = dot(r);
    out.chi2_history.push_back(chi2);

    double lambda = options.lambda_init;
    bool converged = false;

    for (int iter = 1; iter <= options.max_iterations && nf > 0; ++iter) {
        out.iterations = iter;

        auto jac = numeric_jacobian(problem.residuals, p, scales, problem.lower, problem.upper);
        Eigen::MatrixXd J(m, nf);
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < nf; ++j) J(i, j) = jac[i][fs.idx[j]];
        Eigen::VectorXd rv = Eigen::Map<const Eigen::VectorXd>(r.data(), m);
        Eigen::MatrixXd JtJ = J.transpose() * J;
        Eigen::VectorXd g = J.transpose() * rv;

        double max_diag = JtJ.diagonal().maxCoeff();
        if (!(max_diag > 0.0) || !std::isfinite(max_diag)) break;  // flat residuals

        bool accepted = false;
        for (int tries = 0; tries < 40; ++tries) {
            Eigen::MatrixXd M = JtJ;
            for (size_t j = 0; j < nf; ++j) {
                double d = std::max(JtJ(j, j), 1e-14 * max_diag);
                M(j, j) += lambda * d;
            }
            Eigen::VectorXd delta = M.ldlt().solve(-g);
            if (!delta.allFinite()) {
                lambda *= 10.0;
                continue;
            }

            std::vector<double> trial = p;
            for (size_t j = 0; j < nf; ++j) {
                size_t k = fs.idx[j];
                trial[k] = std::clamp(p[k] + delta(j), problem.lower[k], problem.upper[k]);
            }

            double chi2_trial = inf;
            std::vector<double> r_trial;
            try {
                r_trial = problem.residuals(trial);
                if (r_trial.size() == m) chi2_trial = dot(r_trial);
            } catch (const std::exception&) {
                chi2_trial = inf;  // infeasible trial point: reject the step
            }

            if (std::isfinite(chi2_trial) && chi2_trial <= chi2) {
                double step2 = 0.0, pnorm2 = 0.0;
                for (size_t j = 0; j < nf; ++j) {
                    size_t k = fs.idx[j];
                    double s = trial[k] - p[k];
                    step2 += s * s;
                    pnorm2 += trial[k] * trial[k];
                }
                double rel_change = (chi2 - chi2_trial) / std::max(chi2, 1e-300);
                p = std::move(trial);
                r = std::move(r_trial);
                chi2 = chi2_trial;
                out.chi2_history.push_back(chi2);
                lambda = std::max(lambda * 0.1, 1e-15);
                if (rel_change < options.chi2_rel_tol ||
                    std::sqrt(step2) <= options.step_tol * (std::sqrt(pnorm2) + options.step_tol))
                    converged = true;
                accepted = true;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e15) break;
        }

        if (!accepted) break;  // trust region collapsed without progress
        if (converged) break;
    }
    if (nf == 0) converged = true;  // everything pinned: nothing to optimize

    out.converged = converged;
    for (size_t j = 0; j < np; ++j) out.parameters[problem.names[j]] = p[j];
    out.residuals = r;
    int dof = static_cast<int>(m) - static_cast<int>(nf);
    out.reduced_chi2 = dof > 0 ? chi2 / dof : 0.0;

    // Covariance from the final Jacobian, scaled by reduced chi^2 so exact
    // fits report vanishing uncertainty.
    if (nf > 0) {
        auto jac = numeric_jacobian(problem.residuals, p, scales, problem.lower, problem.upper);
        Eigen::MatrixXd J(m, nf);
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < nf; ++j) J(i, j) = jac[i][fs.idx[j]];
        Eigen::MatrixXd JtJ = J.transpose() * J;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(JtJ);
        bool ok = lu.isInvertible();
        if (ok) {
            Eigen::MatrixXd cov = lu.inverse() * out.reduced_chi2;
            for (size_t j = 0; j < nf && ok; ++j)
                if (!(cov(j, j) >= 0.0) || !std::isfinite(cov(j, j))) ok = false;
            if (ok) {
                for (size_t j = 0; j < np; ++j) out.stderrs[problem.names[j]] = 0.0;
                for (size_t j = 0; j < nf; ++j)
                    out.stderrs[problem.names[fs.idx[j]]] = std::sqrt(cov(j, j));
            }
        }
        if (!ok) {
            out.singular = true;
            out.stderrs.clear();
            out.warnings.push_back("normal equations singular; standard errors omitted");
        }
    } else {
        for (size_t j = 0; j < np; ++j) out.stderrs[problem.names[j]] = 0.0;
    }
    return out;
}

FitOutcome fit_orbach(const RelaxationDataset& dataset, const FitOptions& options) {
    if (dataset.quantity != RelaxationQuantity::T1)
        throw InputError("activation-energy fit needs a T1 dataset");
    RelaxationDataset ds = dataset;
    ds.sort_and_validate();
    size_t n = ds.points.size();
    if (n < 3) throw InputError("activation-energy fit needs at least 3 points");

    std::vector<double> x(n), y(n), sigma(n);
    for (size_t i = 0; i < n; ++i) {
        const auto& pt = ds.points[i];
        x[i] = 1.0 / pt.temperature_K;
        y[i] = -std::log(pt.time_s);  // ln(1/T1)
        sigma[i] = options.weighted ? pt.sigma_s / pt.time_s : 1.0;
    }
    LinearFit lf = weighted_linear_fit(x, y, sigma);

    double delta_J = -lf.slope * constants::k_boltzmann;
    double prefactor = std::exp(lf.intercept);
    double delta_meV = units::convert_energy(delta_J, units::EnergyUnit::Joule,
                                             units::EnergyUnit::MilliElectronVolt);

    FitOutcome out;
    out.parameters["prefactor_per_s"] = prefactor;
    out.parameters["delta_meV"] = delta_meV;
    out.reduced_chi2 = lf.dof > 0 ? lf.chi2 / lf.dof : 0.0;
    double scale = std::sqrt(out.reduced_chi2);
    out.stderrs["delta_meV"] = units::convert_energy(
        constants::k_boltzmann * lf.stderr_slope * scale, units::EnergyUnit::Joule,
        units::EnergyUnit::MilliElectronVolt);
    out.stderrs["prefactor_per_s"] = prefactor * lf.stderr_intercept * scale;
    out.residuals.resize(n);
    for (size_t i = 0; i < n; ++i)
        out.residuals[i] = (y[i] - lf.intercept - lf.slope * x[i]) / sigma[i];
    out.iterations = 1;
    out.converged = true;
    out.warnings = ds.warnings;
    if (!(delta_J > 0.0))
        out.warnings.push_back("fitted activation energy is not positive");
    return out;
}

double invert_rate_for_D(double target_r2, const mechanisms::DiffusionMechanism& mech,
                         double temperature_K, double D_lo_m2s, double D_hi_m2s) {
    if (!(target_r2 > 0.0) || !std::isfinite(target_r2))
        throw DomainError("target rate must be > 0");
    if (!(D_lo_m2s > 0.0) || !(D_hi_m2s > D_lo_m2s))
        throw InputError("rate inversion needs 0 < D_lo < D_hi");

    // R2 is strictly decreasing in D, so the ends bound the achievable range.
    double r_lo = mechanisms::diffusion_rates_at(mech, temperature_K, D_lo_m2s).r2;
    double r_hi = mechanisms::diffusion_rates_at(mech, temperature_K, D_hi_m2s).r2;
    if (target_r2 > r_lo || target_r2 < r_hi) {
        std::ostringstream msg;
        msg << "target rate " << format_rate(target_r2)
            << " 1/s outside achievable range [" << format_rate(r_hi) << ", "
            << format_rate(r_lo) << "] 1/s for the given diffusion bracket";
        throw BracketError(msg.str(), r_hi, r_lo);
    }
    if (target_r2 == r_lo) return D_lo_m2s;
    if (target_r2 == r_hi) return D_hi_m2s;

    double a = std::log(D_lo_m2s);
    double b = std::log(D_hi_m2s);
    for (int iter = 0; iter < 200 && (b - a) > 1e-10; ++iter) {
        double mid = 0.5 * (a + b);
        double r = mechanisms::diffusion_rates_at(mech, temperature_K, std::exp(mid)).r2;
        if (r >= target_r2)
            a = mid;
        else
            b = mid;
    }
    return std::exp(0.5 * (a + b));
}

namespace {

void require_bracketing(const ParameterSpec& spec, const char* name) {
    if (!(spec.lower <= spec.initial && spec.initial <= spec.upper))
        throw InputError(std::string("diffusion fit: bounds must bracket the initial value of ") +
                         name);
}

double composite_t2(const mechanisms::OrbachParams& orbach, double t2_ratio,
                    const mechanisms::DiffusionMechanism& mech, double T) {
    double r2 = mechanisms::orbach_rates(orbach, T, t2_ratio).r2 +
                mechanisms::diffusion_rates(mech, T).r2;
    return 1.0 / r2;
}

// Interpolate ln D at temperature T inside curve's range; curve sorted by T.
bool interp_log_D(const std::vector<PointwiseD>& curve, double T, double& out) {
    if (curve.empty() || T < curve.front().temperature_K || T > curve.back().temperature_K)
        return false;
    for (size_t i = 0; i < curve.size(); ++i) {
        if (curve[i].temperature_K == T) {
            out = std::log(curve[i].D_m2s);
            return true;
        }
    }
    size_t hi = 1;
    while (hi + 1 < curve.size() && curve[hi].temperature_K < T) ++hi;
    size_t lo = hi - 1;
    double t0 = curve[lo].temperature_K, t1 = curve[hi].temperature_K;
    if (t1 == t0) {
        out = 0.5 * (std::log(curve[lo].D_m2s) + std::log(curve[hi].D_m2s));
        return true;
    }
    double f = (T - t0) / (t1 - t0);
    out = std::log(curve[lo].D_m2s) +
          f * (std::log(curve[hi].D_m2s) - std::log(curve[lo].D_m2s));
    return true;
}

double cross_dataset_inconsistency(const std::vector<std::vector<PointwiseD>>& curves) {
    double metric = 0.0;
    for (size_t a = 0; a < curves.size(); ++a) {
        for (size_t b = 0; b < curves.size(); ++b) {
            if (a == b) continue;
            if (curves[b].size() < 2) continue;
            for (const auto& pt : curves[a]) {
                double ln_other;
                if (!interp_log_D(curves[b], pt.temperature_K, ln_other)) continue;
                double diff = std::log(pt.D_m2s) - ln_other;
                metric += diff * diff;
            }
        }
    }
    return metric;
}

struct PointwiseCandidate {
    std::vector<std::vector<PointwiseD>> recovered;
    std::vector<std::pair<int, int>> excluded;
    std::vector<std::string> warnings;
    double inconsistency = 0.0;
};

PointwiseCandidate evaluate_pointwise(const DiffusionFitSpec& spec,
                                      const std::vector<RelaxationDataset>& datasets,
                                      double d_m) {
    constexpr double D_bracket_lo = 1e-18;  // m^2/s, generously wide
    constexpr double D_bracket_hi = 1e-3;

    PointwiseCandidate cand;
    cand.recovered.resize(datasets.size());
    for (size_t k = 0; k < datasets.size(); ++k) {
        mechanisms::DiffusionMechanism mech = spec.mechanism_templates[k];
        mech.closest_approach_m = d_m;
        const auto& pts = datasets[k].points;
        for (size_t i = 0; i < pts.size(); ++i) {
            double T = pts[i].temperature_K;
            double r2_measured = 1.0 / pts[i].time_s;
            double excess =
                r2_measured - mechanisms::orbach_rates(spec.orbach, T, spec.orbach_t2_ratio).r2;
            if (excess <= 0.0) {
                cand.excluded.emplace_back(static_cast<int>(k), static_cast<int>(i));
                continue;
            }
            try {
                double D = invert_rate_for_D(excess, mech, T, D_bracket_lo, D_bracket_hi);
                cand.recovered[k].push_back({T, D});
            } catch (const BracketError& err) {
                cand.excluded.emplace_back(static_cast<int>(k), static_cast<int>(i));
                std::ostringstream msg;
                msg << "dataset " << k << " point " << i << ": " << err.what();
                cand.warnings.push_back(msg.str());
            }
        }
    }
    cand.inconsistency = cross_dataset_inconsistency(cand.recovered);
    return cand;
}

}  // namespace

DiffusionFitResult fit_diffusion(const DiffusionFitSpec& spec) {
    size_t K = spec.datasets.size();
    if (K == 0) throw InputError("diffusion fit needs at least one dataset");
    if (spec.mechanism_templates.size() != K)
        throw InputError("diffusion fit: one mechanism per dataset required");

    std::vector<RelaxationDataset> datasets = spec.datasets;
    std::vector<std::string> loader_warnings;
    for (auto& ds : datasets) {
        if (ds.quantity != RelaxationQuantity::T2)
            throw InputError("diffusion fit needs T2 datasets");
        ds.sort_and_validate();
        loader_warnings.insert(loader_warnings.end(), ds.warnings.begin(), ds.warnings.end());
    }
    require_bracketing(spec.shared_d_m, "d");

    DiffusionFitResult result;

    if (spec.mode == DiffusionFitMode::Parametric) {
        require_bracketing(spec.solute_D0_m2s, "solute D0");
        require_bracketing(spec.solute_T_activation_K, "solute T_activation");
        require_bracketing(spec.solute_T_vft_K, "solute T_vft");

        NonlinearProblem prob;
        prob.names = {"d_m", "solute_D0_m2s", "solute_T_activation_K", "solute_T_vft_K"};
        prob.initial = {spec.shared_d_m.initial, spec.solute_D0_m2s.initial,
                        spec.solute_T_activation_K.initial, spec.solute_T_vft_K.initial};
        prob.lower = {spec.shared_d_m.lower, spec.solute_D0_m2s.lower,
                      spec.solute_T_activation_K.lower, spec.solute_T_vft_K.lower};
        prob.upper = {spec.shared_d_m.upper, spec.solute_D0_m2s.upper,
                      spec.solute_T_activation_K.upper, spec.solute_T_vft_K.upper};

        bool weighted = spec.options.weighted;
        const auto& templates = spec.mechanism_templates;
        const auto& orbach = spec.orbach;
        double ratio = spec.orbach_t2_ratio;
        prob.residuals = [&datasets, &templates, &orbach, ratio,
                          weighted](std::span<const double> p) {
            std::vector<double> r;
            for (size_t k = 0; k < datasets.size(); ++k) {
                mechanisms::DiffusionMechanism mech = templates[k];
                mech.closest_approach_m = p[0];
                mech.solute_diffusion = solvent::DiffusionModel::parametric(p[1], p[2], p[3]);
                for (const auto& pt : datasets[k].points) {
                    double model = composite_t2(orbach, ratio, mech, pt.temperature_K);
                    double sigma = weighted ? pt.sigma_s : 1.0;
                    r.push_back((pt.time_s - model) / sigma);
                }
            }
            return r;
        };

        result.outcome = nonlinear_least_squares(prob, spec.options);
    } else {
        std::vector<double> grid =
            spec.d_grid_m.empty() ? std::vector<double>{spec.shared_d_m.initial} : spec.d_grid_m;
        for (double d : grid)
            if (!(d > 0.0) || !std::isfinite(d))
                throw InputError("diffusion fit: candidate d values must be > 0");

        PointwiseCandidate best;
        double best_d = grid.front();
        bool first = true;
        for (double d : grid) {
            PointwiseCandidate cand = evaluate_pointwise(spec, datasets, d);
            if (first || cand.inconsistency < best.inconsistency) {
                best = std::move(cand);
                best_d = d;
                first = false;
            }
        }

        result.outcome.parameters["d_m"] = best_d;
        result.outcome.converged = true;
        result.outcome.iterations = static_cast<int>(grid.size());
        result.outcome.excluded_points = best.excluded;
        result.outcome.warnings = best.warnings;
        if (K < 2 && grid.size() > 1)
            result.outcome.warnings.push_back(
                "pointwise d selection needs at least two datasets; first candidate kept");
        result.recovered_D = std::move(best.recovered);
        result.inconsistency = best.inconsistency;
    }

    auto& warn = result.outcome.warnings;
    warn.insert(warn.begin(), loader_warnings.begin(), loader_warnings.end());
    return result;
}

namespace {

struct EchoInit {
    std::vector<std::string> names;
    std::vector<double> initial, lower, upper;
};

std::vector<double> echo_residuals(const EchoTrace& tr, echodecay::EchoModelKind kind,
                                   std::span<const double> p, bool weighted) {
    using echodecay::EchoDecayModel;
    EchoDecayModel model = EchoDecayModel::mono(1.0, 1.0);
    switch (kind) {
        case echodecay::EchoModelKind::Mono:
            model = EchoDecayModel::mono(p[0], p[1]);
            break;
        case echodecay::EchoModelKind::Stretched:
            model = EchoDecayModel::stretched(p[0], p[1], p[2]);
            break;
        case echodecay::EchoModelKind::ModulatedBi:
            model = EchoDecayModel::modulated_bi(p[0], p[1], p[2], p[3], p[4], p[5]);
            break;
    }
    std::vector<double> r;
    r.reserve(tr.points.size());
    for (const auto& pt : tr.points) {
        double sigma = weighted ? pt.sigma : 1.0;
        r.push_back((pt.amplitude - model.evaluate(pt.tau_s)) / sigma);
    }
    return r;
}

FitOutcome run_echo_fit(const EchoTrace& tr, echodecay::EchoModelKind kind, EchoInit init,
                        const FitOptions& options) {
    NonlinearProblem prob;
    prob.names = std::move(init.names);
    prob.initial = std::move(init.initial);
    prob.lower = std::move(init.lower);
    prob.upper = std::move(init.upper);
    bool weighted = options.weighted;
    prob.residuals = [&tr, kind, weighted](std::span<const double> p) {
        return echo_residuals(tr, kind, p, weighted);
    };
    return nonlinear_least_squares(prob, options);
}

EchoInit mono_init(const EchoTrace& tr) {
    double a0 = 0.0;
    for (const auto& pt : tr.points) a0 = std::max(a0, std::abs(pt.amplitude));
    if (a0 <= 0.0) a0 = 1.0;
    double tau_max = tr.points.back().tau_s;
    if (tau_max <= 0.0) tau_max = 1.0;
    double t2 = 2.0 * tau_max;
    for (const auto& pt : tr.points) {
        if (std::abs(pt.amplitude) <= a0 * std::exp(-1.0)) {
            if (pt.tau_s > 0.0) t2 = 2.0 * pt.tau_s;
            break;
        }
    }
    EchoInit init;
    init.names = {"amplitude", "t2_s"};
    init.initial = {a0, t2};
    init.lower = {0.0, 1e-9 * tau_max};
    init.upper = {1e3 * a0, 1e9 * tau_max};
    return init;
}

}  // namespace

FitOutcome fit_echo(const EchoTrace& trace, echodecay::EchoModelKind kind,
                    const FitOptions& options) {
    EchoTrace tr = trace;
    tr.sort_and_validate();
    size_t n = tr.points.size();
    size_t n_params = kind == echodecay::EchoModelKind::Mono        ? 2
                      : kind == echodecay::EchoModelKind::Stretched ? 3
                                                                    : 6;
    if (n < n_params + 2)
        throw InputError("echo fit with " + echodecay::echo_model_name(kind) + " needs at least " +
                         std::to_string(n_params + 2) + " points");

    FitOutcome out;
    switch (kind) {
        case echodecay::EchoModelKind::Mono: {
            out = run_echo_fit(tr, kind, mono_init(tr), options);
            break;
        }
        case echodecay::EchoModelKind::Stretched: {
            FitOutcome mono = run_echo_fit(tr, echodecay::EchoModelKind::Mono, mono_init(tr),
                                           options);
            EchoInit init;
            init.names = {"amplitude", "t2_s", "exponent"};
            init.initial = {mono.parameters.at("amplitude"), mono.parameters.at("t2_s"), 1.5};
            EchoInit base = mono_init(tr);
            init.lower = {base.lower[0], base.lower[1], 1.0};
            init.upper = {base.upper[0], base.upper[1], 3.0};
            out = run_echo_fit(tr, kind, std::move(init), options);
            break;
        }
        case echodecay::EchoModelKind::ModulatedBi: {
            FitOutcome mono = run_echo_fit(tr, echodecay::EchoModelKind::Mono, mono_init(tr),
                                           options);
            double amp = mono.parameters.at("amplitude");
            double t2 = mono.parameters.at("t2_s");

            // Residual spectrum on a discrete frequency grid up to the
            // Nyquist limit of the closest-spaced delays.
            std::vector<double> resid(n);
            for (size_t i = 0; i < n; ++i) {
                double model = amp * std::exp(-2.0 * tr.points[i].tau_s / t2);
                resid[i] = tr.points[i].amplitude - model;
            }
            double dt_min = inf;
            for (size_t i = 1; i < n; ++i)
                dt_min = std::min(dt_min, tr.points[i].tau_s - tr.points[i - 1].tau_s);
            double omega_max = constants::pi / dt_min;
            double best_power = -1.0, omega0 = 0.0, c_best = 0.0, s_best = 0.0;
            constexpr int n_grid = 2048;
            for (int k = 1; k <= n_grid; ++k) {
                double omega = omega_max * k / n_grid;
                double c = 0.0, s = 0.0;
                for (size_t i = 0; i < n; ++i) {
                    c += resid[i] * std::cos(omega * tr.points[i].tau_s);
                    s += resid[i] * std::sin(omega * tr.points[i].tau_s);
                }
                double power = c * c + s * s;
                if (power > best_power) {
                    best_power = power;
                    omega0 = omega;
                    c_best = c;
                    s_best = s;
                }
            }
            double amp_outer = 2.0 * std::sqrt(best_power) / static_cast<double>(n);
            double phase0 = std::atan2(-s_best, c_best);

            EchoInit base = mono_init(tr);
            EchoInit init;
            init.names = {"amp_inner", "t2_inner_s", "amp_outer",
                          "t2_outer_s", "omega_mod_rad_s", "phase_rad"};
            init.initial = {amp, t2, std::max(amp_outer, 1e-6 * amp), t2, omega0, phase0};
            init.lower = {0.0, base.lower[1], 0.0, base.lower[1], 0.0, -7.0};
            init.upper = {base.upper[0], base.upper[1], base.upper[0], base.upper[1],
                          2.0 * omega_max, 7.0};
            out = run_echo_fit(tr, kind, std::move(init), options);
            break;
        }
    }
    out.warnings.insert(out.warnings.begin(), tr.warnings.begin(), tr.warnings.end());
    return out;
}

}  // namespace spinrelax::fitting
