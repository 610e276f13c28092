// Acceptance gate: one pass/fail line per criterion, tolerances pinned here.
// Exit code is the number of failed criteria.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spinrelax/config.hpp"
#include "spinrelax/echodecay.hpp"
#include "spinrelax/errors.hpp"
#include "spinrelax/fitting.hpp"
#include "spinrelax/io.hpp"
#include "spinrelax/mechanisms.hpp"
#include "spinrelax/solvent.hpp"

using namespace spinrelax;

namespace {

const std::string fixtures = TEST_FIXTURES_DIR;
const std::string workdir = TEST_WORK_DIR;
const std::string cli = TEST_CLI_PATH;

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct CliResult {
    int rc = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    try {
        return io::read_text_file(path);
    } catch (const InputError&) {
        return {};
    }
}

CliResult run_cli(const std::string& args) {
    std::string out_path = workdir + "/cli_stdout.txt";
    std::string err_path = workdir + "/cli_stderr.txt";
    std::string cmd = cli + " " + args + " > " + out_path + " 2> " + err_path;
    int status = std::system(cmd.c_str());
    CliResult r;
    r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

// ---------------------------------------------------------------------------

Verdict criterion_spectral_density() {
    if (mechanisms::spectral_density(0.0) != 1.0) return {false, "J(0) != 1"};

    const int n = 10000;
    double prev = mechanisms::spectral_density(1e-4);
    for (int i = 1; i < n; ++i) {
        double z = 1e-4 * std::pow(10.0, 8.0 * i / (n - 1));
        double j = mechanisms::spectral_density(z);
        if (!(j < prev)) {
            std::ostringstream s;
            s << "not strictly decreasing at z = " << z;
            return {false, s.str()};
        }
        prev = j;
    }

    double tail = mechanisms::spectral_density(100.0) * std::pow(100.0, 4.0) / 81.0;
    if (std::abs(tail - 1.0) > 0.05) return {false, "tail J*z^4 off 81 by more than 5%"};

    std::ostringstream s;
    s << "J(0) = 1, strictly decreasing on 1e4-point grid, J(100)*1e8/81 = " << tail;
    return {true, s.str()};
}

Verdict criterion_extreme_narrowing() {
    mechanisms::DiffusionMechanism mech;
    mech.species = species::proton();
    mech.closest_approach_m = 0.35e-9;
    mech.field_T = 0.34;
    mech.concentration = solvent::ConcentrationModel::constant(4.7e28);
    mech.solvent_diffusion = solvent::DiffusionModel::constant(1.0);

    // Pick D so that z(omega_e) = 1e-6, squarely inside z < 1e-4. Exactly at
    // z = 1e-4 the identity only holds to ~2e-5: the deviation shrinks
    // linearly with z, so the regime bound needs headroom.
    double omega_e = zeeman_frequencies(mech.field_T, mech.species).omega_e;
    double d = mech.closest_approach_m;
    double z_target = 1e-6;
    double D = 4.0 * omega_e * d * d / (z_target * z_target);
    auto r = mechanisms::diffusion_rates_at(mech, 300.0, D);
    double rel = std::abs(r.r1 - r.r2) / r.r1;
    std::ostringstream s;
    s << "z(omega_e) = 1e-6: |R1-R2|/R1 = " << rel;
    return {rel < 1e-6, s.str()};
}

Verdict criterion_orbach_recovery() {
    auto truth = mechanisms::OrbachParams::from_meV(5e5, 60.0);
    std::vector<double> temps;
    for (int i = 0; i < 10; ++i) temps.push_back(160.0 + 140.0 * i / 9.0);

    int within = 0;
    double sum = 0.0;
    for (int seed = 1; seed <= 100; ++seed) {
        std::mt19937 rng(1000 + seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        RelaxationDataset ds;
        ds.quantity = RelaxationQuantity::T1;
        for (double T : temps) {
            double t1 = 1.0 / mechanisms::orbach_rates(truth, T).r1;
            double noisy = t1 * (1.0 + 0.03 * gauss(rng));
            ds.points.push_back({T, noisy, 0.03 * t1, ""});
        }
        double delta = fitting::fit_orbach(ds).parameters.at("delta_meV");
        sum += delta;
        if (std::abs(delta - 60.0) <= 2.0) ++within;
    }
    double mean = sum / 100.0;
    std::ostringstream s;
    s << "mean delta = " << mean << " meV, " << within << "/100 seeds within 60 +- 2 meV";
    return {std::abs(mean - 60.0) <= 1.0 && within >= 95, s.str()};
}

Verdict criterion_isotope_ratio() {
    double ratio = mechanisms::kappa(species::proton()) / mechanisms::kappa(species::deuteron());
    if (std::abs(ratio - 15.9) > 0.1) return {false, "kappa ratio off 15.9 by more than 0.1"};

    auto make = [](const NuclearSpecies& sp) {
        mechanisms::DiffusionMechanism mech;
        mech.species = sp;
        mech.closest_approach_m = 0.35e-9;
        mech.field_T = 0.34;
        mech.concentration = solvent::ConcentrationModel::constant(4.7e28);
        mech.solvent_diffusion = solvent::DiffusionModel::constant(1.0);
        return mech;
    };
    auto h = make(species::proton());
    auto d2 = make(species::deuteron());
    double omega_e = zeeman_frequencies(0.34, species::proton()).omega_e;
    double dd = 0.35e-9;
    double D = 4.0 * omega_e * dd * dd / (1e-3 * 1e-3);  // z(omega_e) = 1e-3
    double r2_ratio = mechanisms::diffusion_rates_at(h, 300.0, D).r2 /
                      mechanisms::diffusion_rates_at(d2, 300.0, D).r2;
    double rel = std::abs(r2_ratio - ratio) / ratio;
    std::ostringstream s;
    s << "kappa ratio = " << ratio << ", extreme-narrowing R2 ratio matches to " << rel;
    return {rel < 1e-3, s.str()};
}

Verdict criterion_composite_shape() {
    auto h = config::ConfigDocument::load(fixtures + "/htoluene.json");
    auto d = config::ConfigDocument::load(fixtures + "/dtoluene.json");

    std::vector<double> temps;
    for (double T = 170.0; T <= 300.0; T += 2.5) temps.push_back(T);
    auto t2_h = mechanisms::predict_times(h.channels, temps);
    auto t2_d = mechanisms::predict_times(d.channels, temps);

    size_t imax = 0;
    for (size_t i = 1; i < t2_h.size(); ++i)
        if (t2_h[i].t2_s > t2_h[imax].t2_s) imax = i;
    bool interior = imax > 0 && imax + 1 < t2_h.size() &&
                    t2_h[imax].t2_s > t2_h.front().t2_s && t2_h[imax].t2_s > t2_h.back().t2_s;

    bool ordered = true;
    for (size_t i = 0; i < temps.size(); ++i)
        if (!(t2_h[i].t2_s < t2_d[i].t2_s)) ordered = false;

    std::ostringstream s;
    s << "T2(T) non-monotonic with interior extremum at " << temps[imax]
      << " K (T2 maximum, i.e. R2 minimum); T2(h) < T2(d) at all " << temps.size()
      << " grid points: " << (ordered ? "yes" : "no");
    return {interior && ordered, s.str()};
}

struct SyntheticCampaign {
    fitting::DiffusionFitSpec spec;
    double d_true = 0.35e-9;
};

SyntheticCampaign make_campaign(double noise, unsigned seed) {
    SyntheticCampaign c;
    auto orbach = mechanisms::OrbachParams::from_meV(5e5, 60.0);
    double D0 = 2e-7, Ta = 1200.0, Tv = 150.0;
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    for (const NuclearSpecies& sp : {species::proton(), species::deuteron()}) {
        mechanisms::DiffusionMechanism mech;
        mech.species = sp;
        mech.closest_approach_m = c.d_true;
        mech.field_T = 0.34;
        mech.concentration = solvent::ConcentrationModel::toluene_protons();
        mech.solvent_diffusion = solvent::DiffusionModel::toluene_self_diffusion();
        mech.solute_diffusion = solvent::DiffusionModel::parametric(D0, Ta, Tv);

        RelaxationDataset ds;
        ds.quantity = RelaxationQuantity::T2;
        ds.label = sp.label;
        for (int i = 0; i < 12; ++i) {
            double T = 180.0 + 12.0 * i;
            double r2 = mechanisms::orbach_rates(orbach, T).r2 +
                        mechanisms::diffusion_rates(mech, T).r2;
            double t2 = 1.0 / r2;
            double noisy = noise > 0.0 ? t2 * (1.0 + noise * gauss(rng)) : t2;
            ds.points.push_back({T, noisy, noise > 0.0 ? noise * t2 : 0.01 * t2, ""});
        }
        c.spec.datasets.push_back(ds);

        mech.solute_diffusion = solvent::DiffusionModel::zero();
        c.spec.mechanism_templates.push_back(mech);
    }

    c.spec.orbach = orbach;
    c.spec.mode = fitting::DiffusionFitMode::Parametric;
    c.spec.shared_d_m = {0.30e-9, 0.20e-9, 0.60e-9};
    // The transport model is known at generation time and held fixed: d and
    // the solute amplitude lie in a nearly flat chi^2 valley (both enter
    // mostly through the product d*D once J(omega_e) is in its tail), so T2
    // data at a few percent noise cannot pin both at once. The round trip
    // quantifies d alone.
    c.spec.solute_D0_m2s = {D0, D0, D0};
    c.spec.solute_T_activation_K = {Ta, Ta, Ta};
    c.spec.solute_T_vft_K = {Tv, Tv, Tv};
    return c;
}

Verdict criterion_diffusion_round_trip() {
    auto noiseless = make_campaign(0.0, 0);
    auto clean = fitting::fit_diffusion(noiseless.spec);
    double d_clean = clean.outcome.parameters.at("d_m");
    double clean_err = std::abs(d_clean / noiseless.d_true - 1.0);

    auto noisy = make_campaign(0.05, 20260816);
    auto rough = fitting::fit_diffusion(noisy.spec);
    double d_noisy = rough.outcome.parameters.at("d_m");
    double noisy_err = std::abs(d_noisy / noisy.d_true - 1.0);

    std::ostringstream s;
    s << "noiseless d = " << d_clean * 1e9 << " nm (err " << clean_err * 100.0
      << "%), 5% noise d = " << d_noisy * 1e9 << " nm (err " << noisy_err * 100.0 << "%)";
    return {clean.outcome.converged && clean_err < 1e-3 && rough.outcome.converged &&
                noisy_err < 0.10,
            s.str()};
}

Verdict criterion_mixture_stoichiometry() {
    std::vector<solvent::MixtureComponent> mix = {
        {"CS2", 1.266, 76.14, {}, 0.75},
        {"S2Cl2", 1.688, 135.04, {{"35Cl", 2.0}, {"37Cl", 2.0}}, 0.25},
    };
    double x = solvent::mole_fractions(mix).at("S2Cl2");
    std::ostringstream s;
    s << "25% S2Cl2 by volume -> mole fraction " << x;
    return {std::abs(x - 0.20) <= 0.01, s.str()};
}

Verdict criterion_crossover() {
    double d_min = echodecay::crossover_diffusion(species::chlorine35(), 0.35e-9);
    double d_min_cm2s = d_min * 1e4;
    bool factor2 = d_min_cm2s > 0.5e-10 && d_min_cm2s < 2e-10;

    auto report = echodecay::classify_regime(5e-16 * 1e-4, d_min, 0.12);
    bool slow = report.regime == echodecay::DiffusionRegime::SlowDiffusion;

    std::ostringstream s;
    s << "D_min = " << d_min_cm2s << " cm^2/s (within factor 2 of 1e-10), D = 5e-16 cm^2/s -> "
      << echodecay::regime_name(report.regime);
    return {factor2 && slow, s.str()};
}

Verdict criterion_scaling_exponent() {
    std::vector<double> t2 = {230e-6, 20e-6};
    std::vector<double> D = {1e-15 * 1e-4, 1e-10 * 1e-4};
    double p = echodecay::scaling_exponent(t2, D).exponent;
    if (std::abs(p - 0.212) > 0.005) return {false, "endpoint exponent off 0.212"};

    std::vector<double> Ds, t2s;
    for (double d = 1e-16; d < 1e-9; d *= 10.0) {
        Ds.push_back(d);
        t2s.push_back(4.2e-5 * std::pow(d, -0.36));
    }
    double p2 = echodecay::scaling_exponent(t2s, Ds).exponent;
    std::ostringstream s;
    s << "endpoints p = " << p << ", exact power law p = " << p2;
    return {std::abs(p2 - 0.36) <= 1e-6, s.str()};
}

Verdict criterion_solvent_formulas() {
    for (double T = 150.0; T <= 300.0; T += 1.0) {
        double c = solvent::proton_concentration_toluene(T);
        if (c < 4.4e22 || c > 5.3e22) {
            std::ostringstream s;
            s << "concentration " << c << " outside [4.4e22, 5.3e22] at " << T << " K";
            return {false, s.str()};
        }
    }
    double D300 = solvent::toluene_self_diffusion(300.0);
    double rel = std::abs(D300 / 2.04e-5 - 1.0);
    std::ostringstream s;
    s << "concentration within [4.4e22, 5.3e22] over 150-300 K; D(300 K) = " << D300
      << " cm^2/s (" << rel * 100.0 << "% from 2.04e-5)";
    return {rel < 0.005, s.str()};
}

EchoTrace synth_echo(const echodecay::EchoDecayModel& model, double noise, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    EchoTrace tr;
    for (double tau = 5e-6; tau <= 300e-6; tau += 5e-6) {
        double v = model.evaluate(tau) + noise * gauss(rng);
        tr.points.push_back({tau, v, noise > 0.0 ? noise : 1e-4});
    }
    return tr;
}

Verdict criterion_echo_fits() {
    // Mono at 2% noise: T2 recovered within 5%.
    auto mono_truth = echodecay::EchoDecayModel::mono(1.0, 230e-6);
    auto mono_fit = fitting::fit_echo(synth_echo(mono_truth, 0.02, 7), echodecay::EchoModelKind::Mono);
    double t2 = mono_fit.parameters.at("t2_s");
    double t2_err = std::abs(t2 / 230e-6 - 1.0);
    if (!(mono_fit.converged && t2_err < 0.05)) {
        std::ostringstream s;
        s << "mono T2 = " << t2 * 1e6 << " us, err " << t2_err * 100.0 << "%";
        return {false, s.str()};
    }

    // Stretched n = 9/8 against mono: the reduced-chi^2 gap separates the
    // models only when the noise is small.
    auto stretched_truth = echodecay::EchoDecayModel::stretched(1.0, 230e-6, 9.0 / 8.0);
    auto ratio_at = [&](double noise, unsigned seed) {
        auto tr = synth_echo(stretched_truth, noise, seed);
        auto as_mono = fitting::fit_echo(tr, echodecay::EchoModelKind::Mono);
        auto as_stretched = fitting::fit_echo(tr, echodecay::EchoModelKind::Stretched);
        return as_mono.reduced_chi2 / as_stretched.reduced_chi2;
    };
    double gap_realistic = ratio_at(0.02, 11);
    double gap_clean = ratio_at(0.001, 12);

    std::ostringstream s;
    s << "mono T2 err " << t2_err * 100.0 << "%; chi2red(mono)/chi2red(stretched) = "
      << gap_realistic << " at 2% noise, " << gap_clean << " at 0.1% noise";
    return {gap_realistic < 3.0 && gap_clean >= 3.0, s.str()};
}

Verdict criterion_cli_robustness() {
    std::vector<std::string> problems;

    // Malformed inputs: exit code 2 with row/field-addressed diagnostics.
    auto bad_csv = run_cli("fit-orbach --data " + fixtures + "/relax_bad_number.csv");
    if (bad_csv.rc != 2) problems.push_back("bad CSV exit code " + std::to_string(bad_csv.rc));
    if (!contains(bad_csv.err, "row 3")) problems.push_back("bad CSV diagnostic lacks row");

    auto bad_config = run_cli("predict --config " + fixtures +
                              "/bad_missing_key.json --temps 200:300:3");
    if (bad_config.rc != 2)
        problems.push_back("bad config exit code " + std::to_string(bad_config.rc));
    if (!contains(bad_config.err, "/channels/0") ||
        !contains(bad_config.err, "closest_approach_nm"))
        problems.push_back("bad config diagnostic lacks key path");

    auto bad_species = run_cli("predict --config " + fixtures +
                               "/bad_species.json --temps 200:300:3");
    if (bad_species.rc != 2 || !contains(bad_species.err, "3He"))
        problems.push_back("unknown species not diagnosed");

    auto bad_grid = run_cli("predict --config " + fixtures + "/htoluene.json --temps 300:200:0");
    if (bad_grid.rc != 2) problems.push_back("bad grid exit code " + std::to_string(bad_grid.rc));

    // Byte-stable machine-readable reports across repeated runs.
    auto stable = [&](const std::string& name, const std::string& args_a,
                      const std::string& file_a, const std::string& args_b,
                      const std::string& file_b) {
        auto ra = run_cli(args_a);
        auto rb = run_cli(args_b);
        if (ra.rc != 0 || rb.rc != 0) {
            problems.push_back(name + " exit codes " + std::to_string(ra.rc) + "/" +
                               std::to_string(rb.rc));
            return;
        }
        if (ra.out != rb.out) problems.push_back(name + " stdout differs between runs");
        std::string a = slurp(file_a), b = slurp(file_b);
        if (a.empty() || a != b) problems.push_back(name + " report differs between runs");
    };

    std::string h = fixtures + "/htoluene.json";
    stable("predict",
           "predict --config " + h + " --temps 170:300:14 --out " + workdir +
               "/p1.json --plot " + workdir + "/p1.tsv",
           workdir + "/p1.json",
           "predict --config " + h + " --temps 170:300:14 --out " + workdir +
               "/p2.json --plot " + workdir + "/p2.tsv",
           workdir + "/p2.json");
    std::string p1tsv = slurp(workdir + "/p1.tsv"), p2tsv = slurp(workdir + "/p2.tsv");
    if (p1tsv.empty() || p1tsv != p2tsv) problems.push_back("predict plot differs between runs");

    stable("fit-orbach",
           "fit-orbach --data " + fixtures + "/relax_good_t1.csv --out " + workdir + "/o1.json",
           workdir + "/o1.json",
           "fit-orbach --data " + fixtures + "/relax_good_t1.csv --out " + workdir + "/o2.json",
           workdir + "/o2.json");

    stable("fit-echo",
           "fit-echo --data " + fixtures + "/echo_good.csv --model mono --out " + workdir +
               "/e1.json",
           workdir + "/e1.json",
           "fit-echo --data " + fixtures + "/echo_good.csv --model mono --out " + workdir +
               "/e2.json",
           workdir + "/e2.json");

    stable("regime",
           "regime --config " + fixtures + "/cs2_mixture.json --D 1e-10 --out " + workdir +
               "/r1.json",
           workdir + "/r1.json",
           "regime --config " + fixtures + "/cs2_mixture.json --D 1e-10 --out " + workdir +
               "/r2.json",
           workdir + "/r2.json");

    // Synthetic data generation is deterministic under a fixed seed, and the
    // full synth -> fit-diffusion pipeline produces byte-stable reports.
    auto s1 = run_cli("synth relax --config " + h + " --quantity T2 --temps 180:300:7" +
                      " --noise 0.02 --seed 7 --out " + workdir + "/h1.csv");
    auto s2 = run_cli("synth relax --config " + h + " --quantity T2 --temps 180:300:7" +
                      " --noise 0.02 --seed 7 --out " + workdir + "/h2.csv");
    if (s1.rc != 0 || s2.rc != 0 || slurp(workdir + "/h1.csv").empty() ||
        slurp(workdir + "/h1.csv") != slurp(workdir + "/h2.csv"))
        problems.push_back("seeded synth output not reproducible");

    auto noseed = run_cli("synth relax --config " + h + " --quantity T2 --temps 180:300:7" +
                          " --noise 0.02 --out " + workdir + "/h3.csv");
    if (noseed.rc != 2) problems.push_back("synth with noise but no seed not rejected");

    std::string d = fixtures + "/dtoluene.json";
    run_cli("synth relax --config " + d + " --quantity T2 --temps 180:300:7 --noise 0.02" +
            " --seed 8 --out " + workdir + "/d1.csv");
    std::string fd = fixtures + "/fitdiff_pointwise.json";
    stable("fit-diffusion",
           "fit-diffusion --config " + fd + " --data " + workdir + "/h1.csv --data " + workdir +
               "/d1.csv --out " + workdir + "/f1.json",
           workdir + "/f1.json",
           "fit-diffusion --config " + fd + " --data " + workdir + "/h1.csv --data " + workdir +
               "/d1.csv --out " + workdir + "/f2.json",
           workdir + "/f2.json");

    if (problems.empty())
        return {true,
                "malformed inputs exit 2 with addressed diagnostics; reports byte-stable"};
    std::string joined;
    for (const auto& p : problems) joined += (joined.empty() ? "" : "; ") + p;
    return {false, joined};
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        double limit_s;
        std::function<Verdict()> check;
    };
    const std::vector<Criterion> criteria = {
        {1, "spectral density shape", 1.0, criterion_spectral_density},
        {2, "extreme narrowing identity", 1.0, criterion_extreme_narrowing},
        {3, "activation-energy recovery", 5.0, criterion_orbach_recovery},
        {4, "isotope coupling ratio", 1.0, criterion_isotope_ratio},
        {5, "composite model shape", 5.0, criterion_composite_shape},
        {6, "diffusion-fit round trip", 30.0, criterion_diffusion_round_trip},
        {7, "mixture stoichiometry", 1.0, criterion_mixture_stoichiometry},
        {8, "crossover coefficient", 1.0, criterion_crossover},
        {9, "scaling exponent", 1.0, criterion_scaling_exponent},
        {10, "solvent formulas", 1.0, criterion_solvent_formulas},
        {11, "echo-decay fits", 10.0, criterion_echo_fits},
        {12, "CLI robustness", 5.0, criterion_cli_robustness},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& err) {
            v = {false, std::string("exception: ") + err.what()};
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = elapsed < c.limit_s;
        bool pass = v.pass && in_time;
        if (!pass) ++failed;
        std::printf("criterion %2d (%s): %s [%.2f s%s] %s\n", c.number, c.name,
                    pass ? "PASS" : "FAIL", elapsed,
                    in_time ? "" : (" > limit " + std::to_string(c.limit_s) + " s").c_str(),
                    v.detail.c_str());
    }
    if (failed == 0)
        std::printf("all 12 acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failed);
    return failed;
}
