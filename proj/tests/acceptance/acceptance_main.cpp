// End-to-end acceptance suite. Each criterion prints exactly one
// PASS/FAIL line; the process exits with the number of failures.

#include "wavelab/commands.hpp"
#include "wavelab/harness.hpp"
#include "wavelab/initial_conditions.hpp"
#include "wavelab/io.hpp"
#include "wavelab/spectral.hpp"
#include "wavelab/timestep.hpp"

#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace wavelab;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s | criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (int j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("wavelab_acceptance_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// --- criterion 1: spectral exactness on every resolved single mode -------

void criterion_spectral_exactness() {
    const GridPtr g = make_grid(2.0 * M_PI, 64);
    const double tol = 1e-11;
    double worst = 0.0;
    for (int k = 0; k <= 31; ++k) {
        for (bool use_sin : {false, true}) {
            if (use_sin && k == 0) continue;
            const Field mode = Field::sample(g, [=](double x) {
                return use_sin ? std::sin(k * x) : std::cos(k * x);
            });
            const Field anti = Field::sample(g, [=](double x) {
                return use_sin ? std::cos(k * x) : -std::sin(k * x);
            });

            const auto rel = [](double err, double scale) {
                return err / std::max(scale, 1.0);
            };
            worst = std::max(worst, rel(max_abs_diff(derivative(mode, 1),
                                                     static_cast<double>(k) * anti),
                                        static_cast<double>(k)));
            for (double s : {1.6, -2.0}) {
                const double sym = std::pow(1.0 + k * k, 0.5 * s);
                worst = std::max(
                    worst, rel(max_abs_diff(bessel_potential(mode, s), sym * mode), sym));
            }
            const double mb = -0.01;
            const double hsym = 1.0 / (1.0 - mb * k * k);
            worst = std::max(
                worst, rel(max_abs_diff(helmholtz_inverse(mode, mb), hsym * mode), hsym));
        }
    }
    report(1, "spectral exactness on single modes", worst < tol,
           "worst relative error " + fmt_double(worst) + " < 1e-11");
}

// --- criterion 2: multiplier inequality chain -----------------------------

void criterion_multiplier_chain() {
    long violations = 0;
    double worst = 0.0;
    for (double mu : {0.01, 0.05, 0.1}) {
        for (double beta : {-0.5, -1.0, -2.0}) {
            if (!(std::abs(mu * beta) < 1.0)) continue;
            const auto rep = multiplier_inequality_check(mu, beta, 1e4, 100000);
            violations += rep.violations;
            worst = std::max(worst, rep.max_ratio);
        }
    }
    report(2, "pointwise multiplier inequality", violations == 0,
           "0 violations over 9 parameter pairs x 1e5 samples, max ratio " +
               fmt_double(worst));
}

// --- criterion 3: linear dispersion ---------------------------------------

void criterion_dispersion() {
    const GridPtr g = make_grid(2.0 * M_PI, 64);
    const ModelParams p;
    const double a = 1e-5;
    const double T = 1.0;
    const double tol = 1e-6 + 10.0 * a;
    const Rhs rhs = make_rhs(p, RhsChoice::direct());

    bool ok = true;
    std::string detail;
    for (int k : {1, 2, 4}) {
        const Field u0 = ic_sine(g, a, k);
        const Field uT = march_fixed(u0, 1e-3, T, rhs);
        const std::complex<double> c0 = forward(u0).coeff(k);
        const std::complex<double> cT = forward(uT).coeff(k);
        const double omega_obs = -std::arg(cT / c0) / T;
        const double speed_obs = omega_obs / k;
        const double speed_th = dispersion_omega(p, k) / k;
        const double rel = std::abs(speed_obs - speed_th) / std::abs(speed_th);
        if (rel > tol) ok = false;
        detail += "k=" + std::to_string(k) + ": " + fmt_double(rel) + " ";
    }
    report(3, "linear dispersion phase speeds", ok, detail + "<= " + fmt_double(tol));
}

// --- criterion 4: reformulation equivalence -------------------------------

void criterion_equivalence() {
    const fs::path dir = fresh_dir("equivalence");
    KeyValueFile kv = KeyValueFile::parse_string("grid.n = 256\nequivalence.n_fields = 20\n",
                                                 "acceptance");
    const RunConfig cfg = RunConfig::from_kv(kv);
    cli::CliOptions opts;
    opts.out_dir = (dir / "out").string();
    opts.quiet = true;
    const int rc = cli::cmd_equivalence(cfg, opts);

    const auto rec = nlohmann::json::parse(slurp(dir / "out" / "run.json"));
    const double worst_re = rec["worst_rederived_residual"];
    const double worst_ap = rec["worst_as_printed_residual"];
    const std::string csv = slurp(dir / "out" / "equivalence.csv");
    const bool has_as_printed = csv.find("as_printed") != std::string::npos;

    report(4, "rederived flux is equivalent to the direct form",
           rc == cli::kExitOk && worst_re <= 1e-8 && has_as_printed,
           "worst rederived residual " + fmt_double(worst_re) +
               " <= 1e-8; as-printed residual " + fmt_double(worst_ap) +
               " recorded in equivalence.csv");
    fs::remove_all(dir);
}

// --- criterion 5: mass conservation ---------------------------------------

void criterion_mass() {
    const GridPtr g = make_grid(2.0 * M_PI, 256);
    const Field u0 = ic_gaussian(g, 0.1, M_PI, 1.0);
    StepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 10.0;
    const Trajectory traj = integrate(u0, ModelParams{}, cfg, RhsChoice::direct());
    double drift = 0.0;
    const double m0 = traj.monitors.front().mass;
    for (const auto& m : traj.monitors)
        drift = std::max(drift, std::abs(m.mass - m0));
    const double rel = drift / std::max(1.0, std::abs(m0));
    report(5, "mass conservation to t_end = 10",
           traj.termination == Termination::ReachedTEnd && rel <= 1e-9,
           "relative drift " + fmt_double(rel) + " <= 1e-9");
}

// --- criterion 6: temporal order and spatial spectral accuracy ------------

void criterion_orders() {
    const ModelParams p;
    const Rhs rhs = make_rhs(p, RhsChoice::direct());

    const GridPtr g = make_grid(2.0 * M_PI, 256);
    const Field u0 = dealias(ic_gaussian(g, 0.1, M_PI, 1.0));
    StepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    const std::vector<double> dts = {1e-2, 5e-3, 2.5e-3};
    const ObservedOrder ord = observed_order(u0, p, cfg, dts, RhsChoice::direct());
    const bool slope_ok = !ord.degenerate && std::abs(ord.slope - 4.0) <= 0.2;

    const GridPtr g_ref = make_grid(2.0 * M_PI, 1024);
    const Field ref = march_fixed(dealias(ic_gaussian(g_ref, 0.1, M_PI, 1.0)), 1e-3, 1.0, rhs);
    const Field coarse = march_fixed(u0, 1e-3, 1.0, rhs);

    const Spectrum sc = forward(coarse);
    const Spectrum sf = forward(ref);
    double acc = 0.0;
    for (int pos = 0; pos < g_ref->size(); ++pos) {
        const int mode = g_ref->mode_at(pos);
        std::complex<double> a(0.0, 0.0);
        if (std::abs(mode) < 128) a = sc.coeff(mode);
        acc += std::norm(a - sf.coeffs()[pos]);
    }
    const double err = std::sqrt(g_ref->length() * acc);
    const double rel = err / sobolev_norm(ref, 0.0);
    const bool spatial_ok = rel <= 1e-8;

    report(6, "temporal order 4 and spectral spatial accuracy", slope_ok && spatial_ok,
           "RK4 slope " + fmt_double(ord.slope) + " in [3.8, 4.2]; n=256 vs n=1024 error " +
               fmt_double(rel) + " <= 1e-8");
}

// --- criterion 7: estimate-ladder reports ----------------------------------

void criterion_estimators() {
    const GridPtr g = make_grid(2.0 * M_PI, 256);
    const ModelParams p;
    bool ok = true;
    std::string why;
    const auto need = [&](const EstimateReport& rep, const std::string& ctx) {
        if (!std::isfinite(rep.max_ratio) || !rep.stable) {
            ok = false;
            why += rep.label + "@" + ctx + " ";
        }
    };

    for (double s : {1.6, 2.0}) {
        SampleSpec spec;
        spec.s = s;
        spec.n_samples = 200;
        const std::string ctx = "s=" + fmt_double(s);

        need(a2_operator_ratio(g, spec), ctx);
        const EstimateReport bnd = b_bound_ratio(g, spec);
        need(bnd, ctx);
        const EstimateReport lip = b_lipschitz_ratio(g, spec);
        need(lip, ctx);
        if (lip.max_ratio > 1.25 * bnd.max_ratio) {
            ok = false;
            why += "remainder-lipschitz-regression@" + ctx + " ";
        }

        for (NormIndex norm : {NormIndex::L2, NormIndex::Hs}) {
            double prev = -1.0;
            for (double radius : {0.5, 1.0, 2.0}) {
                SampleSpec rs = spec;
                rs.radius = radius;
                const EstimateReport rep =
                    f_lipschitz_ratio(g, rs, p, FluxVariant::Rederived, norm);
                need(rep, ctx + ",r=" + fmt_double(radius));
                if (rep.median_ratio < prev) {
                    ok = false;
                    why += "flux-median-monotonicity@" + ctx + " ";
                }
                prev = rep.median_ratio;
            }
        }

        for (double t : {-1.0, 0.0, 1.0, s})
            need(product_estimate_ratio(g, spec, t), ctx + ",t=" + fmt_double(t));

        const EstimateReport comm = commutator_estimate_ratio(g, spec, 0.0, s - 1.0);
        need(comm, ctx);
        if (comm.max_ratio > 2.0 * bnd.max_ratio || bnd.max_ratio > 2.0 * comm.max_ratio) {
            ok = false;
            why += "commutator-vs-remainder-consistency@" + ctx + " ";
        }
    }
    report(7, "estimate ladder finite and sample-stable", ok,
           ok ? "all reports stable at s in {1.6, 2.0}, radii {0.5, 1, 2}" : why);
}

// --- criterion 8: accretivity identity -------------------------------------

void criterion_accretivity() {
    const GridPtr g = make_grid(2.0 * M_PI, 256);
    SampleSpec spec;
    spec.n_samples = 100;
    spec.seed = 42;
    const EstimateReport rep = accretivity_identity_suite(g, spec);
    const double margin = rep.extras.at("min_quadratic_form_margin");
    report(8, "transport quadratic-form identity and lower bound",
           rep.max_ratio <= 1e-10 && margin >= -1e-10,
           "identity residual " + fmt_double(rep.max_ratio) +
               " <= 1e-10 over 100 pairs, bound margin " + fmt_double(margin));
}

// --- criterion 9: continuous dependence ------------------------------------

void criterion_continuous_dependence() {
    const GridPtr g = make_grid(2.0 * M_PI, 256);
    const Field u0 = ic_gaussian(g, 0.1, M_PI, 1.0);
    StepperConfig cfg;
    cfg.dt = 1e-3;
    const std::vector<double> deltas = {1e-2, 1e-3, 1e-4};
    const ContinuousDependenceReport rep =
        continuous_dependence(u0, deltas, ModelParams{}, cfg, 1.0, 2.0, 42);

    bool ok = !rep.propagated_blowup && rep.deltas.size() == 3;
    std::string detail;
    if (ok) {
        for (size_t i = 0; i < rep.deltas.size(); ++i) {
            if (!std::isfinite(rep.amplification[i])) ok = false;
            detail += "D(" + fmt_double(rep.deltas[i]) + ")=" +
                      fmt_double(rep.amplification[i]) + " ";
        }
        const double ratio = rep.amplification[1] / rep.amplification[2];
        if (!(ratio >= 0.1 && ratio <= 10.0)) ok = false;
        detail += "ratio " + fmt_double(ratio) + " in [0.1, 10]";
    } else {
        detail = "run did not reach T";
    }
    report(9, "continuous dependence on initial data", ok, detail);
}

// --- criterion 10: byte-identical reruns ------------------------------------

void criterion_determinism() {
    const fs::path dir = fresh_dir("determinism");
    const std::string solve_cfg =
        "grid.n = 128\n"
        "ic.kind = gaussian\n"
        "stepper.dt = 1e-3\n"
        "stepper.t_end = 0.5\n"
        "outputs.write_snapshots = true\n";
    const std::string verify_cfg =
        "grid.n = 128\n"
        "verify.n_samples = 40\n"
        "verify.seed = 42\n";

    KeyValueFile kv1 = KeyValueFile::parse_string(solve_cfg, "acc");
    const RunConfig solve = RunConfig::from_kv(kv1);
    KeyValueFile kv2 = KeyValueFile::parse_string(verify_cfg, "acc");
    const RunConfig verify = RunConfig::from_kv(kv2);

    bool ok = true;
    std::string why = "monitors.csv, snapshots, lemmas.jsonl and run.json agree";
    const auto run_pair = [&](const RunConfig& cfg, const std::string& tag,
                              int (*cmd)(const RunConfig&, const cli::CliOptions&)) {
        for (int i : {1, 2}) {
            cli::CliOptions opts;
            opts.out_dir = (dir / (tag + std::to_string(i))).string();
            opts.quiet = true;
            if (cmd(cfg, opts) != cli::kExitOk) {
                ok = false;
                why = tag + " run failed";
            }
        }
    };
    run_pair(solve, "solve", &cli::cmd_solve);
    run_pair(verify, "verify", &cli::cmd_verify_lemmas);

    const auto same_bytes = [&](const std::string& a, const std::string& b) {
        return slurp(dir / a) == slurp(dir / b);
    };
    if (!same_bytes("solve1/monitors.csv", "solve2/monitors.csv")) {
        ok = false;
        why = "monitors.csv differs";
    }
    if (!same_bytes("solve1/snapshots/index.csv", "solve2/snapshots/index.csv")) {
        ok = false;
        why = "snapshot index differs";
    }
    if (!same_bytes("verify1/lemmas.jsonl", "verify2/lemmas.jsonl")) {
        ok = false;
        why = "lemmas.jsonl differs";
    }
    // run.json may differ only in its wall-clock keys.
    for (const std::string tag : {"solve", "verify"}) {
        auto a = nlohmann::json::parse(slurp(dir / (tag + "1") / "run.json"));
        auto b = nlohmann::json::parse(slurp(dir / (tag + "2") / "run.json"));
        for (auto* j : {&a, &b}) {
            j->erase("started_at");
            j->erase("finished_at");
        }
        if (a != b) {
            ok = false;
            why = tag + " run.json differs beyond timestamps";
        }
    }
    report(10, "byte-identical reruns", ok, why);
    fs::remove_all(dir);
}

}  // namespace

int main() {
    criterion_spectral_exactness();
    criterion_multiplier_chain();
    criterion_dispersion();
    criterion_equivalence();
    criterion_mass();
    criterion_orders();
    criterion_estimators();
    criterion_accretivity();
    criterion_continuous_dependence();
    criterion_determinism();

    if (failures == 0)
        std::printf("acceptance: all 10 criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return failures;
}
