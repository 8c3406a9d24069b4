#include "wavelab/commands.hpp"

#include "wavelab/digest.hpp"
#include "wavelab/errors.hpp"
#include "wavelab/harness.hpp"
#include "wavelab/initial_conditions.hpp"
#include "wavelab/io.hpp"
#include "wavelab/spectral.hpp"
#include "wavelab/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

namespace wavelab::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

void say(const CliOptions& opts, const std::string& msg) {
    if (!opts.quiet) std::cout << msg << "\n";
}

ordered_json base_record(const RunConfig& cfg, const std::string& command,
                         const std::string& started) {
    ordered_json j;
    j["version"] = kVersion;
    j["config_digest"] = cfg.digest();
    j["command"] = command;
    j["termination"] = nullptr;
    j["breaking_time"] = nullptr;
    j["warnings"] = ordered_json::array();
    j["started_at"] = started;
    return j;
}

void finish_record(ordered_json& j, const std::filesystem::path& out_dir) {
    j["finished_at"] = iso_now();
    write_text_atomic(out_dir / "run.json", j.dump(2) + "\n");
}

ordered_json report_json(const EstimateReport& r) {
    ordered_json j;
    j["label"] = r.label;
    j["s"] = r.s;
    j["radius"] = r.radius;
    j["n_samples"] = r.n_samples;
    j["seed"] = r.seed;
    j["max_ratio"] = r.max_ratio;
    j["median_ratio"] = r.median_ratio;
    j["stable"] = r.stable;
    j["params_digest"] = r.params_digest;
    for (const auto& [k, v] : r.extras) j[k] = v;
    return j;
}

void write_monitors_csv(const Trajectory& traj, const std::filesystem::path& path) {
    CsvWriter csv({"t", "dt", "mass", "l2", "hs", "min_ux", "max_abs_u"});
    for (const auto& m : traj.monitors)
        csv.add_row({fmt_double(m.t), fmt_double(m.dt_used), fmt_double(m.mass),
                     fmt_double(m.l2), fmt_double(m.hs), fmt_double(m.min_ux),
                     fmt_double(m.max_abs_u)});
    csv.write(path);
}

void write_snapshots(const Trajectory& traj, const std::filesystem::path& dir) {
    CsvWriter index({"index", "t", "file"});
    for (size_t i = 0; i < traj.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "snap_%05zu.csv", i);
        CsvWriter snap({"x", "u"});
        const Field& f = traj.snapshots[i];
        for (int j = 0; j < f.size(); ++j)
            snap.add_row({fmt_double(f.grid()->nodes()[j]), fmt_double(f[j])});
        snap.write(dir / name);
        index.add_row({std::to_string(i), fmt_double(traj.times[i]), name});
    }
    index.write(dir / "index.csv");
}

int exit_code_for(Termination t) {
    switch (t) {
        case Termination::ReachedTEnd: return kExitOk;
        case Termination::BreakingDetected: return kExitBreaking;
        default: return kExitNumerical;
    }
}

RunConfig with_seed_override(RunConfig cfg, const CliOptions& opts) {
    if (opts.seed) {
        cfg.verify.seed = *opts.seed;
        cfg.ic.seed = *opts.seed;
    }
    return cfg;
}

// L2 distance between solutions on nested grids, evaluated mode by mode
// on the finer mode set with the coarse spectrum zero-extended.
double cross_grid_l2_error(const Field& coarse, const Field& fine) {
    const Spectrum sc = forward(coarse);
    const Spectrum sf = forward(fine);
    const int nc = coarse.grid()->size();
    double acc = 0.0;
    for (int p = 0; p < fine.grid()->size(); ++p) {
        const int mode = fine.grid()->mode_at(p);
        std::complex<double> a(0.0, 0.0);
        if (std::abs(mode) < nc / 2) a = sc.coeff(mode);
        acc += std::norm(a - sf.coeffs()[p]);
    }
    return std::sqrt(fine.grid()->length() * acc);
}

}  // namespace

std::filesystem::path resolve_out_dir(const RunConfig& cfg, const CliOptions& opts) {
    if (opts.out_dir) return *opts.out_dir;
    if (const char* env = std::getenv("WAVELAB_OUT"); env && *env) return env;
    return cfg.outputs.out_dir;
}

int cmd_solve(const RunConfig& cfg_in, const CliOptions& opts) {
    const RunConfig cfg = with_seed_override(cfg_in, opts);
    const auto out_dir = resolve_out_dir(cfg, opts);
    const std::string started = iso_now();

    const GridPtr grid = cfg.build_grid();
    const Field u0 = cfg.build_initial_condition(grid);
    say(opts, "solve: n=" + std::to_string(cfg.grid_n) + " rhs=" + cfg.rhs.name() +
                  " t_end=" + fmt_double(cfg.stepper.t_end));

    const Trajectory traj =
        integrate(u0, cfg.params, cfg.stepper, cfg.rhs, cfg.outputs.monitor_s);

    write_monitors_csv(traj, out_dir / "monitors.csv");
    if (cfg.outputs.write_snapshots) write_snapshots(traj, out_dir / "snapshots");

    ordered_json rec = base_record(cfg, "solve", started);
    rec["termination"] = to_string(traj.termination);
    if (std::isfinite(traj.breaking_time)) rec["breaking_time"] = traj.breaking_time;
    for (const auto& w : traj.warnings) rec["warnings"].push_back(w);
    const MonitorRecord& last = traj.monitors.back();
    rec["final"] = {{"t", last.t},
                    {"mass", last.mass},
                    {"l2", last.l2},
                    {"hs", last.hs},
                    {"min_ux", last.min_ux},
                    {"max_abs_u", last.max_abs_u}};
    rec["accepted_steps"] = traj.monitors.size() - 1;
    rec["slope_threshold"] = traj.slope_threshold_used;
    finish_record(rec, out_dir);

    say(opts, "solve: termination=" + to_string(traj.termination) +
                  " steps=" + std::to_string(traj.monitors.size() - 1));
    return exit_code_for(traj.termination);
}

int cmd_verify_lemmas(const RunConfig& cfg_in, const CliOptions& opts) {
    const RunConfig cfg = with_seed_override(cfg_in, opts);
    const auto out_dir = resolve_out_dir(cfg, opts);
    const std::string started = iso_now();
    const GridPtr grid = cfg.build_grid();

    std::vector<ordered_json> lines;
    std::vector<std::string> failures;

    const auto check = [&](const EstimateReport& rep, const std::string& context) {
        lines.push_back(report_json(rep));
        if (!rep.stable) failures.push_back(rep.label + context + " is not sample-stable");
        if (!std::isfinite(rep.max_ratio))
            failures.push_back(rep.label + context + " has a non-finite max ratio");
    };

    std::vector<double> s_values = {cfg.verify.s};
    if (std::abs(cfg.verify.s - 1.6) > 1e-12) s_values.push_back(1.6);

    for (double s : s_values) {
        SampleSpec spec = cfg.verify;
        spec.s = s;
        const std::string ctx = " (s=" + fmt_double(s) + ")";

        check(a2_operator_ratio(grid, spec), ctx);

        const EstimateReport b_rep = b_bound_ratio(grid, spec);
        check(b_rep, ctx);
        const EstimateReport b_lip = b_lipschitz_ratio(grid, spec);
        check(b_lip, ctx);
        if (b_lip.max_ratio > 1.25 * b_rep.max_ratio)
            failures.push_back("conjugation_remainder_lipschitz" + ctx +
                               " exceeds the remainder-bound constant by more than 25%");

        for (NormIndex norm : {NormIndex::L2, NormIndex::Hs}) {
            double prev_median = -1.0;
            for (double radius : {0.5, 1.0, 2.0}) {
                SampleSpec rspec = spec;
                rspec.radius = radius;
                const EstimateReport rep =
                    f_lipschitz_ratio(grid, rspec, cfg.params, FluxVariant::Rederived, norm);
                check(rep, ctx + " radius=" + fmt_double(radius));
                if (rep.median_ratio < prev_median)
                    failures.push_back(rep.label + ctx +
                                       ": median ratio decreased when the ball grew");
                prev_median = rep.median_ratio;
            }
        }

        for (double t : {-1.0, 0.0, 1.0, s})
            check(product_estimate_ratio(grid, spec, t), ctx + " t=" + fmt_double(t));

        check(commutator_estimate_ratio(grid, spec, 0.0, s - 1.0), ctx);
    }

    const EstimateReport acc = accretivity_identity_suite(grid, cfg.verify);
    check(acc, "");
    if (acc.max_ratio > 1e-10)
        failures.push_back("accretivity_identity residual exceeds 1e-10");
    if (acc.extras.at("min_quadratic_form_margin") < -1e-10)
        failures.push_back("accretivity_identity lower bound violated");

    const MultiplierChainReport chain =
        multiplier_inequality_check(cfg.params.mu, cfg.params.beta, 1e4, 100000);
    {
        ordered_json j;
        j["label"] = "helmholtz_derivative_multiplier_chain";
        j["mu"] = chain.mu;
        j["beta"] = chain.beta;
        j["xi_max"] = chain.xi_max;
        j["n_samples"] = chain.n_samples;
        j["max_ratio"] = chain.max_ratio;
        j["violations"] = chain.violations;
        j["passed"] = chain.passed;
        lines.push_back(j);
        if (!chain.passed)
            failures.push_back("helmholtz_derivative_multiplier_chain has pointwise violations");
    }

    std::string jsonl;
    for (const auto& j : lines) jsonl += j.dump() + "\n";
    write_text_atomic(out_dir / "lemmas.jsonl", jsonl);

    ordered_json rec = base_record(cfg, "verify-lemmas", started);
    rec["termination"] = failures.empty() ? "all_checks_passed" : "verification_failed";
    for (const auto& f : failures) rec["warnings"].push_back(f);
    rec["n_reports"] = lines.size();
    finish_record(rec, out_dir);

    for (const auto& f : failures) std::cerr << "verify-lemmas: FAILED: " << f << "\n";
    say(opts, "verify-lemmas: " + std::to_string(lines.size()) + " reports, " +
                  (failures.empty() ? "all checks passed" : "checks FAILED"));
    return failures.empty() ? kExitOk : kExitVerification;
}

int cmd_convergence(const RunConfig& cfg_in, const CliOptions& opts) {
    const RunConfig cfg = with_seed_override(cfg_in, opts);
    if (cfg.stepper.method != StepMethod::RK4Fixed)
        throw ConfigError("convergence study needs stepper.method = rk4 (fixed step)");
    const auto out_dir = resolve_out_dir(cfg, opts);
    const std::string started = iso_now();

    const GridPtr grid = cfg.build_grid();
    const Field u0 = dealias(cfg.build_initial_condition(grid));
    const ObservedOrder temporal =
        observed_order(u0, cfg.params, cfg.stepper, cfg.convergence_dts, cfg.rhs);

    CsvWriter csv({"study", "value", "error", "slope"});
    for (size_t i = 0; i < temporal.dts.size(); ++i)
        csv.add_row({"dt", fmt_double(temporal.dts[i]), fmt_double(temporal.errors[i]),
                     fmt_double(temporal.slope)});

    // Grid refinement against a reference at 4x the largest study grid,
    // same dt so the time-discretization error cancels.
    const Rhs rhs = make_rhs(cfg.params, cfg.rhs);
    const std::vector<int> ns = {64, 128, 256};
    const int n_ref = 1024;
    const GridPtr ref_grid = make_grid(cfg.grid_length, n_ref);
    const Field ref_u0 = dealias(cfg.build_initial_condition(ref_grid));
    const Field ref = march_fixed(ref_u0, cfg.stepper.dt, cfg.stepper.t_end, rhs);
    const double ref_norm = sobolev_norm(ref, 0.0);

    double err_at_256 = std::numeric_limits<double>::infinity();
    for (int n : ns) {
        const GridPtr gn = make_grid(cfg.grid_length, n);
        const Field un0 = dealias(cfg.build_initial_condition(gn));
        const Field un = march_fixed(un0, cfg.stepper.dt, cfg.stepper.t_end, rhs);
        const double err = cross_grid_l2_error(un, ref);
        if (n == 256) err_at_256 = err;
        csv.add_row({"n", std::to_string(n), fmt_double(err), ""});
    }
    csv.write(out_dir / "convergence.csv");

    const bool slope_ok = temporal.slope >= 3.8 && temporal.slope <= 4.2 && !temporal.degenerate;
    const bool spatial_ok = err_at_256 <= 1e-8 * std::max(ref_norm, 1e-300);

    ordered_json rec = base_record(cfg, "convergence", started);
    rec["termination"] = slope_ok && spatial_ok ? "orders_verified" : "order_check_failed";
    rec["temporal_slope"] = temporal.slope;
    rec["spatial_error_n256"] = err_at_256;
    rec["reference_l2"] = ref_norm;
    if (!slope_ok) rec["warnings"].push_back("temporal slope outside [3.8, 4.2]");
    if (!spatial_ok) rec["warnings"].push_back("spatial error at n=256 above 1e-8 of reference");
    finish_record(rec, out_dir);

    say(opts, "convergence: slope=" + fmt_double(temporal.slope) +
                  " spatial_err(n=256)=" + fmt_double(err_at_256));
    return slope_ok && spatial_ok ? kExitOk : kExitVerification;
}

std::vector<std::pair<std::string, Field>> equivalence_battery(const GridPtr& grid, int n_fields) {
    std::vector<std::pair<std::string, Field>> fields;
    const double L = grid->length();
    fields.emplace_back("const_zero", Field::zeros(grid));
    fields.emplace_back("const_0.3", Field::constant(grid, 0.3));
    fields.emplace_back("sine_k1", ic_sine(grid, 0.1, 1));
    fields.emplace_back("sine_k3", ic_sine(grid, 0.05, 3));
    {
        const Field mix = ic_sine(grid, 0.2, 1) +
                          Field::sample(grid, [&](double x) {
                              return 0.05 * std::cos(2.0 * 2.0 * M_PI / L * x);
                          });
        fields.emplace_back("mix_sin1_cos2", mix);
        const Field mix2 = ic_sine(grid, 0.1, 5) +
                           Field::sample(grid, [&](double x) {
                               return 0.02 * std::cos(7.0 * 2.0 * M_PI / L * x);
                           });
        fields.emplace_back("mix_sin5_cos7", mix2);
    }
    fields.emplace_back("gaussian_w0.8", ic_gaussian(grid, 0.1, 0.5 * L, 0.8));
    fields.emplace_back("gaussian_w1.2", ic_gaussian(grid, 0.3, 0.3 * L, 1.2));
    fields.emplace_back("sech2_w1.0", ic_sech2(grid, 0.1, 0.5 * L, 1.0));
    fields.emplace_back("sech2_w0.7", ic_sech2(grid, 0.25, 0.6 * L, 0.7));

    // Band-limited random fields, truncated far enough below the dealias
    // cutoff that quartic products stay alias-free.
    const int kmax = std::min(grid->dealias_cutoff() / 3, 24);
    SampleSpec spec;
    int i = 0;
    while (static_cast<int>(fields.size()) < n_fields) {
        spec.seed = 1000 + i;
        spec.radius = i % 2 == 0 ? 1.0 : 0.5;
        Field f = low_pass(random_sobolev_field(grid, spec, 0), kmax);
        fields.emplace_back("random_" + std::to_string(i), std::move(f));
        ++i;
    }
    if (static_cast<int>(fields.size()) > n_fields)
        fields.resize(n_fields);
    return fields;
}

int cmd_equivalence(const RunConfig& cfg_in, const CliOptions& opts) {
    const RunConfig cfg = with_seed_override(cfg_in, opts);
    const auto out_dir = resolve_out_dir(cfg, opts);
    const std::string started = iso_now();

    const GridPtr grid = cfg.build_grid();
    const auto battery = equivalence_battery(grid, cfg.equivalence_fields);

    CsvWriter csv({"field", "variant", "residual"});
    double worst_rederived = 0.0;
    double worst_as_printed = 0.0;
    for (const auto& [label, f] : battery) {
        for (FluxVariant v : {FluxVariant::AsPrinted, FluxVariant::Rederived}) {
            const double r = equivalence_residual(f, cfg.params, v);
            csv.add_row({label, to_string(v), fmt_double(r)});
            if (v == FluxVariant::Rederived)
                worst_rederived = std::max(worst_rederived, r);
            else
                worst_as_printed = std::max(worst_as_printed, r);
        }
    }
    csv.write(out_dir / "equivalence.csv");

    const bool ok = worst_rederived <= 1e-8;
    ordered_json rec = base_record(cfg, "equivalence", started);
    rec["termination"] = ok ? "rederived_equivalent" : "rederived_mismatch";
    rec["worst_rederived_residual"] = worst_rederived;
    rec["worst_as_printed_residual"] = worst_as_printed;
    if (!ok) rec["warnings"].push_back("rederived flux residual above 1e-8");
    finish_record(rec, out_dir);

    say(opts, "equivalence: rederived worst=" + fmt_double(worst_rederived) +
                  " as_printed worst=" + fmt_double(worst_as_printed));
    return ok ? kExitOk : kExitVerification;
}

int cmd_breaking_search(const RunConfig& cfg_in, const CliOptions& opts) {
    const RunConfig cfg = with_seed_override(cfg_in, opts);
    const auto out_dir = resolve_out_dir(cfg, opts);
    const std::string started = iso_now();
    const GridPtr grid = cfg.build_grid();

    CsvWriter csv({"amp", "breaking_time", "min_ux_end", "termination"});
    std::vector<std::string> warnings;
    double prev_break = std::numeric_limits<double>::infinity();
    bool monotone = true;

    for (double amp : cfg.breaking_amps) {
        std::string btime = "none";
        std::string term = "error";
        double min_ux_end = std::numeric_limits<double>::quiet_NaN();
        try {
            RunConfig run = cfg;
            Field u0 = Field::zeros(grid);
            if (cfg.ic.kind == IcKind::Gaussian || cfg.ic.kind == IcKind::Sech2 ||
                cfg.ic.kind == IcKind::Sine) {
                run.ic.amp = amp;
                u0 = run.build_initial_condition(grid);
            } else {
                // Non-profile ICs are rescaled instead.
                const Field base = cfg.build_initial_condition(grid);
                const double m = base.max_abs();
                u0 = m > 0.0 ? (amp / m) * base : base;
            }
            const Trajectory traj =
                integrate(u0, cfg.params, cfg.stepper, cfg.rhs, cfg.outputs.monitor_s);
            term = to_string(traj.termination);
            min_ux_end = traj.monitors.back().min_ux;
            if (traj.termination == Termination::BreakingDetected) {
                btime = fmt_double(traj.breaking_time);
                if (traj.breaking_time > prev_break) monotone = false;
                prev_break = traj.breaking_time;
            }
        } catch (const Error& e) {
            warnings.push_back("amp " + fmt_double(amp) + ": " + e.what());
        }
        csv.add_row({fmt_double(amp), btime, fmt_double(min_ux_end), term});
        say(opts, "breaking-search: amp=" + fmt_double(amp) + " -> " + term +
                      (btime != "none" ? " at t=" + btime : ""));
    }
    if (!monotone)
        warnings.push_back("breaking times are not monotone in amplitude");
    csv.write(out_dir / "breaking.csv");

    ordered_json rec = base_record(cfg, "breaking-search", started);
    rec["termination"] = "sweep_completed";
    for (const auto& w : warnings) rec["warnings"].push_back(w);
    finish_record(rec, out_dir);
    return kExitOk;
}

int run_command(const std::string& command, const std::filesystem::path& config_path,
                const CliOptions& opts) {
    try {
        const RunConfig cfg = RunConfig::load(config_path);
        if (command == "solve") return cmd_solve(cfg, opts);
        if (command == "verify-lemmas") return cmd_verify_lemmas(cfg, opts);
        if (command == "convergence") return cmd_convergence(cfg, opts);
        if (command == "equivalence") return cmd_equivalence(cfg, opts);
        if (command == "breaking-search") return cmd_breaking_search(cfg, opts);
        std::cerr << "unknown command '" << command << "'\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidParams& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}
