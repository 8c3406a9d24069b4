#include "wavelab/timestep.hpp"

#include "wavelab/errors.hpp"
#include "wavelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wavelab {

namespace {

void require_finite_stage(const Field& f, const char* where) {
    if (!f.finite()) throw NonFiniteField(std::string("non-finite values in ") + where);
}

double cfl_cap(const Field& u, const ModelParams& p, double cfl) {
    const double speed = std::abs(p.alpha / p.beta) +
                         std::abs(p.epsilon * p.gamma / p.beta) * u.max_abs();
    if (!(speed > 0.0)) return std::numeric_limits<double>::infinity();
    return cfl * u.grid()->spacing() / speed;
}

// Dormand-Prince 5(4) coefficients.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

bool last_window_increasing(const std::vector<MonitorRecord>& monitors, int window) {
    if (static_cast<int>(monitors.size()) < window + 1) return false;
    const size_t end = monitors.size();
    for (size_t i = end - window; i < end; ++i)
        if (!(monitors[i].max_abs_ux > monitors[i - 1].max_abs_ux)) return false;
    return true;
}

}  // namespace

void StepperConfig::validate() const {
    if (!(dt > 0.0)) throw InvalidParams("stepper.dt must be positive");
    if (!(t_end > 0.0)) throw InvalidParams("stepper.t_end must be positive");
    if (!(dt_min < dt)) throw InvalidParams("stepper.dt_min must be below stepper.dt");
    if (!(dt <= t_end)) throw InvalidParams("stepper.dt must not exceed stepper.t_end");
    if (!(safety > 0.0 && safety <= 1.0)) throw InvalidParams("stepper.safety must lie in (0, 1]");
    if (!(atol > 0.0)) throw InvalidParams("stepper.atol must be positive");
    if (!(rtol > 0.0)) throw InvalidParams("stepper.rtol must be positive");
    if (!(cfl > 0.0)) throw InvalidParams("stepper.cfl must be positive");
    if (snapshot_stride < 1) throw InvalidParams("stepper.snapshot_stride must be >= 1");
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::ReachedTEnd: return "reached_t_end";
        case Termination::BreakingDetected: return "breaking_detected";
        case Termination::NonFinite: return "non_finite";
        default: return "step_underflow";
    }
}

std::string RhsChoice::name() const {
    if (kind == Direct) return "direct";
    return variant == FluxVariant::AsPrinted ? "split_as_printed" : "split_rederived";
}

Rhs make_rhs(const ModelParams& p, RhsChoice choice) {
    p.validate();
    if (choice.kind == RhsChoice::Direct)
        return [p](const Field& u) { return rhs_direct(u, p); };
    const FluxVariant v = choice.variant;
    return [p, v](const Field& u) { return rhs_split(u, p, v); };
}

Field step_rk4(const Field& u, double dt, const Rhs& rhs) {
    if (!(dt > 0.0)) throw InvalidParams("step_rk4 needs dt > 0");
    const Field k1 = rhs(u);
    require_finite_stage(k1, "rk4 stage 1");
    const Field k2 = rhs(u + (0.5 * dt) * k1);
    require_finite_stage(k2, "rk4 stage 2");
    const Field k3 = rhs(u + (0.5 * dt) * k2);
    require_finite_stage(k3, "rk4 stage 3");
    const Field k4 = rhs(u + dt * k3);
    require_finite_stage(k4, "rk4 stage 4");
    Field out = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    require_finite_stage(out, "rk4 update");
    return out;
}

AdaptiveStep step_adaptive(const Field& u, double dt, const Rhs& rhs,
                           double atol, double rtol, double safety) {
    if (!(dt > 0.0)) throw InvalidParams("step_adaptive needs dt > 0");
    const Field k1 = rhs(u);
    require_finite_stage(k1, "dopri5 stage 1");
    const Field k2 = rhs(u + dt * (kA21 * k1));
    require_finite_stage(k2, "dopri5 stage 2");
    const Field k3 = rhs(u + dt * (kA31 * k1 + kA32 * k2));
    require_finite_stage(k3, "dopri5 stage 3");
    const Field k4 = rhs(u + dt * (kA41 * k1 + kA42 * k2 + kA43 * k3));
    require_finite_stage(k4, "dopri5 stage 4");
    const Field k5 = rhs(u + dt * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
    require_finite_stage(k5, "dopri5 stage 5");
    const Field k6 = rhs(u + dt * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
    require_finite_stage(k6, "dopri5 stage 6");
    Field u5 = u + dt * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    require_finite_stage(u5, "dopri5 update");
    const Field k7 = rhs(u5);
    require_finite_stage(k7, "dopri5 stage 7");

    // Weighted RMS of the embedded 5th-4th order difference.
    double acc = 0.0;
    const int n = u.size();
    for (int j = 0; j < n; ++j) {
        const double e = dt * (kE1 * k1[j] + kE3 * k3[j] + kE4 * k4[j] + kE5 * k5[j] +
                               kE6 * k6[j] + kE7 * k7[j]);
        const double w = atol + rtol * std::max(std::abs(u[j]), std::abs(u5[j]));
        acc += (e / w) * (e / w);
    }
    const double err = std::sqrt(acc / n);

    AdaptiveStep out{std::move(u5), 0.0, err, err <= 1.0};
    const double factor =
        err > 0.0 ? std::clamp(safety * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
    out.dt_next = dt * factor;
    return out;
}

Trajectory integrate(const Field& u0, const ModelParams& p, const StepperConfig& cfg,
                     RhsChoice choice, double monitor_s) {
    cfg.validate();
    const Rhs rhs = make_rhs(p, choice);

    Trajectory traj;
    const double unresolved = unresolved_energy_fraction(u0);
    if (unresolved > 1e-8) {
        std::ostringstream msg;
        msg << "initial condition under-resolved: fraction " << unresolved
            << " of its energy sits above the dealias cutoff";
        traj.warnings.push_back(msg.str());
    }

    Field u = dealias(u0);
    BreakingIndicator ind = breaking_indicator(u);
    const double threshold =
        cfg.slope_threshold > 0.0 ? cfg.slope_threshold : 50.0 * (ind.max_abs_ux + 1.0);
    traj.slope_threshold_used = threshold;

    int snapshot_stride = cfg.snapshot_stride;
    constexpr int kSnapshotCap = 10000;
    constexpr int kBreakingWindow = 10;

    const auto push_monitor = [&](double t, double dt_used, const BreakingIndicator& b) {
        traj.monitors.push_back({t, dt_used, quadrature_integral(u), sobolev_norm(u, 0.0),
                                 sobolev_norm(u, monitor_s), b.min_ux, b.max_abs_u,
                                 b.max_abs_ux});
    };
    const auto push_snapshot = [&](double t) {
        if (!traj.times.empty() && traj.times.back() == t) return;
        traj.times.push_back(t);
        traj.snapshots.push_back(u);
        if (static_cast<int>(traj.snapshots.size()) > kSnapshotCap) {
            // Thin by dropping every other interior snapshot and doubling
            // the stride; the initial state is always kept.
            std::vector<double> times;
            std::vector<Field> snaps;
            for (size_t i = 0; i < traj.snapshots.size(); i += 2) {
                times.push_back(traj.times[i]);
                snaps.push_back(traj.snapshots[i]);
            }
            traj.times = std::move(times);
            traj.snapshots = std::move(snaps);
            snapshot_stride *= 2;
        }
    };

    double t = 0.0;
    push_monitor(0.0, 0.0, ind);
    push_snapshot(0.0);

    double dt_ctrl = cfg.dt;
    long accepted = 0;
    traj.termination = Termination::ReachedTEnd;

    while (t < cfg.t_end - 1e-12 * std::max(1.0, cfg.t_end)) {
        const double cap = cfl_cap(u, p, cfg.cfl);
        double dt_eff = std::min({cfg.method == StepMethod::RK4Fixed ? cfg.dt : dt_ctrl,
                                  cap, cfg.t_end - t});
        const bool final_step = dt_eff >= cfg.t_end - t - 1e-14 * cfg.t_end;
        if (dt_eff < cfg.dt_min && !final_step) {
            traj.termination = Termination::StepUnderflow;
            break;
        }

        Field u_next = Field::zeros(u.grid());
        try {
            if (cfg.method == StepMethod::RK4Fixed) {
                u_next = step_rk4(u, dt_eff, rhs);
            } else {
                AdaptiveStep st = step_adaptive(u, dt_eff, rhs, cfg.atol, cfg.rtol, cfg.safety);
                dt_ctrl = st.dt_next;
                if (!st.accepted) {
                    if (dt_ctrl < cfg.dt_min) {
                        traj.termination = Termination::StepUnderflow;
                        break;
                    }
                    continue;  // retry with the reduced step, no time advance
                }
                u_next = std::move(st.u_next);
            }
        } catch (const NonFiniteField&) {
            traj.termination = Termination::NonFinite;
            traj.warnings.push_back("non-finite values at t = " + std::to_string(t) +
                                    "; trajectory holds the last finite state");
            break;
        }

        u = std::move(u_next);
        t += dt_eff;
        if (std::abs(t - cfg.t_end) <= 1e-12 * std::max(1.0, cfg.t_end)) t = cfg.t_end;
        ++accepted;

        ind = breaking_indicator(u);
        push_monitor(t, dt_eff, ind);
        if (accepted % snapshot_stride == 0) push_snapshot(t);

        if (ind.max_abs_ux > threshold &&
            last_window_increasing(traj.monitors, kBreakingWindow)) {
            traj.termination = Termination::BreakingDetected;
            traj.breaking_time = t;
            break;
        }
    }

    push_snapshot(t);
    return traj;
}

Field march_fixed(const Field& u0, double dt, double t_end, const Rhs& rhs) {
    Field u = u0;
    double t = 0.0;
    while (t < t_end - 1e-12 * std::max(1.0, t_end)) {
        const double step = std::min(dt, t_end - t);
        u = step_rk4(u, step, rhs);
        t += step;
    }
    return u;
}

ObservedOrder observed_order(const Field& u0, const StepperConfig& cfg,
                             std::span<const double> dts, const Rhs& rhs,
                             const std::optional<Field>& exact) {
    if (cfg.method != StepMethod::RK4Fixed)
        throw InvalidParams("observed_order needs the fixed-step method");
    if (dts.size() < 3) throw InvalidParams("observed_order needs at least 3 dt values");
    for (size_t i = 2; i < dts.size(); ++i) {
        const double r0 = dts[1] / dts[0];
        const double ri = dts[i] / dts[i - 1];
        if (std::abs(ri - r0) > 1e-9 * std::abs(r0))
            throw InvalidParams("observed_order needs dts in geometric progression");
    }

    const double dt_ref = *std::min_element(dts.begin(), dts.end()) / 4.0;
    const Field ref = exact ? *exact : march_fixed(u0, dt_ref, cfg.t_end, rhs);

    ObservedOrder out;
    out.dts.assign(dts.begin(), dts.end());
    const double scale = 1.0 + sobolev_norm(ref, 0.0);
    bool all_tiny = true;
    for (double dt : dts) {
        const Field at_end = march_fixed(u0, dt, cfg.t_end, rhs);
        const double err = sobolev_norm(at_end - ref, 0.0);
        out.errors.push_back(err);
        if (err > 1e-14 * scale) all_tiny = false;
    }
    if (all_tiny) {
        out.degenerate = true;
        out.slope = std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    // Least squares of log(err) on log(dt).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const int m = static_cast<int>(dts.size());
    for (int i = 0; i < m; ++i) {
        const double x = std::log(out.dts[i]);
        const double y = std::log(std::max(out.errors[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return out;
}

ObservedOrder observed_order(const Field& u0, const ModelParams& p, const StepperConfig& cfg,
                             std::span<const double> dts, RhsChoice choice) {
    return observed_order(u0, cfg, dts, make_rhs(p, choice));
}

}
