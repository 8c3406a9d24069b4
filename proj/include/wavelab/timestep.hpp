#pragma once

#include "wavelab/field.hpp"
#include "wavelab/model.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wavelab {

using Rhs = std::function<Field(const Field&)>;

enum class StepMethod { RK4Fixed, AdaptiveEmbedded };

/** Time-integration controls. slope_threshold <= 0 selects the automatic
 *  default 50 * (initial max|u_x| + 1). */
struct StepperConfig {
    StepMethod method = StepMethod::RK4Fixed;
    double dt = 1e-3;
    double t_end = 1.0;
    double atol = 1e-10;
    double rtol = 1e-8;
    double safety = 0.9;
    double dt_min = 1e-10;
    double cfl = 0.5;
    int snapshot_stride = 10;
    double slope_threshold = 0.0;

    void validate() const;
};

enum class Termination { ReachedTEnd, BreakingDetected, NonFinite, StepUnderflow };

std::string to_string(Termination t);

/** One row of the per-accepted-step monitor series. */
struct MonitorRecord {
    double t;
    double dt_used;
    double mass;
    double l2;
    double hs;
    double min_ux;
    double max_abs_u;
    double max_abs_ux;
};

/** Time-stamped solution history: snapshots every snapshot_stride-th
 *  accepted step plus the initial and final states, a monitor record per
 *  accepted step, and the reason the march stopped. */
struct Trajectory {
    std::vector<double> times;      // snapshot times, strictly increasing from 0
    std::vector<Field> snapshots;   // same length as times
    std::vector<MonitorRecord> monitors;
    Termination termination = Termination::ReachedTEnd;
    double breaking_time = std::numeric_limits<double>::quiet_NaN();
    double slope_threshold_used = 0.0;
    std::vector<std::string> warnings;

    const Field& final_state() const { return snapshots.back(); }
    double final_time() const { return times.back(); }
};

/** Which right-hand side integrate() marches. */
struct RhsChoice {
    enum Kind { Direct, Split } kind = Direct;
    FluxVariant variant = FluxVariant::Rederived;

    static RhsChoice direct() { return {Direct, FluxVariant::Rederived}; }
    static RhsChoice split(FluxVariant v) { return {Split, v}; }
    std::string name() const;
};

// Classical 4-stage Runge-Kutta step; exactly 4 rhs evaluations. Throws
// NonFiniteField if any stage goes non-finite.
Field step_rk4(const Field& u, double dt, const Rhs& rhs);

/** Result of one embedded Dormand-Prince 5(4) attempt. */
struct AdaptiveStep {
    Field u_next;      // 5th-order candidate
    double dt_next;    // dt * clamp(safety * err^(-1/5), 0.2, 5.0)
    double err_est;    // weighted RMS of the embedded difference
    bool accepted;     // err_est <= 1
};

AdaptiveStep step_adaptive(const Field& u, double dt, const Rhs& rhs,
                           double atol, double rtol, double safety);

// Marches u0 to cfg.t_end or until breaking / blow-up / step underflow.
// Numerical failures terminate the trajectory instead of throwing so
// parameter sweeps can continue. The initial state is projected onto the
// dealias band, which keeps every nonlinear product alias-stable and the
// semi-discrete mass exactly conserved.
Trajectory integrate(const Field& u0, const ModelParams& p, const StepperConfig& cfg,
                     RhsChoice choice, double monitor_s = 2.0);

// Same march for an arbitrary rhs (no CFL cap, no breaking detection);
// used by convergence studies and surrogate tests.
Field march_fixed(const Field& u0, double dt, double t_end, const Rhs& rhs);

/** Least-squares slope of log(error) against log(dt). */
struct ObservedOrder {
    double slope = 0.0;
    bool degenerate = false;   // all errors at rounding level
    std::vector<double> dts;
    std::vector<double> errors;
};

// Self-convergence order for fixed-step RK4: errors are L2 distances at
// t_end against a reference run at min(dts)/4, or against `exact` when
// given. dts must be >= 3 values in geometric progression.
ObservedOrder observed_order(const Field& u0, const StepperConfig& cfg,
                             std::span<const double> dts, const Rhs& rhs,
                             const std::optional<Field>& exact = std::nullopt);

ObservedOrder observed_order(const Field& u0, const ModelParams& p, const StepperConfig& cfg,
                             std::span<const double> dts, RhsChoice choice);

// The rhs closure for a model + choice pair.
Rhs make_rhs(const ModelParams& p, RhsChoice choice);

}
