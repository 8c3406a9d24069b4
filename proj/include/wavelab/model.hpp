#pragma once

#include "wavelab/field.hpp"

#include <string>

namespace wavelab {

/** Parameter tuple of the moderate-amplitude surface-wave model.
 *
 * epsilon is the amplitude parameter, mu the shallowness parameter;
 * alpha, beta, gamma, delta weight the third-order terms and iota, kappa
 * the cubic/quartic transport corrections. Validity requires beta < 0,
 * |mu*beta| < 1, epsilon > 0 and mu > 0.
 */
struct ModelParams {
    double epsilon = 0.1;
    double mu = 0.01;
    double alpha = 1.0;
    double beta = -1.0;
    double gamma = 1.0;
    double delta = 1.0;
    double iota = -0.375;
    double kappa = 0.1875;

    double mubeta() const { return mu * beta; }

    // Throws InvalidParams naming the violated constraint.
    void validate() const;
};

/** Which coefficient set the nonlocal flux uses.
 *
 * AsPrinted carries the flux polynomial exactly as commonly printed for
 * this model family. Rederived carries the coefficients obtained by
 * inverting the third-order equation directly (solve for u_t, peel off
 * the transport part, and write the remainder as an exact x-derivative);
 * the two differ in the u^2 and u_x^2 coefficients, and the equivalence
 * diagnostic ships the discrepancy as data.
 */
enum class FluxVariant { AsPrinted, Rederived };

std::string to_string(FluxVariant v);

/** Coefficients of g(u) = c1 u + c2 u^2 + c3 u^3 + c4 u^4 + c5 u_x^2. */
struct FluxCoeffs {
    double u1, u2, u3, u4, ux2;
    static FluxCoeffs of(const ModelParams& p, FluxVariant v);
};

// The local flux g(u). Nonlinear powers are formed pointwise with a
// dealias projection after every product; u^4 is built as ((u*u)*u)*u.
Field flux_g(const Field& u, const ModelParams& p, FluxVariant v);

// The nonlocal term f(u) = -(1 + mu*beta*dxx)^(-1) dx g(u). Zero mean by
// construction since dx annihilates the k = 0 mode.
Field f_nonlocal(const Field& u, const ModelParams& p, FluxVariant v);

// Split evolution right-hand side
//   u_t = -(alpha/beta) u_x + (epsilon*gamma/beta) u u_x + f(u).
Field rhs_split(const Field& u, const ModelParams& p, FluxVariant v);

// Direct right-hand side: the third-order equation solved for u_t by
// inverting (1 + mu*beta*dxx). This is the solver default.
Field rhs_direct(const Field& u, const ModelParams& p);

// || rhs_split - rhs_direct ||_L2 / max(1, ||u||_L2). For the Rederived
// variant on resolved fields this is rounding-level.
double equivalence_residual(const Field& u, const ModelParams& p, FluxVariant v);

/** Pointwise extrema monitored for wave-breaking detection. */
struct BreakingIndicator {
    double max_abs_u = 0.0;
    double min_ux = 0.0;
    double max_abs_ux = 0.0;
};

BreakingIndicator breaking_indicator(const Field& u);

// Linear dispersion omega(k) = k (1 - mu*alpha*k^2) / (1 - mu*beta*k^2)
// of the direct form; the phase-speed oracle for small-amplitude runs.
double dispersion_omega(const ModelParams& p, double k);

}
