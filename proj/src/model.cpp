#include "wavelab/model.hpp"

#include "wavelab/errors.hpp"
#include "wavelab/spectral.hpp"

#include <cmath>
#include <string>

namespace wavelab {

void ModelParams::validate() const {
    if (!(epsilon > 0.0)) throw InvalidParams("params.epsilon must be positive (epsilon > 0)");
    if (!(mu > 0.0)) throw InvalidParams("params.mu must be positive (mu > 0)");
    if (!(beta < 0.0)) throw InvalidParams("params.beta must be negative (beta < 0)");
    if (!(std::abs(mu * beta) < 1.0))
        throw InvalidParams("params must satisfy |mu*beta| < 1, got |mu*beta| = " +
                            std::to_string(std::abs(mu * beta)));
    for (double v : {epsilon, mu, alpha, beta, gamma, delta, iota, kappa})
        if (!std::isfinite(v)) throw InvalidParams("params contain a non-finite value");
}

std::string to_string(FluxVariant v) {
    return v == FluxVariant::AsPrinted ? "as_printed" : "rederived";
}

FluxCoeffs FluxCoeffs::of(const ModelParams& p, FluxVariant v) {
    FluxCoeffs c;
    c.u1 = 1.0 - p.alpha / p.beta;
    c.u3 = p.epsilon * p.epsilon * p.iota / 3.0;
    c.u4 = p.epsilon * p.epsilon * p.epsilon * p.kappa / 4.0;
    if (v == FluxVariant::AsPrinted) {
        c.u2 = (3.0 * p.epsilon - 2.0) / 4.0 - 1.0 / (2.0 * p.mu * p.beta);
        c.ux2 = (3.0 * p.epsilon * p.mu * p.gamma - p.epsilon * p.mu * p.delta - p.mu * p.beta) / 2.0;
    } else {
        c.u2 = 3.0 * p.epsilon / 4.0 + p.epsilon * p.gamma / (2.0 * p.beta);
        c.ux2 = (3.0 * p.epsilon * p.mu * p.gamma - p.epsilon * p.mu * p.delta) / 2.0;
    }
    return c;
}

Field flux_g(const Field& u, const ModelParams& p, FluxVariant v) {
    const FluxCoeffs c = FluxCoeffs::of(p, v);
    const Field ux = derivative(u, 1);
    const Field u2 = dealias(pointwise(u, u));
    const Field u3 = dealias(pointwise(u2, u));
    const Field u4 = dealias(pointwise(u3, u));
    const Field ux2 = dealias(pointwise(ux, ux));
    return c.u1 * u + c.u2 * u2 + c.u3 * u3 + c.u4 * u4 + c.ux2 * ux2;
}

Field f_nonlocal(const Field& u, const ModelParams& p, FluxVariant v) {
    // One fused multiplier pass for -(1 + mu*beta*dxx)^(-1) dx.
    const auto m = MultiplierSymbol::helmholtz_inverse(p.mubeta())
                       .compose(MultiplierSymbol::derivative(1));
    return -1.0 * apply_multiplier(flux_g(u, p, v), m);
}

Field rhs_split(const Field& u, const ModelParams& p, FluxVariant v) {
    const Field ux = derivative(u, 1);
    const Field uux = dealias(pointwise(u, ux));
    return (-p.alpha / p.beta) * ux + (p.epsilon * p.gamma / p.beta) * uux + f_nonlocal(u, p, v);
}

Field rhs_direct(const Field& u, const ModelParams& p) {
    const Field ux = derivative(u, 1);
    const Field uxx = derivative(u, 2);
    const Field uxxx = derivative(u, 3);
    const Field uux = dealias(pointwise(u, ux));
    const Field u2 = dealias(pointwise(u, u));
    const Field u2ux = dealias(pointwise(u2, ux));
    const Field u3 = dealias(pointwise(u2, u));
    const Field u3ux = dealias(pointwise(u3, ux));
    const Field uuxxx = dealias(pointwise(u, uxxx));
    const Field uxuxx = dealias(pointwise(ux, uxx));

    const double e = p.epsilon;
    const Field bracket = -1.0 * ux - 1.5 * e * uux - e * e * p.iota * u2ux -
                          e * e * e * p.kappa * u3ux - p.mu * p.alpha * uxxx +
                          e * p.mu * p.gamma * uuxxx + e * p.mu * p.delta * uxuxx;
    return helmholtz_inverse(bracket, p.mubeta());
}

double equivalence_residual(const Field& u, const ModelParams& p, FluxVariant v) {
    const Field diff = rhs_split(u, p, v) - rhs_direct(u, p);
    return sobolev_norm(diff, 0.0) / std::max(1.0, sobolev_norm(u, 0.0));
}

BreakingIndicator breaking_indicator(const Field& u) {
    const Field ux = derivative(u, 1);
    BreakingIndicator b;
    b.max_abs_u = u.max_abs();
    b.min_ux = ux.min_value();
    b.max_abs_ux = ux.max_abs();
    return b;
}

double dispersion_omega(const ModelParams& p, double k) {
    return k * (1.0 - p.mu * p.alpha * k * k) / (1.0 - p.mu * p.beta * k * k);
}

}
