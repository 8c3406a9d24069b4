#pragma once

#include "wavelab/field.hpp"
#include "wavelab/model.hpp"
#include "wavelab/timestep.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace wavelab {

/** Sampling controls for the estimate harness: Sobolev index s > 3/2,
 *  ball radius, sample count, seed, and the extra spectral decay margin
 *  (> 1/2) that keeps draws inside H^s. */
struct SampleSpec {
    double s = 2.0;
    double radius = 1.0;
    int n_samples = 200;
    std::uint64_t seed = 42;
    double spectral_decay_margin = 0.6;

    void validate() const;
};

/** Sampled ratio statistics for one estimate. `stable` means doubling the
 *  sample count moved max_ratio by less than 25%. */
struct EstimateReport {
    std::string label;
    double s = 0.0;
    double radius = 0.0;
    int n_samples = 0;
    std::uint64_t seed = 0;
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    bool stable = false;
    std::string params_digest;
    std::map<std::string, double> extras;
};

enum class NormIndex { L2, Hs };

// Random field in the H^s ball: Gaussian spectral coefficients with decay
// exponent s + margin, band-limited at the dealias cutoff (so every
// on-grid product and integration-by-parts identity downstream is exact),
// then rescaled to norm radius * r with r uniform in (0,1]. The stream is
// keyed by (spec.seed, index); identical keys give identical fields.
Field random_sobolev_field(const GridPtr& grid, const SampleSpec& spec, std::uint64_t index);

// Quadratic-form check for the transport operator A(u)w = (1+u) w_x:
// verifies the integration-by-parts identity
//   <(1+u) w_x, w> = -1/2 int u_x w^2
// against n_tests random w and reports the normalized identity residual
// (max_ratio) plus the worst lower-bound margin in extras.
EstimateReport accretivity_lower_bound(const Field& u, int n_tests, std::uint64_t seed);

// Pooled variant over sampled u as well; one report for the whole suite.
EstimateReport accretivity_identity_suite(const GridPtr& grid, const SampleSpec& spec);

// ||(u-v) w_x|| / (||u-v|| ||w||_s) over sampled triples.
EstimateReport a2_operator_ratio(const GridPtr& grid, const SampleSpec& spec);

// The conjugation remainder B(u)w = Lambda^s(u d/dx(Lambda^-s w)) - u w_x,
// evaluated exactly as written.
Field apply_B(const Field& u, const Field& w, double s);

// ||B(u) w|| / (||u||_s ||w||) over sampled pairs.
EstimateReport b_bound_ratio(const GridPtr& grid, const SampleSpec& spec);

// ||(B(u)-B(v)) w|| / (||u-v||_s ||w||) over sampled triples.
EstimateReport b_lipschitz_ratio(const GridPtr& grid, const SampleSpec& spec);

// ||f(u)-f(v)||_norm / ||u-v||_norm for the nonlocal flux, plus the bound
// M = max ||f(u)||_s in extras ("flux_sup_hs").
EstimateReport f_lipschitz_ratio(const GridPtr& grid, const SampleSpec& spec,
                                 const ModelParams& p, FluxVariant v, NormIndex norm);

// ||f g||_t / (||f||_s ||g||_t); requires -s < t <= s and s > 1/2.
EstimateReport product_estimate_ratio(const GridPtr& grid, const SampleSpec& spec, double t);

// ||Lambda^-st [Lambda^(st+tt+1), M_f] Lambda^-tt w|| / (||f||_s ||w||);
// requires |st|, |tt| <= s - 1.
EstimateReport commutator_estimate_ratio(const GridPtr& grid, const SampleSpec& spec,
                                         double s_tilde, double t_tilde);

/** Perturbation-amplification experiment for the data-to-solution map. */
struct ContinuousDependenceReport {
    std::vector<double> deltas;
    std::vector<double> amplification;  // D(delta) = sup_t ||u - v||_s / delta
    bool propagated_blowup = false;
    std::vector<std::string> notes;
};

// Perturbs u0 by delta * (unit H^s field) for each delta, solves both
// trajectories with fixed-step RK4 and reports D(delta). Early blow-up of
// any run is reported, not raised.
ContinuousDependenceReport continuous_dependence(const Field& u0, std::span<const double> deltas,
                                                 const ModelParams& p, const StepperConfig& cfg,
                                                 double T, double s, std::uint64_t seed);

}
