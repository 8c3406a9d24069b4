#include "wavelab/harness.hpp"

#include "wavelab/digest.hpp"
#include "wavelab/errors.hpp"
#include "wavelab/rng.hpp"
#include "wavelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <sstream>

namespace wavelab {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string spec_digest(const SampleSpec& spec, const std::string& extra) {
    std::ostringstream os;
    os << spec.s << "|" << spec.radius << "|" << spec.n_samples << "|" << spec.seed << "|"
       << spec.spectral_decay_margin << "|" << extra;
    return hex_digest(os.str());
}

// Runs a per-sample ratio functional at the base and doubled sample count
// and assembles the report; samples are keyed by index so the doubled run
// extends the base pool deterministically.
EstimateReport make_ratio_report(const std::string& label, const SampleSpec& spec,
                                 const std::string& digest_extra,
                                 const std::function<std::optional<double>(std::uint64_t)>& sample) {
    std::vector<double> base, doubled;
    long skipped = 0;
    for (int i = 0; i < 2 * spec.n_samples; ++i) {
        const auto r = sample(static_cast<std::uint64_t>(i));
        if (!r) {
            ++skipped;
            continue;
        }
        doubled.push_back(*r);
        if (i < spec.n_samples) base.push_back(*r);
    }
    EstimateReport rep;
    rep.label = label;
    rep.s = spec.s;
    rep.radius = spec.radius;
    rep.n_samples = spec.n_samples;
    rep.seed = spec.seed;
    rep.params_digest = spec_digest(spec, digest_extra);
    const double max1 = base.empty() ? 0.0 : *std::max_element(base.begin(), base.end());
    const double max2 = doubled.empty() ? 0.0 : *std::max_element(doubled.begin(), doubled.end());
    rep.max_ratio = max1;
    rep.median_ratio = median_of(base);
    rep.stable = std::abs(max2 - max1) <= 0.25 * std::max(max1, 1e-300);
    rep.extras["max_ratio_doubled"] = max2;
    if (skipped > 0) rep.extras["skipped"] = static_cast<double>(skipped);
    return rep;
}

}  // namespace

void SampleSpec::validate() const {
    if (!(s > 1.5)) throw InvalidParams("sample spec needs s > 3/2, got " + std::to_string(s));
    if (n_samples < 2) throw InvalidParams("sample spec needs n_samples >= 2");
    if (!(radius > 0.0)) throw InvalidParams("sample spec needs a positive radius");
    if (!(spectral_decay_margin > 0.5))
        throw InvalidParams("sample spec needs spectral_decay_margin > 1/2");
}

Field random_sobolev_field(const GridPtr& grid, const SampleSpec& spec, std::uint64_t index) {
    spec.validate();
    NormalStream stream(spec.seed, index);
    const int n = grid->size();
    const int cutoff = grid->dealias_cutoff();
    std::vector<std::complex<double>> coeffs(n);
    const double expo = -(spec.s + spec.spectral_decay_margin) / 2.0;
    coeffs[0] = stream.next();
    for (int k = 1; k <= cutoff && k < n / 2; ++k) {
        const double xi = grid->wavenumber_of_mode(k);
        const double decay = std::pow(1.0 + xi * xi, expo);
        const std::complex<double> z(stream.next() * M_SQRT1_2, stream.next() * M_SQRT1_2);
        coeffs[grid->position_of_mode(k)] = decay * z;
        coeffs[grid->position_of_mode(-k)] = decay * std::conj(z);
    }
    Field u = inverse(Spectrum(grid, std::move(coeffs)));
    const double norm = sobolev_norm(u, spec.s);
    const double r = stream.next_uniform();
    if (norm > 0.0) u = (spec.radius * r / norm) * u;
    return u;
}

EstimateReport accretivity_lower_bound(const Field& u, int n_tests, std::uint64_t seed) {
    SampleSpec spec;
    spec.seed = seed;
    spec.n_samples = n_tests;
    const Field ux = derivative(u, 1);
    const double max_ux = ux.max_abs();
    const GridPtr& grid = u.grid();
    double min_margin = std::numeric_limits<double>::infinity();

    auto sample = [&](std::uint64_t i) -> std::optional<double> {
        const Field w = random_sobolev_field(grid, spec, i);
        const Field wx = derivative(w, 1);
        const Field one_plus_u = Field::constant(grid, 1.0) + u;
        const double lhs = quadrature_inner(pointwise(one_plus_u, wx), w);
        const double ibp = 0.5 * quadrature_inner(ux, pointwise(w, w));
        const double w2 = quadrature_inner(w, w);
        if (w2 < 1e-300) return std::nullopt;
        min_margin = std::min(min_margin, (lhs + 0.5 * max_ux * w2) / w2);
        return std::abs(lhs + ibp) / (w2 * (1.0 + max_ux));
    };
    EstimateReport rep = make_ratio_report("accretivity_identity", spec, "single_u", sample);
    rep.extras["min_quadratic_form_margin"] = min_margin;
    rep.extras["max_abs_ux"] = max_ux;
    return rep;
}

EstimateReport accretivity_identity_suite(const GridPtr& grid, const SampleSpec& spec) {
    spec.validate();
    double min_margin = std::numeric_limits<double>::infinity();
    auto sample = [&](std::uint64_t i) -> std::optional<double> {
        const Field u = random_sobolev_field(grid, spec, 2 * i);
        const Field w = random_sobolev_field(grid, spec, 2 * i + 1);
        const Field ux = derivative(u, 1);
        const Field wx = derivative(w, 1);
        const double max_ux = ux.max_abs();
        const Field one_plus_u = Field::constant(grid, 1.0) + u;
        const double lhs = quadrature_inner(pointwise(one_plus_u, wx), w);
        const double ibp = 0.5 * quadrature_inner(ux, pointwise(w, w));
        const double w2 = quadrature_inner(w, w);
        if (w2 < 1e-300) return std::nullopt;
        min_margin = std::min(min_margin, (lhs + 0.5 * max_ux * w2) / w2);
        return std::abs(lhs + ibp) / (w2 * (1.0 + max_ux));
    };
    EstimateReport rep = make_ratio_report("accretivity_identity", spec, "paired", sample);
    rep.extras["min_quadratic_form_margin"] = min_margin;
    return rep;
}

EstimateReport a2_operator_ratio(const GridPtr& grid, const SampleSpec& spec) {
    spec.validate();
    auto sample = [&](std::uint64_t i) -> std::optional<double> {
        const Field u = random_sobolev_field(grid, spec, 3 * i);
        const Field v = random_sobolev_field(grid, spec, 3 * i + 1);
        const Field w = random_sobolev_field(grid, spec, 3 * i + 2);
        const Field diff = u - v;
        const double dn = sobolev_norm(diff, 0.0);
        if (dn < 1e-12) return std::nullopt;  // degenerate pair
        const double lhs = sobolev_norm(pointwise(diff, derivative(w, 1)), 0.0);
        return lhs / (dn * sobolev_norm(w, spec.s));
    };
    return make_ratio_report("transport_operator_lipschitz", spec, "a2", sample);
}

Field apply_B(const Field& u, const Field& w, double s) {
    if (!(s > 1.5)) throw InvalidParams("apply_B needs s > 3/2");
    const Field low = bessel_potential(w, -s);
    const Field conjugated = bessel_potential(pointwise(u, derivative(low, 1)), s);
    return conjugated - pointwise(u, derivative(w, 1));
}

EstimateReport b_bound_ratio(const GridPtr& grid, const SampleSpec& spec) {
    spec.validate();
    auto sample = [&](std::uint64_t i) -> std::optional<double> {
        const Field u = random_sobolev_field(grid, spec, 2 * i);
        const Field w = random_sobolev_field(grid, spec, 2 * i + 1);
        const double un = sobolev_norm(u, spec.s);
        const double wn = sobolev_norm(w, 0.0);
        if (un < 1e-12 || wn < 1e-12) return std::nullopt;
        return sobolev_norm(apply_B(u, w, spec.s), 0.0) / (un * wn);
    };
    return make_ratio_report("conjugation_remainder_bound", spec, "b", sample);
}

EstimateReport b_lipschitz_ratio(const GridPtr& grid, const SampleSpec& spec) {
    spec.validate();
    auto sample = [&](std::uint64_t i) -> std::optional<double> {
        const Field u = random_sobolev_field(grid, spec, 3 * i);
        const Field v = random_sobolev_field(grid, spec, 3 * i + 1);
        const Field w = random_sobolev_field(grid, spec, 3 * i + 2);
        const Field diff = u - v;
        const double dn = sobolev_norm(diff, spec.s);
        const double wn = sobolev_norm(w, 0.0);
        if (dn < 1e-12 || wn < 1e-12) return std::nullopt;
        const Field bd = apply_B(u, w, spec.s) - apply_B(v, w, spec.s);
        return sobolev_norm(bd, 0.0) / (dn * wn);
    };
    return make_ratio_report("conjugation_remainder_lipschitz", spec, "b_lip", sample);
}

EstimateReport f_lipschitz_ratio(const GridPtr& grid, const SampleSpec& spec,
                                 const ModelParams& p, FluxVariant v, NormIndex norm) {
    spec.validate();
    p.validate();
    const double idx = norm == NormIndex::L2 ? 0.0 : spec.s;
    double sup_f = 0.0;
    auto sample = [&](std::uint64_t i) -> std::optional<double> {
        const Field a = random_sobolev_field(grid, spec, 2 * i);
        const Field b = random_sobolev_field(grid, spec, 2 * i + 1);
        const double dn = sobolev_norm(a - b, idx);
        if (dn < 1e-12) return std::nullopt;
        const Field fa = f_nonlocal(a, p, v);
        const Field fb = f_nonlocal(b, p, v);
        sup_f = std::max(sup_f, sobolev_norm(fa, spec.s));
        return sobolev_norm(fa - fb, idx) / dn;
    };
    const std::string label =
        norm == NormIndex::L2 ? "flux_lipschitz_l2" : "flux_lipschitz_hs";
    EstimateReport rep = make_ratio_report(label, spec, to_string(v), sample);
    rep.extras["flux_sup_hs"] = sup_f;
    return rep;
}

EstimateReport product_estimate_ratio(const GridPtr& grid, const SampleSpec& spec, double t) {
    spec.validate();
    if (!(spec.s > 0.5)) throw InvalidParams("product estimate needs s > 1/2");
    if (!(t > -spec.s && t <= spec.s))
        throw InvalidIndexRange("product estimate needs -s < t <= s, got t = " +
                                std::to_string(t));
    auto sample = [&](std::uint64_t i) -> std::optional<double> {
        const Field f = random_sobolev_field(grid, spec, 2 * i);
        const Field g = random_sobolev_field(grid, spec, 2 * i + 1);
        const double gn = sobolev_norm(g, t);
        const double fn = sobolev_norm(f, spec.s);
        if (gn < 1e-12 || fn < 1e-12) return std::nullopt;
        return sobolev_norm(pointwise(f, g), t) / (fn * gn);
    };
    std::ostringstream extra;
    extra << "t=" << t;
    return make_ratio_report("product_estimate", spec, extra.str(), sample);
}

EstimateReport commutator_estimate_ratio(const GridPtr& grid, const SampleSpec& spec,
                                         double s_tilde, double t_tilde) {
    spec.validate();
    if (std::abs(s_tilde) > spec.s - 1.0 || std::abs(t_tilde) > spec.s - 1.0)
        throw InvalidIndexRange("commutator estimate needs |s_tilde|, |t_tilde| <= s - 1");
    const double r = s_tilde + t_tilde + 1.0;
    auto sample = [&](std::uint64_t i) -> std::optional<double> {
        const Field f = random_sobolev_field(grid, spec, 2 * i);
        const Field w = random_sobolev_field(grid, spec, 2 * i + 1);
        const double fn = sobolev_norm(f, spec.s);
        const double wn = sobolev_norm(w, 0.0);
        if (fn < 1e-12 || wn < 1e-12) return std::nullopt;
        const Field a = bessel_potential(w, -t_tilde);
        const Field comm = bessel_potential(pointwise(f, a), r) - pointwise(f, bessel_potential(a, r));
        const Field lhs = bessel_potential(comm, -s_tilde);
        return sobolev_norm(lhs, 0.0) / (fn * wn);
    };
    std::ostringstream extra;
    extra << "st=" << s_tilde << ",tt=" << t_tilde;
    return make_ratio_report("commutator_estimate", spec, extra.str(), sample);
}

ContinuousDependenceReport continuous_dependence(const Field& u0, std::span<const double> deltas,
                                                 const ModelParams& p, const StepperConfig& cfg,
                                                 double T, double s, std::uint64_t seed) {
    if (cfg.method != StepMethod::RK4Fixed)
        throw InvalidParams("continuous dependence needs the fixed-step method so trajectories align in time");

    StepperConfig run_cfg = cfg;
    run_cfg.t_end = T;
    run_cfg.snapshot_stride = 1;

    SampleSpec dir_spec;
    dir_spec.s = s;
    dir_spec.seed = seed;
    Field e = random_sobolev_field(u0.grid(), dir_spec, 0);
    const double en = sobolev_norm(e, s);
    if (en > 0.0) e = (1.0 / en) * e;

    ContinuousDependenceReport rep;
    const Trajectory base = integrate(u0, p, run_cfg, RhsChoice::direct(), s);
    if (base.termination != Termination::ReachedTEnd) {
        rep.propagated_blowup = true;
        rep.notes.push_back("base run terminated early: " + to_string(base.termination));
        return rep;
    }

    for (double delta : deltas) {
        if (delta == 0.0) {
            rep.notes.push_back("delta = 0 skipped (identical trajectories)");
            continue;
        }
        const Field v0 = u0 + delta * e;
        const Trajectory pert = integrate(v0, p, run_cfg, RhsChoice::direct(), s);
        if (pert.termination != Termination::ReachedTEnd) {
            rep.propagated_blowup = true;
            rep.notes.push_back("perturbed run (delta = " + std::to_string(delta) +
                                ") terminated early: " + to_string(pert.termination));
            continue;
        }
        if (pert.times.size() != base.times.size()) {
            rep.propagated_blowup = true;
            rep.notes.push_back("trajectories misaligned in time");
            continue;
        }
        double sup = 0.0;
        for (size_t i = 0; i < base.times.size(); ++i)
            sup = std::max(sup, sobolev_norm(base.snapshots[i] - pert.snapshots[i], s));
        rep.deltas.push_back(delta);
        rep.amplification.push_back(sup / std::abs(delta));
    }
    return rep;
}

}
