#include "wavelab/commands.hpp"
#include "wavelab/harness.hpp"
#include "wavelab/initial_conditions.hpp"
#include "wavelab/spectral.hpp"
#include "wavelab/timestep.hpp"
#include "wavelab/version.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace wavelab;

namespace {

Field field_from_array(const GridPtr& grid, const py::array_t<double>& values) {
    const auto buf = values.request();
    if (buf.ndim != 1 || buf.shape[0] != grid->size())
        throw InvalidParams("array length must match the grid size");
    const double* data = static_cast<const double*>(buf.ptr);
    return Field(grid, std::vector<double>(data, data + grid->size()));
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(v.size());
    std::copy(v.begin(), v.end(), static_cast<double*>(out.request().ptr));
    return out;
}

py::dict report_dict(const EstimateReport& r) {
    py::dict d;
    d["label"] = r.label;
    d["s"] = r.s;
    d["radius"] = r.radius;
    d["n_samples"] = r.n_samples;
    d["seed"] = r.seed;
    d["max_ratio"] = r.max_ratio;
    d["median_ratio"] = r.median_ratio;
    d["stable"] = r.stable;
    d["params_digest"] = r.params_digest;
    for (const auto& [k, v] : r.extras) d[k.c_str()] = v;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Periodic pseudospectral solver and estimate laboratory for a "
              "nonlocal moderate-amplitude shallow-water wave model.";
    m.attr("__version__") = kVersion;

    py::register_exception<NonHermitianSpectrum>(m, "NonHermitianSpectrumError");
    py::register_exception<InvalidSign>(m, "InvalidSignError");
    py::register_exception<InvalidParams>(m, "InvalidParamsError");
    py::register_exception<InvalidIndexRange>(m, "InvalidIndexRangeError");
    py::register_exception<NonFiniteField>(m, "NonFiniteFieldError");
    py::register_exception<ConfigError>(m, "ConfigFileError");

    py::class_<Grid, GridPtr>(m, "Grid")
        .def(py::init([](double length, int n) { return make_grid(length, n); }),
             py::arg("length"), py::arg("n"))
        .def_property_readonly("length", &Grid::length)
        .def_property_readonly("n", &Grid::size)
        .def_property_readonly("spacing", &Grid::spacing)
        .def_property_readonly("nodes", [](const Grid& g) { return to_array(g.nodes()); })
        .def_property_readonly("wavenumbers",
                               [](const Grid& g) { return to_array(g.wavenumbers()); })
        .def_property_readonly("dealias_cutoff", &Grid::dealias_cutoff)
        .def("__repr__", [](const Grid& g) {
            return "Grid(length=" + std::to_string(g.length()) +
                   ", n=" + std::to_string(g.size()) + ")";
        });

    py::class_<Field>(m, "Field")
        .def(py::init(&field_from_array), py::arg("grid"), py::arg("values"))
        .def_property_readonly("grid", &Field::grid)
        .def_property_readonly("values", [](const Field& f) { return to_array(f.values()); })
        .def_property_readonly("finite", &Field::finite)
        .def("max_abs", &Field::max_abs)
        .def("__len__", &Field::size)
        .def("__add__", [](const Field& a, const Field& b) { return a + b; })
        .def("__sub__", [](const Field& a, const Field& b) { return a - b; })
        .def("__rmul__", [](const Field& f, double c) { return c * f; })
        .def("__mul__", [](const Field& f, double c) { return c * f; });

    py::enum_<FluxVariant>(m, "FluxVariant")
        .value("AS_PRINTED", FluxVariant::AsPrinted)
        .value("REDERIVED", FluxVariant::Rederived);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("epsilon", &ModelParams::epsilon)
        .def_readwrite("mu", &ModelParams::mu)
        .def_readwrite("alpha", &ModelParams::alpha)
        .def_readwrite("beta", &ModelParams::beta)
        .def_readwrite("gamma", &ModelParams::gamma)
        .def_readwrite("delta", &ModelParams::delta)
        .def_readwrite("iota", &ModelParams::iota)
        .def_readwrite("kappa", &ModelParams::kappa)
        .def("validate", &ModelParams::validate);

    py::enum_<StepMethod>(m, "StepMethod")
        .value("RK4_FIXED", StepMethod::RK4Fixed)
        .value("ADAPTIVE_EMBEDDED", StepMethod::AdaptiveEmbedded);

    py::class_<StepperConfig>(m, "StepperConfig")
        .def(py::init<>())
        .def_readwrite("method", &StepperConfig::method)
        .def_readwrite("dt", &StepperConfig::dt)
        .def_readwrite("t_end", &StepperConfig::t_end)
        .def_readwrite("atol", &StepperConfig::atol)
        .def_readwrite("rtol", &StepperConfig::rtol)
        .def_readwrite("safety", &StepperConfig::safety)
        .def_readwrite("dt_min", &StepperConfig::dt_min)
        .def_readwrite("cfl", &StepperConfig::cfl)
        .def_readwrite("snapshot_stride", &StepperConfig::snapshot_stride)
        .def_readwrite("slope_threshold", &StepperConfig::slope_threshold);

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("times", [](const Trajectory& t) { return to_array(t.times); })
        .def_property_readonly("snapshots",
                               [](const Trajectory& t) {
                                   const size_t rows = t.snapshots.size();
                                   const size_t cols =
                                       rows ? t.snapshots.front().values().size() : 0;
                                   py::array_t<double> out({rows, cols});
                                   double* p = static_cast<double*>(out.request().ptr);
                                   for (size_t i = 0; i < rows; ++i)
                                       std::copy(t.snapshots[i].values().begin(),
                                                 t.snapshots[i].values().end(), p + i * cols);
                                   return out;
                               })
        .def_property_readonly("termination",
                               [](const Trajectory& t) { return to_string(t.termination); })
        .def_property_readonly("breaking_time",
                               [](const Trajectory& t) { return t.breaking_time; })
        .def_property_readonly("warnings", [](const Trajectory& t) { return t.warnings; })
        .def_property_readonly("monitors", [](const Trajectory& t) {
            py::dict d;
            const auto col = [&](auto get) {
                std::vector<double> v(t.monitors.size());
                for (size_t i = 0; i < t.monitors.size(); ++i) v[i] = get(t.monitors[i]);
                return to_array(v);
            };
            d["t"] = col([](const MonitorRecord& r) { return r.t; });
            d["dt"] = col([](const MonitorRecord& r) { return r.dt_used; });
            d["mass"] = col([](const MonitorRecord& r) { return r.mass; });
            d["l2"] = col([](const MonitorRecord& r) { return r.l2; });
            d["hs"] = col([](const MonitorRecord& r) { return r.hs; });
            d["min_ux"] = col([](const MonitorRecord& r) { return r.min_ux; });
            d["max_abs_u"] = col([](const MonitorRecord& r) { return r.max_abs_u; });
            d["max_abs_ux"] = col([](const MonitorRecord& r) { return r.max_abs_ux; });
            return d;
        });

    // Spectral operations.
    m.def("forward", [](const Field& f) {
        const Spectrum s = forward(f);
        py::array_t<std::complex<double>> out(s.coeffs().size());
        std::copy(s.coeffs().begin(), s.coeffs().end(),
                  static_cast<std::complex<double>*>(out.request().ptr));
        return out;
    });
    m.def("inverse", [](const GridPtr& grid, const py::array_t<std::complex<double>>& coeffs) {
        const auto buf = coeffs.request();
        if (buf.ndim != 1 || buf.shape[0] != grid->size())
            throw InvalidParams("coefficient array length must match the grid size");
        const auto* data = static_cast<const std::complex<double>*>(buf.ptr);
        return inverse(Spectrum(grid, std::vector<std::complex<double>>(data, data + grid->size())));
    });
    m.def("derivative", &derivative, py::arg("f"), py::arg("order") = 1);
    m.def("bessel_potential", &bessel_potential);
    m.def("helmholtz_inverse", &helmholtz_inverse);
    m.def("sobolev_norm", py::overload_cast<const Field&, double>(&sobolev_norm));
    m.def("dealias", &dealias);
    m.def("low_pass", &low_pass);
    m.def("quadrature_integral", &quadrature_integral);
    m.def("multiplier_inequality_check", [](double mu, double beta, double xi_max, int n) {
        const auto rep = multiplier_inequality_check(mu, beta, xi_max, n);
        py::dict d;
        d["mu"] = rep.mu;
        d["beta"] = rep.beta;
        d["xi_max"] = rep.xi_max;
        d["n_samples"] = rep.n_samples;
        d["max_ratio"] = rep.max_ratio;
        d["violations"] = rep.violations;
        d["passed"] = rep.passed;
        return d;
    });

    // Model operations.
    m.def("flux_g", &flux_g);
    m.def("f_nonlocal", &f_nonlocal);
    m.def("rhs_split", &rhs_split);
    m.def("rhs_direct", &rhs_direct);
    m.def("equivalence_residual", &equivalence_residual);
    m.def("dispersion_omega", &dispersion_omega);
    m.def("breaking_indicator", [](const Field& u) {
        const BreakingIndicator b = breaking_indicator(u);
        return py::make_tuple(b.max_abs_u, b.min_ux, b.max_abs_ux);
    });

    // Initial conditions.
    m.def("ic_gaussian", &ic_gaussian);
    m.def("ic_sech2", &ic_sech2);
    m.def("ic_sine", &ic_sine);
    m.def("ic_random_sobolev", &ic_random_sobolev);

    // Time integration.
    m.def(
        "integrate",
        [](const Field& u0, const ModelParams& p, const StepperConfig& cfg,
           const std::string& rhs, double monitor_s) {
            RhsChoice choice = RhsChoice::direct();
            if (rhs == "split_as_printed") choice = RhsChoice::split(FluxVariant::AsPrinted);
            else if (rhs == "split_rederived") choice = RhsChoice::split(FluxVariant::Rederived);
            else if (rhs != "direct") throw InvalidParams("unknown rhs '" + rhs + "'");
            return integrate(u0, p, cfg, choice, monitor_s);
        },
        py::arg("u0"), py::arg("params"), py::arg("config"), py::arg("rhs") = "direct",
        py::arg("monitor_s") = 2.0);

    // Estimate harness.
    py::class_<SampleSpec>(m, "SampleSpec")
        .def(py::init<>())
        .def_readwrite("s", &SampleSpec::s)
        .def_readwrite("radius", &SampleSpec::radius)
        .def_readwrite("n_samples", &SampleSpec::n_samples)
        .def_readwrite("seed", &SampleSpec::seed)
        .def_readwrite("spectral_decay_margin", &SampleSpec::spectral_decay_margin);

    m.def("random_sobolev_field", &random_sobolev_field);
    m.def("apply_B", &apply_B);
    m.def("accretivity_lower_bound", [](const Field& u, int n, std::uint64_t seed) {
        return report_dict(accretivity_lower_bound(u, n, seed));
    });
    m.def("a2_operator_ratio", [](const GridPtr& g, const SampleSpec& s) {
        return report_dict(a2_operator_ratio(g, s));
    });
    m.def("b_bound_ratio", [](const GridPtr& g, const SampleSpec& s) {
        return report_dict(b_bound_ratio(g, s));
    });
    m.def("f_lipschitz_ratio",
          [](const GridPtr& g, const SampleSpec& s, const ModelParams& p, FluxVariant v,
             double norm_index) {
              return report_dict(f_lipschitz_ratio(
                  g, s, p, v, norm_index == 0.0 ? NormIndex::L2 : NormIndex::Hs));
          });
    m.def("product_estimate_ratio", [](const GridPtr& g, const SampleSpec& s, double t) {
        return report_dict(product_estimate_ratio(g, s, t));
    });
    m.def("commutator_estimate_ratio",
          [](const GridPtr& g, const SampleSpec& s, double st, double tt) {
              return report_dict(commutator_estimate_ratio(g, s, st, tt));
          });
    m.def("continuous_dependence",
          [](const Field& u0, const std::vector<double>& deltas, const ModelParams& p,
             const StepperConfig& cfg, double T, double s, std::uint64_t seed) {
              const auto rep = continuous_dependence(u0, deltas, p, cfg, T, s, seed);
              py::dict d;
              d["deltas"] = rep.deltas;
              d["amplification"] = rep.amplification;
              d["propagated_blowup"] = rep.propagated_blowup;
              d["notes"] = rep.notes;
              return d;
          });

    // CLI entry point, callable in-process.
    m.def(
        "run_command",
        [](const std::string& command, const std::string& config_path,
           const std::optional<std::string>& out_dir, const std::optional<std::uint64_t>& seed,
           bool quiet) {
            cli::CliOptions opts;
            opts.out_dir = out_dir;
            opts.seed = seed;
            opts.quiet = quiet;
            return cli::run_command(command, config_path, opts);
        },
        py::arg("command"), py::arg("config_path"), py::arg("out_dir") = std::nullopt,
        py::arg("seed") = std::nullopt, py::arg("quiet") = true);
}
