#include "wavelab/spectral.hpp"

#include "wavelab/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <utility>

namespace wavelab {

namespace {

// One cached complex-to-complex plan pair per transform size. FFTW plan
// creation is not thread-safe and the cached buffers are shared, so every
// transform holds the cache mutex; callers never see the serialization.
// FFTW_ESTIMATE keeps plan choice deterministic run to run.
struct PlanPair {
    int n;
    fftw_complex* buf_in;
    fftw_complex* buf_out;
    fftw_plan fwd;
    fftw_plan bwd;

    explicit PlanPair(int n_) : n(n_) {
        buf_in = fftw_alloc_complex(n);
        buf_out = fftw_alloc_complex(n);
        fwd = fftw_plan_dft_1d(n, buf_in, buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, buf_in, buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~PlanPair() {
        fftw_destroy_plan(bwd);
        fftw_destroy_plan(fwd);
        fftw_free(buf_out);
        fftw_free(buf_in);
    }
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;
};

class FftEngine {
public:
    static FftEngine& instance() {
        static FftEngine eng;
        return eng;
    }

    std::vector<std::complex<double>> forward(const std::vector<double>& in) {
        std::lock_guard<std::mutex> lock(mutex_);
        PlanPair& p = plans(static_cast<int>(in.size()));
        for (int j = 0; j < p.n; ++j) {
            p.buf_in[j][0] = in[j];
            p.buf_in[j][1] = 0.0;
        }
        fftw_execute(p.fwd);
        const double scale = 1.0 / p.n;
        std::vector<std::complex<double>> out(p.n);
        for (int k = 0; k < p.n; ++k)
            out[k] = std::complex<double>(p.buf_out[k][0] * scale, p.buf_out[k][1] * scale);
        return out;
    }

    // Unnormalized backward transform sum_k c_k exp(+i 2 pi j k / n).
    std::vector<std::complex<double>> backward(const std::vector<std::complex<double>>& in) {
        std::lock_guard<std::mutex> lock(mutex_);
        PlanPair& p = plans(static_cast<int>(in.size()));
        for (int k = 0; k < p.n; ++k) {
            p.buf_in[k][0] = in[k].real();
            p.buf_in[k][1] = in[k].imag();
        }
        fftw_execute(p.bwd);
        std::vector<std::complex<double>> out(p.n);
        for (int j = 0; j < p.n; ++j)
            out[j] = std::complex<double>(p.buf_out[j][0], p.buf_out[j][1]);
        return out;
    }

private:
    PlanPair& plans(int n) {
        auto it = cache_.find(n);
        if (it == cache_.end())
            it = cache_.emplace(n, std::make_unique<PlanPair>(n)).first;
        return *it->second;
    }

    std::mutex mutex_;
    std::map<int, std::unique_ptr<PlanPair>> cache_;
};

std::vector<std::complex<double>> evaluate_symbol(const Grid& grid, const MultiplierSymbol& m) {
    std::vector<std::complex<double>> vals(grid.size());
    for (int p = 0; p < grid.size(); ++p) {
        const double xi = grid.wavenumbers()[p];
        std::complex<double> v = m(xi);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream msg;
            msg << "multiplier '" << m.label() << "' is non-finite at xi = " << xi;
            throw InvalidParams(msg.str());
        }
        vals[p] = v;
    }
    if (m.zero_nyquist()) vals[grid.size() / 2] = 0.0;
    return vals;
}

double integer_power(double x, int order) {
    double r = 1.0;
    for (int i = 0; i < order; ++i) r *= x;
    return r;
}

}  // namespace

MultiplierSymbol::MultiplierSymbol(std::string label,
                                   std::function<std::complex<double>(double)> fn,
                                   bool zero_nyquist)
    : label_(std::move(label)), fn_(std::move(fn)), zero_nyquist_(zero_nyquist) {}

MultiplierSymbol MultiplierSymbol::identity() {
    return MultiplierSymbol("identity", [](double) { return std::complex<double>(1.0, 0.0); });
}

MultiplierSymbol MultiplierSymbol::derivative(int order) {
    if (order < 1) throw InvalidParams("derivative order must be >= 1");
    // (i xi)^order, with i^order reduced exactly by the residue mod 4.
    const int phase = order % 4;
    return MultiplierSymbol(
        "d/dx^" + std::to_string(order),
        [order, phase](double xi) {
            const double mag = integer_power(xi, order);
            switch (phase) {
                case 0: return std::complex<double>(mag, 0.0);
                case 1: return std::complex<double>(0.0, mag);
                case 2: return std::complex<double>(-mag, 0.0);
                default: return std::complex<double>(0.0, -mag);
            }
        },
        order % 2 == 1);
}

MultiplierSymbol MultiplierSymbol::bessel(double s) {
    return MultiplierSymbol("bessel^" + std::to_string(s), [s](double xi) {
        return std::complex<double>(std::pow(1.0 + xi * xi, 0.5 * s), 0.0);
    });
}

MultiplierSymbol MultiplierSymbol::helmholtz_inverse(double mubeta) {
    if (!(mubeta < 0.0))
        throw InvalidSign("helmholtz inverse needs mu*beta < 0, got " + std::to_string(mubeta));
    return MultiplierSymbol("helmholtz_inverse", [mubeta](double xi) {
        return std::complex<double>(1.0 / (1.0 - mubeta * xi * xi), 0.0);
    });
}

MultiplierSymbol MultiplierSymbol::compose(const MultiplierSymbol& other) const {
    auto f = fn_;
    auto g = other.fn_;
    return MultiplierSymbol(label_ + "*" + other.label_,
                            [f, g](double xi) { return f(xi) * g(xi); },
                            zero_nyquist_ || other.zero_nyquist_);
}

Spectrum forward(const Field& f) {
    return Spectrum(f.grid(), FftEngine::instance().forward(f.values()));
}

Field inverse(const Spectrum& s) {
    const auto out = FftEngine::instance().backward(s.coeffs());
    double max_re = 0.0, max_im = 0.0;
    for (const auto& z : out) {
        max_re = std::max(max_re, std::abs(z.real()));
        max_im = std::max(max_im, std::abs(z.imag()));
    }
    if (max_im > 1e-10 * max_re) {
        std::ostringstream msg;
        msg << "spectrum is not Hermitian: imaginary residue " << max_im
            << " vs real amplitude " << max_re;
        throw NonHermitianSpectrum(msg.str());
    }
    std::vector<double> v(out.size());
    for (size_t j = 0; j < out.size(); ++j) v[j] = out[j].real();
    return Field(s.grid(), std::move(v));
}

Spectrum apply_multiplier(const Spectrum& s, const MultiplierSymbol& m) {
    const auto vals = evaluate_symbol(*s.grid(), m);
    std::vector<std::complex<double>> c(s.coeffs());
    for (size_t k = 0; k < c.size(); ++k) c[k] *= vals[k];
    return Spectrum(s.grid(), std::move(c));
}

Field apply_multiplier(const Field& f, const MultiplierSymbol& m) {
    return inverse(apply_multiplier(forward(f), m));
}

Field derivative(const Field& f, int order) {
    return apply_multiplier(f, MultiplierSymbol::derivative(order));
}

Field bessel_potential(const Field& f, double s) {
    if (s == 0.0) return f;
    return apply_multiplier(f, MultiplierSymbol::bessel(s));
}

Field helmholtz_inverse(const Field& f, double mubeta) {
    return apply_multiplier(f, MultiplierSymbol::helmholtz_inverse(mubeta));
}

double sobolev_norm(const Spectrum& s, double index) {
    const auto& xi = s.grid()->wavenumbers();
    double acc = 0.0;
    for (size_t k = 0; k < s.coeffs().size(); ++k)
        acc += std::pow(1.0 + xi[k] * xi[k], index) * std::norm(s.coeffs()[k]);
    return std::sqrt(s.grid()->length() * acc);
}

double sobolev_norm(const Field& f, double s) {
    return sobolev_norm(forward(f), s);
}

double quadrature_l2_norm(const Field& f) {
    double acc = 0.0;
    for (double x : f.values()) acc += x * x;
    return std::sqrt(f.grid()->spacing() * acc);
}

double quadrature_integral(const Field& f) {
    double acc = 0.0;
    for (double x : f.values()) acc += x;
    return f.grid()->spacing() * acc;
}

double quadrature_inner(const Field& a, const Field& b) {
    require_same_grid(a, b);
    double acc = 0.0;
    for (int j = 0; j < a.size(); ++j) acc += a[j] * b[j];
    return a.grid()->spacing() * acc;
}

Field low_pass(const Field& f, int kmax) {
    Spectrum s = forward(f);
    std::vector<std::complex<double>> c(s.coeffs());
    for (int p = 0; p < f.grid()->size(); ++p)
        if (std::abs(f.grid()->mode_at(p)) > kmax) c[p] = 0.0;
    return inverse(Spectrum(f.grid(), std::move(c)));
}

Field dealias(const Field& f) {
    return low_pass(f, f.grid()->dealias_cutoff());
}

double unresolved_energy_fraction(const Field& f) {
    const Spectrum s = forward(f);
    const int cutoff = f.grid()->dealias_cutoff();
    double total = 0.0, high = 0.0;
    for (int p = 0; p < f.grid()->size(); ++p) {
        const double e = std::norm(s.coeffs()[p]);
        total += e;
        if (std::abs(f.grid()->mode_at(p)) > cutoff) high += e;
    }
    return total > 0.0 ? high / total : 0.0;
}

MultiplierChainReport multiplier_inequality_check(double mu, double beta,
                                                  double xi_max, int n_samples) {
    if (!(beta < 0.0)) throw InvalidParams("multiplier chain needs beta < 0");
    if (!(mu > 0.0)) throw InvalidParams("multiplier chain needs mu > 0");
    const double mb = std::abs(mu * beta);
    if (!(mb < 1.0))
        throw InvalidParams("multiplier chain needs |mu*beta| < 1, got " + std::to_string(mb));
    if (!(xi_max > 0.0)) throw InvalidParams("multiplier chain needs xi_max > 0");
    if (n_samples < 2) throw InvalidParams("multiplier chain needs at least 2 samples");

    MultiplierChainReport rep;
    rep.mu = mu;
    rep.beta = beta;
    rep.xi_max = xi_max;
    rep.n_samples = n_samples;

    // xi = 0 plus n_samples-1 log-spaced points; 0 itself cannot sit on a
    // log ladder so the ladder starts at xi_max * 1e-8.
    const double lo = std::log(xi_max * 1e-8);
    const double hi = std::log(xi_max);
    for (int i = 0; i < n_samples; ++i) {
        double xi;
        if (i == 0) {
            xi = 0.0;
        } else {
            const double t = static_cast<double>(i - 1) / (n_samples - 2 > 0 ? n_samples - 2 : 1);
            xi = std::exp(lo + t * (hi - lo));
        }
        const double mubeta = mu * beta;
        const double lhs = xi / (1.0 - mubeta * xi * xi);
        const double rhs = 1.0 / (mb * std::sqrt(1.0 + xi * xi));
        const double ratio = lhs / rhs;
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (lhs > rhs) ++rep.violations;
    }
    rep.passed = rep.violations == 0;
    return rep;
}

}
