#pragma once

#include "wavelab/field.hpp"

#include <complex>
#include <functional>
#include <string>

namespace wavelab {

/** A diagonal Fourier-multiplier operator: a scalar symbol xi -> complex
 *  plus a label used in error messages.
 *
 * For the operator to map real fields to real fields the symbol must
 * satisfy m(-xi) = conj(m(xi)); `zero_nyquist` additionally zeroes the
 * unpaired Nyquist mode, the standard choice for odd-order derivatives
 * whose symbol is sign-ambiguous there.
 */
class MultiplierSymbol {
public:
    MultiplierSymbol(std::string label,
                     std::function<std::complex<double>(double)> fn,
                     bool zero_nyquist = false);

    std::complex<double> operator()(double xi) const { return fn_(xi); }
    const std::string& label() const { return label_; }
    bool zero_nyquist() const { return zero_nyquist_; }

    static MultiplierSymbol identity();
    static MultiplierSymbol derivative(int order);
    static MultiplierSymbol bessel(double s);
    static MultiplierSymbol helmholtz_inverse(double mubeta);

    // Pointwise product of two symbols (operator composition).
    MultiplierSymbol compose(const MultiplierSymbol& other) const;

private:
    std::string label_;
    std::function<std::complex<double>(double)> fn_;
    bool zero_nyquist_;
};

// Forward DFT under the 1/n convention; inverse(forward(f)) == f to 1e-12.
Spectrum forward(const Field& f);

// Inverse DFT. Throws NonHermitianSpectrum when the imaginary residue of
// the reconstruction exceeds 1e-10 relative to the real part.
Field inverse(const Spectrum& s);

// forward -> pointwise multiply by m(xi_k) -> inverse. Throws InvalidParams
// when the symbol is non-finite on a grid wavenumber.
Field apply_multiplier(const Field& f, const MultiplierSymbol& m);
Spectrum apply_multiplier(const Spectrum& s, const MultiplierSymbol& m);

// Spectral derivative of the given order; odd orders zero the Nyquist mode.
Field derivative(const Field& f, int order);

// Bessel potential (1 - dxx)^(s/2), realized as (1 + xi^2)^(s/2).
Field bessel_potential(const Field& f, double s);

// (1 + mubeta*dxx)^(-1) with mubeta < 0, i.e. the bounded smoothing
// multiplier (1 - mubeta*xi^2)^(-1). Throws InvalidSign for mubeta >= 0.
Field helmholtz_inverse(const Field& f, double mubeta);

// sqrt( length * sum_k (1 + xi_k^2)^s |u_hat_k|^2 ); s = 0 agrees with the
// quadrature L2 norm by Parseval.
double sobolev_norm(const Field& f, double s);
double sobolev_norm(const Spectrum& s, double index);

// Quadrature norms and integrals on the grid.
double quadrature_l2_norm(const Field& f);
double quadrature_integral(const Field& f);
double quadrature_inner(const Field& a, const Field& b);

// 2/3-rule projection: zeroes every mode with |k| > n/3.
Field dealias(const Field& f);

// Zeroes every mode with |k| > kmax. kmax < 0 keeps nothing.
Field low_pass(const Field& f, int kmax);

// Fraction of spectral energy carried by modes above the dealias cutoff;
// the resolution diagnostic used for under-resolved initial data.
double unresolved_energy_fraction(const Field& f);

/** Result of the pointwise multiplier-chain check
 *  (1 - mu*beta*xi^2)^(-1) * xi <= |mu*beta|^(-1) (1 + xi^2)^(-1/2). */
struct MultiplierChainReport {
    double mu = 0.0;
    double beta = 0.0;
    double xi_max = 0.0;
    int n_samples = 0;
    double max_ratio = 0.0;  // max over samples of lhs/rhs, <= 1 when the chain holds
    long violations = 0;
    bool passed = false;
};

// Samples the chain on {0} plus log-spaced xi in (0, xi_max]. Requires
// beta < 0, mu > 0 and |mu*beta| < 1 (InvalidParams otherwise).
MultiplierChainReport multiplier_inequality_check(double mu, double beta,
                                                  double xi_max, int n_samples);

}
