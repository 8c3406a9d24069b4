#pragma once

#include "wavelab/grid.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace wavelab {

/** Real-valued point samples of a function on a periodic grid.
 *
 * Fields are immutable value types; every operation returns a fresh
 * field, so they are safe to share between threads. Non-finite values
 * are representable on purpose: they are the blow-up signal the time
 * stepper watches for.
 */
class Field {
public:
    Field(GridPtr grid, std::vector<double> values);

    static Field zeros(GridPtr grid);
    static Field constant(GridPtr grid, double c);
    static Field sample(GridPtr grid, const std::function<double(double)>& fn);

    const GridPtr& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](int j) const { return values_[j]; }
    int size() const { return static_cast<int>(values_.size()); }

    bool finite() const;
    double max_abs() const;
    double min_value() const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/** Fourier coefficients of a Field under the 1/n-forward convention
 *  u_hat_k = (1/n) sum_j u(x_j) exp(-i xi_k x_j), stored in FFT order. */
class Spectrum {
public:
    Spectrum(GridPtr grid, std::vector<std::complex<double>> coeffs);

    static Spectrum zeros(GridPtr grid);

    const GridPtr& grid() const { return grid_; }
    const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }
    std::complex<double> coeff(int mode) const { return coeffs_[grid_->position_of_mode(mode)]; }

    // Returns a copy with the coefficient of one signed mode replaced.
    Spectrum with_coeff(int mode, std::complex<double> value) const;

private:
    GridPtr grid_;
    std::vector<std::complex<double>> coeffs_;
};

// Pointwise arithmetic. Mixed-grid operands are a logic error and throw.
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double c, const Field& f);
Field pointwise(const Field& a, const Field& b);

void require_same_grid(const Field& a, const Field& b);

}
