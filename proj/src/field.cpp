#include "wavelab/field.hpp"

#include "wavelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace wavelab {

Field::Field(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_)
        throw InvalidParams("field constructed without a grid");
    if (static_cast<int>(values_.size()) != grid_->size())
        throw InvalidParams("field has " + std::to_string(values_.size()) +
                            " values but the grid has " + std::to_string(grid_->size()) + " points");
}

Field Field::zeros(GridPtr grid) {
    const int n = grid->size();
    return Field(std::move(grid), std::vector<double>(n, 0.0));
}

Field Field::constant(GridPtr grid, double c) {
    const int n = grid->size();
    return Field(std::move(grid), std::vector<double>(n, c));
}

Field Field::sample(GridPtr grid, const std::function<double(double)>& fn) {
    std::vector<double> v(grid->size());
    for (int j = 0; j < grid->size(); ++j) v[j] = fn(grid->nodes()[j]);
    return Field(std::move(grid), std::move(v));
}

bool Field::finite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double x) { return std::isfinite(x); });
}

double Field::max_abs() const {
    double m = 0.0;
    for (double x : values_) m = std::max(m, std::abs(x));
    return m;
}

double Field::min_value() const {
    double m = values_.empty() ? 0.0 : values_[0];
    for (double x : values_) m = std::min(m, x);
    return m;
}

Spectrum::Spectrum(GridPtr grid, std::vector<std::complex<double>> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    if (!grid_)
        throw InvalidParams("spectrum constructed without a grid");
    if (static_cast<int>(coeffs_.size()) != grid_->size())
        throw InvalidParams("spectrum has " + std::to_string(coeffs_.size()) +
                            " coefficients but the grid has " + std::to_string(grid_->size()) + " points");
}

Spectrum Spectrum::zeros(GridPtr grid) {
    const int n = grid->size();
    return Spectrum(std::move(grid), std::vector<std::complex<double>>(n));
}

Spectrum Spectrum::with_coeff(int mode, std::complex<double> value) const {
    auto c = coeffs_;
    c[grid_->position_of_mode(mode)] = value;
    return Spectrum(grid_, std::move(c));
}

void require_same_grid(const Field& a, const Field& b) {
    if (!(*a.grid() == *b.grid()))
        throw InvalidParams("fields live on different grids");
}

Field operator+(const Field& a, const Field& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.values());
    for (int j = 0; j < a.size(); ++j) v[j] += b[j];
    return Field(a.grid(), std::move(v));
}

Field operator-(const Field& a, const Field& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.values());
    for (int j = 0; j < a.size(); ++j) v[j] -= b[j];
    return Field(a.grid(), std::move(v));
}

Field operator*(double c, const Field& f) {
    std::vector<double> v(f.values());
    for (double& x : v) x *= c;
    return Field(f.grid(), std::move(v));
}

Field pointwise(const Field& a, const Field& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.values());
    for (int j = 0; j < a.size(); ++j) v[j] *= b[j];
    return Field(a.grid(), std::move(v));
}

}
