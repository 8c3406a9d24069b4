#include "wavelab/grid.hpp"

#include "wavelab/errors.hpp"

#include <cmath>
#include <string>

namespace wavelab {

Grid::Grid(double length, int n) : length_(length), n_(n) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw InvalidParams("grid length must be positive and finite, got " + std::to_string(length));
    if (n < 8)
        throw InvalidParams("grid needs n >= 8 points, got " + std::to_string(n));
    if (n % 2 != 0)
        throw InvalidParams("grid size must be even, got " + std::to_string(n));

    spacing_ = length_ / n_;
    nodes_.resize(n_);
    wavenumbers_.resize(n_);
    const double dxi = 2.0 * M_PI / length_;
    for (int p = 0; p < n_; ++p) {
        nodes_[p] = spacing_ * p;
        wavenumbers_[p] = dxi * mode_at(p);
    }
}

double Grid::wavenumber_of_mode(int mode) const {
    return 2.0 * M_PI / length_ * mode;
}

GridPtr make_grid(double length, int n) {
    return std::make_shared<const Grid>(length, n);
}

}
