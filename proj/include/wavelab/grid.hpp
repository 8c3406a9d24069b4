#pragma once

#include <memory>
#include <vector>

namespace wavelab {

/** Uniform periodic grid on [0, length).
 *
 * Wavenumbers are stored in FFT order: position p holds the signed mode
 * p for p < n/2 and p - n for p >= n/2, so the unpaired Nyquist mode
 * -n/2 sits at position n/2. All spectral arrays in this project use the
 * same layout.
 */
class Grid {
public:
    Grid(double length, int n);

    double length() const { return length_; }
    int size() const { return n_; }
    double spacing() const { return spacing_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& wavenumbers() const { return wavenumbers_; }

    int mode_at(int pos) const { return pos < n_ / 2 ? pos : pos - n_; }
    int position_of_mode(int mode) const { return mode >= 0 ? mode : mode + n_; }
    double wavenumber_of_mode(int mode) const;

    // Largest |mode| kept by the 2/3-rule dealias projection.
    int dealias_cutoff() const { return n_ / 3; }

    bool operator==(const Grid& other) const {
        return n_ == other.n_ && length_ == other.length_;
    }

private:
    double length_;
    int n_;
    double spacing_;
    std::vector<double> nodes_;
    std::vector<double> wavenumbers_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(double length, int n);

}
