#pragma once

#include "wavelab/field.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace wavelab {

// Periodized profiles: the non-periodic shapes are summed over their
// periodic images so the sampled field is smooth across the seam.
Field ic_gaussian(const GridPtr& grid, double amp, double center, double width);
Field ic_sech2(const GridPtr& grid, double amp, double center, double width);

// amp * sin(2 pi k x / length) for an integer mode number k.
Field ic_sine(const GridPtr& grid, double amp, int k);

// Random H^s sample rescaled to exactly the requested norm.
Field ic_random_sobolev(const GridPtr& grid, double s, double radius, std::uint64_t seed);

// Reads a snapshot CSV (header "x,u") whose x column must match the grid
// nodes within 1e-9.
Field ic_from_file(const GridPtr& grid, const std::filesystem::path& path);

}
