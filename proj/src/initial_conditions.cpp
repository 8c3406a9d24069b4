#include "wavelab/initial_conditions.hpp"

#include "wavelab/errors.hpp"
#include "wavelab/harness.hpp"
#include "wavelab/spectral.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace wavelab {

namespace {
constexpr int kImages = 8;
}

Field ic_gaussian(const GridPtr& grid, double amp, double center, double width) {
    if (!(width > 0.0)) throw InvalidParams("gaussian ic needs width > 0");
    const double L = grid->length();
    return Field::sample(grid, [=](double x) {
        double v = 0.0;
        for (int m = -kImages; m <= kImages; ++m) {
            const double z = (x - center + m * L) / width;
            v += amp * std::exp(-z * z);
        }
        return v;
    });
}

Field ic_sech2(const GridPtr& grid, double amp, double center, double width) {
    if (!(width > 0.0)) throw InvalidParams("sech2 ic needs width > 0");
    const double L = grid->length();
    return Field::sample(grid, [=](double x) {
        double v = 0.0;
        for (int m = -kImages; m <= kImages; ++m) {
            const double c = std::cosh((x - center + m * L) / width);
            v += amp / (c * c);
        }
        return v;
    });
}

Field ic_sine(const GridPtr& grid, double amp, int k) {
    const double xi = grid->wavenumber_of_mode(k);
    return Field::sample(grid, [=](double x) { return amp * std::sin(xi * x); });
}

Field ic_random_sobolev(const GridPtr& grid, double s, double radius, std::uint64_t seed) {
    SampleSpec spec;
    spec.s = s;
    spec.radius = radius;
    spec.seed = seed;
    Field u = random_sobolev_field(grid, spec, 0);
    const double norm = sobolev_norm(u, s);
    if (norm > 0.0) u = (radius / norm) * u;
    return u;
}

Field ic_from_file(const GridPtr& grid, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open ic file " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "x,u")
        throw ConfigError("ic file " + path.string() + " must start with header 'x,u'");
    std::vector<double> values;
    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string xs, us;
        if (!std::getline(ls, xs, ',') || !std::getline(ls, us))
            throw ConfigError("ic file " + path.string() + ": malformed row " + std::to_string(row));
        const double x = std::stod(xs);
        const double u = std::stod(us);
        if (row >= grid->size())
            throw ConfigError("ic file " + path.string() + " has more rows than grid points");
        if (std::abs(x - grid->nodes()[row]) > 1e-9)
            throw ConfigError("ic file " + path.string() + ": x[" + std::to_string(row) +
                              "] does not match the grid node");
        values.push_back(u);
        ++row;
    }
    if (row != grid->size())
        throw ConfigError("ic file " + path.string() + " has " + std::to_string(row) +
                          " rows but the grid has " + std::to_string(grid->size()) + " points");
    return Field(grid, std::move(values));
}

}
