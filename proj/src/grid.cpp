#include "slowlight/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace slowlight {

Grid1D::Grid1D(double z_min, double z_max, std::size_t n_z, double dt, double t_end)
    : z_min_(z_min), z_max_(z_max), n_z_(n_z), dt_(dt), t_end_(t_end)
{
    if (n_z < 16) throw std::invalid_argument("Grid1D: n_z must be >= 16");
    if (!(z_max > z_min) || !std::isfinite(z_max - z_min)) throw std::invalid_argument("Grid1D: need z_max > z_min");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("Grid1D: dt must be > 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("Grid1D: t_end must be >= 0");
}

Grid1D Grid1D::unit_courant(double z_min, double z_max, std::size_t n_z, double c, double t_end)
{
    if (n_z < 2) throw std::invalid_argument("Grid1D: n_z must be >= 16");
    const double dz = (z_max - z_min) / static_cast<double>(n_z - 1);
    return Grid1D(z_min, z_max, n_z, dz / c, t_end);
}

std::vector<double> Grid1D::positions() const
{
    std::vector<double> z(n_z_);
    for (std::size_t i = 0; i < n_z_; ++i) z[i] = this->z(i);
    return z;
}

std::size_t Grid1D::steps() const
{
    const double ratio = t_end_ / dt_;
    return static_cast<std::size_t>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
}

void require_cfl(const Grid1D& grid, double c)
{
    if (grid.courant(c) > 1.0 + 1e-12)
        throw std::invalid_argument("CFL violated: c dt / dz = " + std::to_string(grid.courant(c)) + " > 1");
}

}  // namespace slowlight
