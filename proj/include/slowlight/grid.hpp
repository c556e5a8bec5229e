// grid.hpp - uniform 1D grid with a time step and horizon

#pragma once

#include <cstddef>
#include <vector>

namespace slowlight {

/// Nodes z_i = z_min + i dz, i = 0..n_z-1, dz = (z_max - z_min)/(n_z - 1).
/// Spectral solvers treat the grid as periodic with period n_z * dz.
class Grid1D {
public:
    Grid1D(double z_min, double z_max, std::size_t n_z, double dt, double t_end);

    /// Grid whose time step puts the signal at Courant number exactly 1.
    static Grid1D unit_courant(double z_min, double z_max, std::size_t n_z, double c, double t_end);

    double z_min() const { return z_min_; }
    double z_max() const { return z_max_; }
    std::size_t size() const { return n_z_; }
    double dt() const { return dt_; }
    double t_end() const { return t_end_; }
    double dz() const { return (z_max_ - z_min_) / static_cast<double>(n_z_ - 1); }
    double z(std::size_t i) const { return z_min_ + static_cast<double>(i) * dz(); }
    double period() const { return static_cast<double>(n_z_) * dz(); }
    std::vector<double> positions() const;

    /// Number of dt steps needed to reach t_end (the last step may overshoot by < dt).
    std::size_t steps() const;

    double courant(double c) const { return c * dt_ / dz(); }

    bool operator==(const Grid1D&) const = default;

private:
    double z_min_;
    double z_max_;
    std::size_t n_z_;
    double dt_;
    double t_end_;
};

/// Throws std::invalid_argument when c dt > dz.
void require_cfl(const Grid1D& grid, double c);

}  // namespace slowlight
