#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "slowlight/gpe.hpp"

namespace slowlight {

std::vector<double> Trajectory::speeds() const
{
    std::vector<double> v;
    for (std::size_t i = 1; i < t.size(); ++i) v.push_back((z[i] - z[i - 1]) / (t[i] - t[i - 1]));
    return v;
}

double Trajectory::fitted_speed(double fraction) const
{
    if (t.size() < 2) throw std::invalid_argument("fitted_speed: need at least two samples");
    fraction = std::clamp(fraction, 0.0, 1.0);
    auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(t.size())));
    count = std::clamp<std::size_t>(count, 2, t.size());
    const std::size_t first = t.size() - count;

    double mt = 0.0, mz = 0.0;
    for (std::size_t i = first; i < t.size(); ++i) {
        mt += t[i];
        mz += z[i];
    }
    mt /= static_cast<double>(count);
    mz /= static_cast<double>(count);
    double num = 0.0, den = 0.0;
    for (std::size_t i = first; i < t.size(); ++i) {
        num += (t[i] - mt) * (z[i] - mz);
        den += (t[i] - mt) * (t[i] - mt);
    }
    if (den == 0.0) throw std::invalid_argument("fitted_speed: samples share one time");
    return num / den;
}

std::vector<DensityMinimum> find_minima(const std::vector<cplx>& psi, const Grid1D& grid, const TrackOptions& options)
{
    const std::size_t n = psi.size();
    if (n != grid.size()) throw std::invalid_argument("find_minima: wavefunction does not match grid");
    std::vector<double> rho(n);
    for (std::size_t i = 0; i < n; ++i) rho[i] = std::norm(psi[i]);

    const double background =
        options.background_density > 0.0 ? options.background_density : *std::max_element(rho.begin(), rho.end());
    const double threshold = options.threshold_fraction * background;
    const double dz = grid.dz();
    const double period = grid.period();
    const double merge = options.merge_distance > 0.0 ? options.merge_distance : 4.0 * dz;

    std::vector<DensityMinimum> found;
    for (std::size_t i = 0; i < n; ++i) {
        const double left = rho[(i + n - 1) % n];
        const double mid = rho[i];
        const double right = rho[(i + 1) % n];
        if (!(mid < threshold && mid <= left && mid < right)) continue;
        const double curv = left - 2.0 * mid + right;
        double offset = 0.0;
        double value = mid;
        if (curv > 0.0) {
            offset = std::clamp(0.5 * (left - right) / curv, -0.5, 0.5);
            value = mid - 0.25 * (left - right) * offset;
        }
        double z = grid.z(i) + offset * dz;
        if (z < grid.z_min()) z += period;
        if (z >= grid.z_min() + period) z -= period;
        found.push_back({z, std::max(0.0, value)});
    }

    // Plateaus and noise can give several nearby minima; keep the deepest.
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.z < b.z; });
    std::vector<DensityMinimum> merged;
    for (const auto& m : found) {
        if (!merged.empty() && m.z - merged.back().z < merge) {
            if (m.density < merged.back().density) merged.back() = m;
            continue;
        }
        merged.push_back(m);
    }
    if (merged.size() > 1 && merged.front().z + period - merged.back().z < merge) {
        if (merged.back().density < merged.front().density) merged.front() = merged.back();
        merged.pop_back();
    }
    return merged;
}

std::vector<Trajectory> track_minima(const std::vector<WaveFunction>& frames, const Grid1D& grid,
                                     const TrackOptions& options)
{
    const double period = grid.period();
    const double max_jump = options.max_jump > 0.0 ? options.max_jump : period / 10.0;
    std::vector<Trajectory> tracks;
    std::vector<bool> open;

    for (const auto& frame : frames) {
        const auto minima = find_minima(frame.psi, grid, options);
        std::vector<int> owner(minima.size(), -1);
        std::vector<double> owner_distance(minima.size(), std::numeric_limits<double>::infinity());

        for (std::size_t k = 0; k < tracks.size(); ++k) {
            if (!open[k]) continue;
            const double last = tracks[k].z.back();
            double best = std::numeric_limits<double>::infinity();
            int pick = -1;
            for (std::size_t m = 0; m < minima.size(); ++m) {
                double d = minima[m].z - last;
                d -= period * std::round(d / period);
                if (std::abs(d) < best) {
                    best = std::abs(d);
                    pick = static_cast<int>(m);
                }
            }
            if (pick < 0 || best > max_jump) {
                open[k] = false;
                continue;
            }
            const auto m = static_cast<std::size_t>(pick);
            if (owner[m] >= 0) {
                tracks[k].ambiguous = true;
                tracks[static_cast<std::size_t>(owner[m])].ambiguous = true;
                if (best >= owner_distance[m]) continue;
            }
            owner[m] = static_cast<int>(k);
            owner_distance[m] = best;
        }

        for (std::size_t k = 0; k < tracks.size(); ++k) {
            if (!open[k]) continue;
            const auto it = std::find(owner.begin(), owner.end(), static_cast<int>(k));
            if (it == owner.end()) {
                open[k] = false;
                continue;
            }
            const auto& m = minima[static_cast<std::size_t>(it - owner.begin())];
            double d = m.z - tracks[k].z.back();
            d -= period * std::round(d / period);
            tracks[k].t.push_back(frame.t);
            tracks[k].z.push_back(tracks[k].z.back() + d);
            tracks[k].density.push_back(m.density);
        }
        for (std::size_t m = 0; m < minima.size(); ++m) {
            if (owner[m] >= 0) continue;
            Trajectory tr;
            tr.t.push_back(frame.t);
            tr.z.push_back(minima[m].z);
            tr.density.push_back(minima[m].density);
            tracks.push_back(std::move(tr));
            open.push_back(true);
        }
    }
    return tracks;
}

}  // namespace slowlight
