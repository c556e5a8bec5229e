// gpe.hpp - molecular matter-wave mean-field dynamics
//
//   i dpsi/dt = -(1/2M) d2psi/dz2 + V_eff psi + U_gg n psi,   M = m_a + m_b
//
// with n = |psi|^2 (self-consistent) or n = |Phi0|^2 (frozen background).
// Grids are treated as periodic with period n_z * dz.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "slowlight/grid.hpp"
#include "slowlight/units.hpp"

namespace slowlight {

enum class Nonlinearity { SelfConsistent, FrozenBackground };

struct GpeParams {
    double m_a = 0.5;
    double m_b = 0.5;
    double U_gg = 1.0;
    double U_ab = 0.0;
    std::vector<double> V_g;  // external potential on the grid; empty means V_g = 0
    double N_a = 0.0;
    double N_b = 0.0;
    double background_amp = 1.0;  // |Phi0|
    Nonlinearity nonlinearity = Nonlinearity::SelfConsistent;
    double background_decay = 0.0;  // |Phi0| ~ exp(-rate t); 0 disables

    double total_mass() const { return m_a + m_b; }
    double background_density() const { return background_amp * background_amp; }
    void validate() const;
};

/// V_eff = V_g + sqrt(N_a N_b) U_ab sampled on the grid.
std::vector<double> effective_potential(const GpeParams& p, const Grid1D& grid);

/// The constant V_g that makes V_eff vanish: -sqrt(N_a N_b) U_ab.
double zeroing_potential(const GpeParams& p);

/// Bogoliubov sound speed sqrt(U_gg |Phi0|^2 / M). Throws for U_gg < 0.
double sound_speed(const GpeParams& p);

/// q = sqrt(1 - (v_nu/v_s)^2). Throws std::domain_error for |v_nu| > v_s.
double grayness(double v_nu, double v_s);

struct SolitonSpec {
    double q = 1.0;
    double z0 = 0.0;
    int direction = 1;   // +1 moves toward +z
    double alpha = 1.0;  // tanh argument is q (z - z0) / sqrt(alpha)

    /// alpha = xi^2 = 1 / (M U_gg |Phi0|^2), which makes the profile an exact solution.
    static double self_consistent_alpha(const GpeParams& p);
    /// alpha = 1 / (sqrt(4 pi a_gg) |Phi0|) in terms of a scattering length a_gg.
    static double alpha_from_scattering_length(double a_gg, double background_amp);

    double width() const;                           // sqrt(alpha) / q
    double velocity(const GpeParams& p) const;      // direction * v_s sqrt(1 - q^2)
    void validate() const;
};

struct WaveFunction {
    std::vector<cplx> psi;
    double t = 0.0;
};

/// Complex factor {i s sqrt(1-q^2) + q tanh[q x / sqrt(alpha)]}, s = +-1.
cplx soliton_factor(double q, int direction, double alpha, double x);

/// Samples the gray soliton at t = 0. On the periodic grid a lone gray soliton
/// has an unclosed phase jump, so a mirror soliton moving the other way is
/// placed half a period away; its effect near z0 is exponentially small.
/// Throws std::invalid_argument if V_eff is not identically zero.
WaveFunction gray_soliton(const SolitonSpec& spec, const GpeParams& p, const Grid1D& grid);

/// The soliton/partner pair with explicit centres, times the background phase at t.
WaveFunction soliton_pair(const SolitonSpec& spec, const GpeParams& p, const Grid1D& grid, double z_main,
                          double z_partner, double t);

/// exp(-i U_gg integral_{t0}^{t} |Phi0(t')|^2 dt').
cplx background_phase(const GpeParams& p, double t0, double t);

double gpe_norm(const WaveFunction& psi, const Grid1D& grid);
/// integral |dpsi/dz|^2/(2M) + V_eff |psi|^2 + (U/2)|psi|^4 (self-consistent) or
/// + U |Phi0|^2 |psi|^2 (frozen), with a spectral derivative.
double gpe_energy(const WaveFunction& psi, const GpeParams& p, const Grid1D& grid);

struct EvolveOptions {
    std::size_t snapshot_stride = 0;  // 0: initial and final frame only
    double aliasing_threshold = 1e-8;
};

struct Evolution {
    std::vector<WaveFunction> frames;
    std::vector<std::string> warnings;
};

/// Symmetric (Strang) split-step Fourier evolution to t_end with the grid's dt.
/// Throws std::invalid_argument when dt does not resolve the potential phase and
/// NumericalError on non-finite values.
Evolution split_step_evolve(const WaveFunction& psi0, const GpeParams& p, const Grid1D& grid, double t_end,
                            const EvolveOptions& options = {});

// ---------------------------------------------------------------------------
// Dip tracking

struct Trajectory {
    std::vector<double> t;
    std::vector<double> z;  // unwrapped across the periodic boundary
    std::vector<double> density;
    bool ambiguous = false;

    std::vector<double> speeds() const;
    /// Least-squares speed over the trailing `fraction` of the samples.
    double fitted_speed(double fraction = 1.0) const;
};

struct TrackOptions {
    double threshold_fraction = 0.9;
    double background_density = 0.0;  // <= 0: each frame's maximum density
    double merge_distance = 0.0;       // <= 0: 4 dz
    double max_jump = 0.0;             // <= 0: period / 10
};

/// Local density minima below threshold_fraction * background, located to
/// sub-grid accuracy by a parabola through the three nearest samples.
struct DensityMinimum {
    double z;
    double density;
};
std::vector<DensityMinimum> find_minima(const std::vector<cplx>& psi, const Grid1D& grid, const TrackOptions& options);

/// Links minima across frames by nearest-neighbour continuity. Two trajectories
/// competing for one minimum are both flagged ambiguous.
std::vector<Trajectory> track_minima(const std::vector<WaveFunction>& frames, const Grid1D& grid,
                                     const TrackOptions& options = {});

// ---------------------------------------------------------------------------
// Experiments

struct SolitonRunReport {
    Evolution evolution;
    std::vector<Trajectory> trajectories;
    double expected_speed = 0.0;
    double measured_speed = 0.0;
    double expected_min_density = 0.0;
    double measured_min_density = 0.0;
    double center_drift = 0.0;
    double norm_drift_per_time = 0.0;
    double energy_drift = 0.0;
    double shape_error = 0.0;  // max L2 distance to the translated analytic pair / background norm
};

/// Evolves gray_soliton(spec) and measures speed, depth, drift and shape persistence.
SolitonRunReport propagate_soliton(const SolitonSpec& spec, const GpeParams& p, const Grid1D& grid, double t_end,
                                   std::size_t snapshot_stride);

enum class SplitSeed { Exact, Product };

struct SplitOptions {
    SplitSeed seed = SplitSeed::Exact;
    double z0 = 0.0;
    std::size_t snapshot_stride = 0;  // 0: ~200 frames
    double late_fraction = 0.5;
    double transient = 0.1;  // fraction of the run excluded from the monotonicity check
};

/// Second-order seed: two gray solitons of grayness q and opposite velocities
/// sharing one centre. `Exact` is the two-soliton solution at its collision
/// time; `Product` is the product of the two one-soliton factors.
WaveFunction split_seed(double q, const GpeParams& p, const Grid1D& grid, const SplitOptions& options);

struct SplitReport {
    Evolution evolution;
    std::vector<Trajectory> trajectories;
    std::vector<std::size_t> persistent;  // indices into trajectories
    double expected_speed = 0.0;
    double left_speed = 0.0;
    double right_speed = 0.0;
    bool separation_monotone = false;
    bool degenerate = false;
    bool success = false;
    std::string diagnostics;
};

SplitReport soliton_split_experiment(double q, const GpeParams& p, const Grid1D& grid, double t_end,
                                     const SplitOptions& options = {});

}  // namespace slowlight
