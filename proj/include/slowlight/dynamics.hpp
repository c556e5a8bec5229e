// dynamics.hpp - signal/matter time evolution
//
// Two routes to the same physics: the closed-form weak-excitation propagator
// (translation by the integrated group velocity plus the cos(theta) amplitude
// law), and a mean-field integrator of the full signal + four matter-field
// equations. They are used to check each other.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "slowlight/grid.hpp"
#include "slowlight/medium.hpp"
#include "slowlight/schedule.hpp"
#include "slowlight/units.hpp"

namespace slowlight {

/// E(z) = amplitude * exp(-(z - center)^2 / (4 width^2)); |E|^2 has rms width `width`.
struct GaussianPulse {
    double center = 0.0;
    double width = 1.0;
    double amplitude = 1.0;

    cplx operator()(double z) const;
    cplx derivative(double z) const;

    bool operator==(const GaussianPulse&) const = default;
};

struct SignalEnvelope {
    double z_min = 0.0;
    double dz = 1.0;
    std::vector<cplx> samples;
    std::optional<GaussianPulse> shape;

    static SignalEnvelope sample(const Grid1D& grid, const GaussianPulse& pulse);

    double z(std::size_t i) const { return z_min + static_cast<double>(i) * dz; }
    double norm_sq() const;            // sum |E|^2 dz
    double centroid() const;           // |E|^2-weighted mean position
    double peak() const;               // max |E|

    /// Peak photon density |E|^2/L relative to min(N_a, N_b).
    double photon_density_ratio(const MediumParams& p) const;
    bool wea_admissible(const MediumParams& p, double threshold = 1e-2) const
    {
        return photon_density_ratio(p) < threshold;
    }
};

/// Integral of the lossless group velocity over [t0, t1] by adaptive Gauss-Kronrod.
double translation_distance(const ControlSchedule& sched, const MediumParams& p, double t0, double t1,
                            double rel_tol = 1e-8);

/// cos(theta(t)) / cos(theta(0)). Throws std::domain_error if Omega(0) = 0 with pairs present.
double amplitude_factor(const ControlSchedule& sched, const MediumParams& p, double t);

/// Closed-form weak-excitation propagation of env0 to time t. Envelopes with a
/// Gaussian descriptor are re-evaluated exactly; bare samples are linearly
/// interpolated (zero outside the sampled range).
SignalEnvelope wea_propagate(const SignalEnvelope& env0, const ControlSchedule& sched, const MediumParams& p,
                             double t, double rel_tol = 1e-8);

struct MeanFieldState {
    double t = 0.0;
    std::vector<cplx> E;
    std::vector<cplx> phi_a;
    std::vector<cplx> phi_b;
    std::vector<cplx> phi_e;
    std::vector<cplx> phi_g;
    /// Net signal charge integral(|E|^2/L) carried out through the boundaries so far.
    double photon_outflow = 0.0;

    std::size_t size() const { return E.size(); }

    /// Uniform atomic backgrounds sqrt(N_a), sqrt(N_b) and no light or molecules.
    static MeanFieldState uniform_atoms(const Grid1D& grid, const MediumParams& p);

    /// Signal envelope dressed as the dark-state polariton at t = 0:
    /// phi_g = -g sqrt(N_a N_b) E / Omega(0), phi_e from the first-order adiabatic correction.
    static MeanFieldState dark_state_polariton(const Grid1D& grid, const MediumParams& p,
                                               const ControlSchedule& sched, const SignalEnvelope& signal);

    SignalEnvelope signal(const Grid1D& grid) const;
    SignalEnvelope molecules_scaled(const Grid1D& grid, double scale) const;
};

struct Charges {
    double q1 = 0.0;  // integral |phi_a|^2 + |phi_e|^2 + |phi_g|^2
    double q2 = 0.0;  // integral |phi_b|^2 + |phi_e|^2 + |phi_g|^2
    double q3 = 0.0;  // integral |E|^2/L + |phi_e|^2 + |phi_g|^2
};

Charges conserved_charges(const MeanFieldState& s, const MediumParams& p, const Grid1D& grid);

enum class Advection { Upwind, Muscl };

struct IntegratorOptions {
    /// Keep every n-th step (0: only the initial and final states).
    std::size_t snapshot_stride = 0;
    /// RK4 substeps per half step of the local field equations.
    int reaction_substeps = 4;
    Advection advection = Advection::Upwind;
    /// Prescribed signal at the inflow boundary; zero when empty.
    std::function<cplx(double)> inflow;
};

/// Strang-split integrator: half local step (RK4), signal transport at c, half local step.
class MeanFieldIntegrator {
public:
    /// Throws std::invalid_argument on invalid parameters or a CFL violation.
    MeanFieldIntegrator(MediumParams p, ControlSchedule sched, Grid1D grid, IntegratorOptions options = {});

    /// Advances by one grid time step. Throws NumericalError on non-finite values.
    void step(MeanFieldState& s) const;

    /// Steps until s.t >= t_stop.
    void advance_to(MeanFieldState& s, double t_stop) const;

    /// Runs from s0 to the grid horizon, returning the snapshots.
    std::vector<MeanFieldState> run(MeanFieldState s0) const;

    const Grid1D& grid() const { return grid_; }
    const MediumParams& params() const { return p_; }

private:
    void react(MeanFieldState& s, double t0, double h) const;
    void transport(MeanFieldState& s, double t) const;
    void check_finite(const MeanFieldState& s) const;

    MediumParams p_;
    ControlSchedule sched_;
    Grid1D grid_;
    IntegratorOptions options_;
};

std::vector<MeanFieldState> integrate_mean_field(const MeanFieldState& s0, const ControlSchedule& sched,
                                                 const MediumParams& p, const Grid1D& grid,
                                                 const IntegratorOptions& options = {});

struct Alignment {
    double fidelity = 0.0;
    long shift = 0;  // retrieved[i + shift] pairs with input[i]
};

/// Shape overlap |<in, out>|^2 / (|in|^2 |out|^2) maximized over discrete shifts
/// |shift| <= max_shift (default: the whole grid). Throws std::invalid_argument
/// for a zero-norm input or mismatched grids.
Alignment align_envelopes(const SignalEnvelope& input, const SignalEnvelope& retrieved,
                          std::optional<std::size_t> max_shift = std::nullopt);

double storage_fidelity(const SignalEnvelope& input, const SignalEnvelope& retrieved,
                        std::optional<std::size_t> max_shift = std::nullopt);

}  // namespace slowlight
