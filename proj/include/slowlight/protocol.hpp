// protocol.hpp - experiment drivers built on the medium and dynamics modules

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slowlight/dynamics.hpp"
#include "slowlight/grid.hpp"
#include "slowlight/medium.hpp"
#include "slowlight/schedule.hpp"

namespace slowlight {

struct FeasibilityReport {
    double optical_depth = 0.0;
    double threshold = 0.1;
    double storage_margin = 0.0;      // t_storage * gamma_1
    double spectral_margin = 0.0;     // (1/t_s) / (sqrt(d) v_g / L)
    double compression_margin = 0.0;  // v_g t_s / L
    double plateau_velocity = 0.0;    // v_g at the schedule plateau, decay included
    bool storage_window_ok = false;
    bool spectral_window_ok = false;
    bool compression_ok = false;

    bool all_ok() const { return storage_window_ok && spectral_window_ok && compression_ok; }
};

/// Evaluates the three "much less than" conditions of a storage run; each
/// passes when its margin is below `threshold`.
FeasibilityReport feasibility_check(const MediumParams& p, double t_s, const ControlSchedule& sched,
                                    double t_storage, double threshold = 0.1);

/// Time samples of a velocity curve.
struct TimeAxis {
    double t_begin = 0.0;
    double t_end = 140.0;
    std::size_t count = 281;

    std::vector<double> samples() const;
};

struct VelocityCurve {
    std::vector<double> t;
    std::vector<double> omega;
    std::vector<double> vg_over_c;
};

/// Field profiles of a storage/retrieval run, all on the integrator grid.
struct StorageProfiles {
    std::vector<double> z;
    std::vector<cplx> E_in;
    std::vector<cplx> phi_g_stored;
    std::vector<cplx> E_out;
};

struct ExperimentReport {
    std::string kind;   // imbalance | medium | storage | ...
    std::string label;  // curve label: eta value or medium kind
    std::vector<std::pair<std::string, double>> parameters;
    std::vector<std::pair<std::string, double>> results;
    VelocityCurve curve;
    std::optional<StorageProfiles> profiles;
    std::optional<FeasibilityReport> feasibility;
    std::vector<std::string> warnings;
    bool trivial_input = false;

    /// Looks up a named result; throws std::out_of_range if absent.
    double result(const std::string& name) const;
};

/// v_g(t)/c for an explicit pair density (decay-corrected formula).
VelocityCurve velocity_curve(const MediumParams& p, double pair_density, const ControlSchedule& sched,
                             const TimeAxis& axis);

/// One decay-corrected v_g(t) curve per imbalance eta = N_b/N_a at fixed N_a + N_b.
std::vector<ExperimentReport> imbalance_sweep(double N_total, const std::vector<double>& etas,
                                              const ControlSchedule& sched, const MediumParams& p_base,
                                              const TimeAxis& axis = {});

struct ExponentFit {
    double N_min = 1.0e5;
    double N_max = 1.0e7;
    std::size_t points = 21;
    double t_ref = 0.0;  // Omega is taken at this time
};

/// Least-squares slope of log(c/v_g - 1) against log(N_total) for one medium kind.
double fit_density_exponent(MediumKind kind, const ControlSchedule& sched, const MediumParams& p_base,
                            const ExponentFit& fit = {});

/// v_g(t) per medium kind at the balanced split, plus the fitted exponent ("exponent").
std::vector<ExperimentReport> medium_comparison(double N_total, const std::vector<MediumKind>& kinds,
                                                const ControlSchedule& sched, const MediumParams& p_base,
                                                const TimeAxis& axis = {}, const ExponentFit& fit = {});

struct StorageOptions {
    bool force = false;
    double feasibility_threshold = 0.1;
    /// Temporal pulse length for the feasibility check; 0 derives width / v_g(plateau).
    double t_s = 0.0;
    /// Leaked fraction above which a "leakage" warning is issued.
    double leakage_warning = 1e-3;
    IntegratorOptions integrator;
};

/// Runs the mean-field integrator through storage (Omega -> 0) and retrieval and
/// summarizes the mapping residual, fidelity, efficiency and charge drift.
/// Throws FeasibilityRefused if a feasibility check fails and `force` is off.
ExperimentReport run_storage_retrieval(const MediumParams& p, const ControlSchedule& sched,
                                       const GaussianPulse& pulse, const Grid1D& grid,
                                       const StorageOptions& options = {});

}  // namespace slowlight
