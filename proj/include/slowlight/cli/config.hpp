// config.hpp - run configuration for the command-line front end
//
// A config document is a flat YAML map of dotted keys, e.g.
//
//   experiment: store
//   medium.length_um: 70
//   schedule.omega0_rad_per_us: 31.4159
//
// Every key has a default. A key without a dot may be used as shorthand for
// the unique full key ending in it (`eta` for `medium.eta`).

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "slowlight/dynamics.hpp"
#include "slowlight/gpe.hpp"
#include "slowlight/grid.hpp"
#include "slowlight/medium.hpp"
#include "slowlight/protocol.hpp"
#include "slowlight/schedule.hpp"

namespace slowlight::cli {

enum class Experiment { GroupVel, Propagate, Store, Imbalance, Mediums, GpeSoliton, GpeSplit, Feasibility };

std::string_view to_string(Experiment e);
/// Throws std::invalid_argument for an unknown name.
Experiment experiment_from_string(std::string_view name);

struct RunConfig {
    Experiment experiment = Experiment::GroupVel;
    std::string output_dir = "out";
    std::size_t snapshot_stride = 0;  // 0: experiment default

    struct Medium {
        double g_tilde = 2.0e-5;
        double length = units::um_per_mm;
        double c = units::speed_of_light;
        double n_total = 3.0e6;
        double eta = 1.0;
        MediumKind kind = MediumKind::HeteronuclearDimer;
        double gamma_a = 0.0;
        double gamma_b = 0.0;
        double gamma_e = 0.0;
        double gamma_g = 0.0;
        double Delta = 0.0;
        double delta = 0.0;
        bool operator==(const Medium&) const = default;
    } medium;

    struct Schedule {
        double omega0 = 10.0 * pi;
        double t_down = 15.0;
        double t_up = 125.0;
        double rate = 0.15;
        std::vector<double> times;   // non-empty selects a tabulated schedule
        std::vector<double> values;
        bool operator==(const Schedule&) const = default;
    } schedule;

    struct Grid {
        double z_min = 0.0;
        double z_max = units::um_per_mm;
        std::size_t n_z = 1024;
        double dt = 0.0;  // 0: dz / c
        double t_end = 145.0;
        bool operator==(const Grid&) const = default;
    } grid;

    struct Pulse {
        double center = 250.0;
        double width = 50.0;
        double density_ratio = 1.0e-3;  // peak |E|^2/L over min(N_a, N_b)
        bool operator==(const Pulse&) const = default;
    } pulse;

    struct Axis {
        double t_begin = 0.0;
        double t_end = 140.0;
        std::size_t count = 281;
        bool operator==(const Axis&) const = default;
    } axis;

    struct Sweep {
        std::vector<double> etas{1.0 / 15.0, 0.25, 0.5, 1.0, 2.0, 4.0, 15.0};
        std::vector<std::string> kinds{"atomic", "homonuclear", "heteronuclear", "trimer"};
        double n_min = 1.0e5;
        double n_max = 1.0e7;
        std::size_t fit_points = 21;
        double t_ref = 0.0;
        bool operator==(const Sweep&) const = default;
    } sweep;

    struct Storage {
        double threshold = 0.1;
        double pulse_duration = 0.0;  // 0: width / v_g at the plateau
        double leakage_warning = 1.0e-3;
        int reaction_substeps = 4;
        std::string advection = "upwind";
        bool operator==(const Storage&) const = default;
    } storage;

    struct Gpe {
        double m_a = 0.5;
        double m_b = 0.5;
        double u_gg = 1.0;
        double u_ab = 0.0;
        double v_g = 0.0;  // uniform external potential
        double n_a = 0.0;
        double n_b = 0.0;
        double background_amp = 1.0;
        std::string nonlinearity = "self-consistent";
        double background_decay = 0.0;
        double z_min = -64.0;
        double period = 128.0;
        std::size_t n_z = 2048;
        double dt = 0.005;
        double t_end = 20.0;
        bool operator==(const Gpe&) const = default;
    } gpe;

    struct Soliton {
        double q = 0.8;
        double z0 = 0.0;
        int direction = 1;
        double alpha = 0.0;  // 0: self-consistent
        std::string seed = "exact";
        double late_fraction = 0.5;
        bool operator==(const Soliton&) const = default;
    } soliton;

    /// Upper bound on time steps times grid points before a run is refused.
    double max_cell_updates = 2.0e9;

    bool operator==(const RunConfig&) const = default;

    // Derived objects. These assume a validated config.
    MediumParams medium_params() const;
    ControlSchedule control_schedule() const;
    Grid1D optical_grid() const;
    GaussianPulse gaussian_pulse() const;
    TimeAxis time_axis() const;
    ExponentFit exponent_fit() const;
    std::vector<MediumKind> medium_kinds() const;
    StorageOptions storage_options(bool force) const;
    GpeParams gpe_params() const;
    Grid1D gpe_grid() const;
    SolitonSpec soliton_spec() const;
    SplitOptions split_options() const;

    /// Checks every invariant; throws ConfigError naming the key.
    void validate() const;
};

/// Parses a YAML document; an empty document gives all defaults.
/// Throws ConfigError(key, reason) for unknown keys, type mismatches and
/// invariant violations.
RunConfig parse_config(std::string_view text);

/// Writes every key, one per line, in a form parse_config reads back identically.
std::string serialize_config(const RunConfig& config);

/// Applies a `key=value` override, the value read as a YAML scalar or list.
void apply_override(RunConfig& config, std::string_view assignment);

/// Full key names with their documentation, in serialization order.
std::vector<std::pair<std::string, std::string>> config_keys();

}  // namespace slowlight::cli
