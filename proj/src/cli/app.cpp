#include "slowlight/cli/app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "slowlight/errors.hpp"

namespace fs = std::filesystem;

namespace slowlight::cli {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

class CsvFile {
public:
    CsvFile(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary)
    {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        row(header);
    }

    void row(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

class Summary {
public:
    void add(const std::string& key, double value) { lines_.push_back(key + ": " + num(value)); }
    void add(const std::string& key, const std::string& value) { lines_.push_back(key + ": " + value); }
    void warnings(const std::vector<std::string>& ws)
    {
        for (const auto& w : ws) add("warning", w);
    }
    void write(const fs::path& dir) const
    {
        std::ofstream out(dir / "summary.txt", std::ios::binary);
        for (const auto& l : lines_) out << l << '\n';
    }

private:
    std::vector<std::string> lines_;
};

void write_curve(const fs::path& path, const VelocityCurve& c)
{
    CsvFile csv(path, {"t_us", "omega_rad_per_us", "vg_over_c"});
    for (std::size_t i = 0; i < c.t.size(); ++i) csv.row({num(c.t[i]), num(c.omega[i]), num(c.vg_over_c[i])});
}

void write_feasibility(const fs::path& dir, const FeasibilityReport& f, Summary& s)
{
    CsvFile csv(dir / "feasibility.csv", {"condition", "margin", "threshold", "ok"});
    csv.row({"storage_window", num(f.storage_margin), num(f.threshold), f.storage_window_ok ? "1" : "0"});
    csv.row({"spectral_window", num(f.spectral_margin), num(f.threshold), f.spectral_window_ok ? "1" : "0"});
    csv.row({"compression", num(f.compression_margin), num(f.threshold), f.compression_ok ? "1" : "0"});
    s.add("optical_depth", f.optical_depth);
    s.add("storage_margin", f.storage_margin);
    s.add("spectral_margin", f.spectral_margin);
    s.add("compression_margin", f.compression_margin);
    s.add("plateau_velocity_um_per_us", f.plateau_velocity);
    s.add("feasible", f.all_ok() ? "yes" : "no");
}

void require_budget(double steps, std::size_t points, const RunConfig& cfg)
{
    const double updates = steps * static_cast<double>(points);
    if (updates > cfg.max_cell_updates)
        throw ConfigError("limits.max_cell_updates",
                          fmt::format("run needs {:.3g} cell updates, limit is {:.3g}; coarsen the grid, shorten "
                                      "the horizon or raise the limit",
                                      updates, cfg.max_cell_updates));
}

std::size_t default_stride(std::size_t configured, std::size_t steps, std::size_t frames)
{
    if (configured > 0) return configured;
    return std::max<std::size_t>(1, steps / frames);
}

// --- optical experiments ----------------------------------------------------

void groupvel(const RunConfig& cfg, const fs::path& dir)
{
    const MediumParams p = cfg.medium_params();
    p.validate();
    const ControlSchedule sched = cfg.control_schedule();
    write_curve(dir / "curve.csv", velocity_curve(p, p.N_a * p.N_b, sched, cfg.time_axis()));

    Summary s;
    s.add("N_a", p.N_a);
    s.add("N_b", p.N_b);
    const auto [g1, g2] = transversal_rates(p);
    s.add("gamma_1_rad_per_us", g1);
    s.add("gamma_2_rad_per_us", g2);
    if (g1 > 0.0) s.add("gamma_1_inverse_ms", 1.0 / g1 / units::us_per_ms);
    try {
        const double floor = velocity_floor(p);
        s.add("velocity_floor_um_per_us", floor);
        s.add("velocity_floor_km_per_s", units::um_per_us_to_km_per_s(floor));
        s.add("velocity_floor_over_c", floor / p.c);
    } catch (const std::domain_error&) {
        s.add("velocity_floor_km_per_s", "none (no decay: light stops at Omega = 0)");
    }
    const double omega_plateau = sched.plateau();
    s.add("mixing_angle_plateau_rad", mixing_angle(p, omega_plateau));
    s.add("vg_plateau_over_c", group_velocity_with_decay(p, omega_plateau) / p.c);
    s.write(dir);
}

void propagate(const RunConfig& cfg, const fs::path& dir)
{
    const MediumParams p = cfg.medium_params();
    const ControlSchedule sched = cfg.control_schedule();
    const Grid1D grid = cfg.optical_grid();
    require_budget(static_cast<double>(grid.steps()), grid.size(), cfg);

    const SignalEnvelope input = SignalEnvelope::sample(grid, cfg.gaussian_pulse());
    IntegratorOptions opts = cfg.storage_options(false).integrator;
    opts.snapshot_stride = default_stride(cfg.snapshot_stride, grid.steps(), 20);
    const MeanFieldState s0 = MeanFieldState::dark_state_polariton(grid, p, sched, input);
    const auto frames = integrate_mean_field(s0, sched, p, grid, opts);

    fs::create_directory(dir / "snapshots");
    CsvFile manifest(dir / "snapshots.csv", {"snapshot_id", "t_us", "file"});
    for (std::size_t k = 0; k < frames.size(); ++k) {
        const auto& f = frames[k];
        const std::string name = fmt::format("snapshots/snap_{:05d}.csv", k);
        manifest.row({std::to_string(k), num(f.t), name});
        CsvFile csv(dir / name, {"z_um", "re_E", "im_E", "re_phi_a", "im_phi_a", "re_phi_b", "im_phi_b", "re_phi_e",
                                 "im_phi_e", "re_phi_g", "im_phi_g"});
        for (std::size_t i = 0; i < f.size(); ++i)
            csv.row({num(grid.z(i)), num(f.E[i].real()), num(f.E[i].imag()), num(f.phi_a[i].real()),
                     num(f.phi_a[i].imag()), num(f.phi_b[i].real()), num(f.phi_b[i].imag()), num(f.phi_e[i].real()),
                     num(f.phi_e[i].imag()), num(f.phi_g[i].real()), num(f.phi_g[i].imag())});
    }

    // Closed-form comparison at each snapshot where the pulse is still visible.
    CsvFile cmp(dir / "wea_comparison.csv",
                {"t_us", "measured_shift_um", "predicted_shift_um", "measured_peak_ratio", "predicted_peak_ratio"});
    const double c0 = input.centroid();
    const double peak0 = input.peak();
    for (const auto& f : frames) {
        const SignalEnvelope e = f.signal(grid);
        if (e.norm_sq() == 0.0) continue;
        cmp.row({num(f.t), num(e.centroid() - c0), num(translation_distance(sched, p, 0.0, f.t)),
                 num(e.peak() / peak0), num(amplitude_factor(sched, p, f.t))});
    }

    const Charges q0 = conserved_charges(frames.front(), p, grid);
    const Charges q1 = conserved_charges(frames.back(), p, grid);
    Summary s;
    s.add("t_final_us", frames.back().t);
    s.add("photon_density_ratio", input.photon_density_ratio(p));
    s.add("q1_relative_drift", std::abs(q1.q1 - q0.q1) / q0.q1);
    s.add("q2_relative_drift", std::abs(q1.q2 - q0.q2) / q0.q2);
    s.add("q3_relative_drift", std::abs(q1.q3 + frames.back().photon_outflow - q0.q3) / q0.q3);
    s.add("photon_outflow", frames.back().photon_outflow);
    s.write(dir);
}

void store(const RunConfig& cfg, const fs::path& dir, bool force)
{
    const Grid1D grid = cfg.optical_grid();
    require_budget(static_cast<double>(grid.steps()), grid.size(), cfg);
    const auto r = run_storage_retrieval(cfg.medium_params(), cfg.control_schedule(), cfg.gaussian_pulse(), grid,
                                         cfg.storage_options(force));
    Summary s;
    if (r.feasibility) write_feasibility(dir, *r.feasibility, s);
    if (r.trivial_input) {
        s.add("trivial_input", "yes");
        s.warnings(r.warnings);
        s.write(dir);
        return;
    }
    write_curve(dir / "curve.csv", r.curve);
    const auto& prof = *r.profiles;
    CsvFile csv(dir / "storage.csv",
                {"z_um", "re_E_in", "im_E_in", "re_phig_stored", "im_phig_stored", "re_E_out", "im_E_out"});
    for (std::size_t i = 0; i < prof.z.size(); ++i)
        csv.row({num(prof.z[i]), num(prof.E_in[i].real()), num(prof.E_in[i].imag()), num(prof.phi_g_stored[i].real()),
                 num(prof.phi_g_stored[i].imag()), num(prof.E_out[i].real()), num(prof.E_out[i].imag())});
    for (const auto& [k, v] : r.results) s.add(k, v);
    s.warnings(r.warnings);
    s.write(dir);
}

void sweep_outputs(const fs::path& dir, const std::vector<ExperimentReport>& reports, Summary& s)
{
    fs::create_directory(dir / "curves");
    CsvFile manifest(dir / "manifest.csv", {"curve_id", "eta_or_kind", "file"});
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const std::string name = fmt::format("curves/curve_{:02d}.csv", k);
        manifest.row({std::to_string(k), reports[k].label, name});
        write_curve(dir / name, reports[k].curve);
        for (const auto& [key, v] : reports[k].results) s.add(reports[k].label + "." + key, v);
        s.warnings(reports[k].warnings);
    }
}

void imbalance(const RunConfig& cfg, const fs::path& dir)
{
    const auto reports = imbalance_sweep(cfg.medium.n_total, cfg.sweep.etas, cfg.control_schedule(),
                                         cfg.medium_params(), cfg.time_axis());
    Summary s;
    sweep_outputs(dir, reports, s);
    s.write(dir);
}

void mediums(const RunConfig& cfg, const fs::path& dir)
{
    const auto reports = medium_comparison(cfg.medium.n_total, cfg.medium_kinds(), cfg.control_schedule(),
                                           cfg.medium_params(), cfg.time_axis(), cfg.exponent_fit());
    Summary s;
    sweep_outputs(dir, reports, s);
    s.write(dir);
}

void feasibility(const RunConfig& cfg, const fs::path& dir)
{
    const MediumParams p = cfg.medium_params();
    const ControlSchedule sched = cfg.control_schedule();
    double t_s = cfg.storage.pulse_duration;
    if (t_s == 0.0) {
        const double vg = group_velocity_for_density(p, p.N_a * p.N_b, sched.plateau());
        t_s = vg > 0.0 ? cfg.pulse.width / vg : std::numeric_limits<double>::infinity();
    }
    const auto f = feasibility_check(p, t_s, sched, sched.storage_duration(), cfg.storage.threshold);
    Summary s;
    const auto [g1, g2] = transversal_rates(p);
    if (g1 > 0.0) s.add("gamma_1_inverse_ms", 1.0 / g1 / units::us_per_ms);
    s.add("pulse_duration_us", t_s);
    s.add("storage_duration_us", sched.storage_duration());
    write_feasibility(dir, f, s);
    s.write(dir);
}

// --- matter-wave experiments ------------------------------------------------

void write_frames(const fs::path& dir, const std::vector<WaveFunction>& frames, const Grid1D& grid)
{
    fs::create_directory(dir / "frames");
    CsvFile manifest(dir / "frames.csv", {"frame_id", "t_us", "file"});
    for (std::size_t k = 0; k < frames.size(); ++k) {
        const std::string name = fmt::format("frames/frame_{:05d}.csv", k);
        manifest.row({std::to_string(k), num(frames[k].t), name});
        CsvFile csv(dir / name, {"z_um", "density", "phase"});
        for (std::size_t i = 0; i < grid.size(); ++i)
            csv.row({num(grid.z(i)), num(std::norm(frames[k].psi[i])), num(std::arg(frames[k].psi[i]))});
    }
}

void write_trajectories(const fs::path& dir, const std::vector<Trajectory>& tracks)
{
    CsvFile csv(dir / "trajectories.csv", {"t_us", "dip_index", "z_um", "speed_um_per_us"});
    for (std::size_t k = 0; k < tracks.size(); ++k) {
        const auto& tr = tracks[k];
        const auto v = tr.speeds();
        for (std::size_t i = 0; i < tr.t.size(); ++i) {
            // speed by one-sided difference at the ends, centred inside
            double speed = 0.0;
            if (!v.empty()) speed = i == 0 ? v.front() : i == v.size() ? v.back() : 0.5 * (v[i - 1] + v[i]);
            csv.row({num(tr.t[i]), std::to_string(k), num(tr.z[i]), num(speed)});
        }
    }
}

std::size_t gpe_steps(const Grid1D& grid) { return grid.steps(); }

void gpe_soliton(const RunConfig& cfg, const fs::path& dir)
{
    const Grid1D grid = cfg.gpe_grid();
    require_budget(static_cast<double>(gpe_steps(grid)), grid.size(), cfg);
    const SolitonSpec spec = cfg.soliton_spec();
    const auto r = propagate_soliton(spec, cfg.gpe_params(), grid, cfg.gpe.t_end,
                                     default_stride(cfg.snapshot_stride, gpe_steps(grid), 100));
    write_frames(dir, r.evolution.frames, grid);
    write_trajectories(dir, r.trajectories);
    Summary s;
    s.add("alpha_um2", spec.alpha);
    s.add("width_um", spec.width());
    s.add("sound_speed_um_per_us", sound_speed(cfg.gpe_params()));
    s.add("expected_speed_um_per_us", r.expected_speed);
    s.add("measured_speed_um_per_us", r.measured_speed);
    s.add("expected_min_density", r.expected_min_density);
    s.add("measured_min_density", r.measured_min_density);
    s.add("center_drift_um", r.center_drift);
    s.add("norm_drift_per_us", r.norm_drift_per_time);
    s.add("energy_relative_drift", r.energy_drift);
    s.add("shape_error", r.shape_error);
    s.warnings(r.evolution.warnings);
    s.write(dir);
}

void gpe_split(const RunConfig& cfg, const fs::path& dir)
{
    const Grid1D grid = cfg.gpe_grid();
    require_budget(static_cast<double>(gpe_steps(grid)), grid.size(), cfg);
    const auto r = soliton_split_experiment(cfg.soliton.q, cfg.gpe_params(), grid, cfg.gpe.t_end, cfg.split_options());
    Summary s;
    s.add("q", cfg.soliton.q);
    if (r.degenerate) {
        s.add("degenerate", "yes");
        s.add("diagnostics", r.diagnostics);
        s.write(dir);
        return;
    }
    write_frames(dir, r.evolution.frames, grid);
    write_trajectories(dir, r.trajectories);
    s.add("expected_speed_um_per_us", r.expected_speed);
    s.add("left_speed_um_per_us", r.left_speed);
    s.add("right_speed_um_per_us", r.right_speed);
    s.add("persistent_minima", static_cast<double>(r.persistent.size()));
    s.add("separation_monotone", r.separation_monotone ? "yes" : "no");
    s.add("split", r.success ? "yes" : "no");
    if (!r.diagnostics.empty()) s.add("diagnostics", r.diagnostics);
    s.warnings(r.evolution.warnings);
    s.write(dir);
}

}  // namespace

RunConfig load_config_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("--config", "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void execute(const RunConfig& config, const fs::path& out, bool force, std::ostream& log)
{
    config.validate();
    fs::path target = out.empty() ? fs::path(config.output_dir) : out;
    if (!target.has_filename()) target = target.parent_path();
    const fs::path staging = target.parent_path() / (target.filename().string() + ".partial");
    fs::remove_all(staging);
    fs::create_directories(staging);
    try {
        {
            std::ofstream cfg(staging / "config.yaml", std::ios::binary);
            cfg << serialize_config(config);
        }
        switch (config.experiment) {
        case Experiment::GroupVel: groupvel(config, staging); break;
        case Experiment::Propagate: propagate(config, staging); break;
        case Experiment::Store: store(config, staging, force); break;
        case Experiment::Imbalance: imbalance(config, staging); break;
        case Experiment::Mediums: mediums(config, staging); break;
        case Experiment::GpeSoliton: gpe_soliton(config, staging); break;
        case Experiment::GpeSplit: gpe_split(config, staging); break;
        case Experiment::Feasibility: feasibility(config, staging); break;
        }
    } catch (...) {
        std::error_code ec;
        fs::remove_all(staging, ec);
        throw;
    }
    fs::remove_all(target);
    fs::rename(staging, target);
    fmt::print(log, "{}: wrote {}\n", to_string(config.experiment), target.string());
}

int run(const RunConfig& config, const fs::path& out, bool force, std::ostream& log)
{
    try {
        execute(config, out, force, log);
        return Success;
    } catch (const ConfigError& e) {
        fmt::print(log, "config error: {}\n", e.what());
        return BadConfig;
    } catch (const NumericalError& e) {
        fmt::print(log, "numerical failure: {}\n", e.what());
        return NumericalFailure;
    } catch (const FeasibilityRefused& e) {
        fmt::print(log, "refused: {}\n", e.what());
        return FeasibilityGate;
    } catch (const std::invalid_argument& e) {
        fmt::print(log, "invalid input: {}\n", e.what());
        return BadConfig;
    } catch (const std::domain_error& e) {
        fmt::print(log, "outside the model's domain: {}\n", e.what());
        return BadConfig;
    } catch (const std::exception& e) {
        fmt::print(log, "error: {}\n", e.what());
        return Failure;
    }
}

}  // namespace slowlight::cli
