#include "slowlight/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "slowlight/errors.hpp"

namespace slowlight::cli {

namespace {

constexpr std::string_view experiment_names[] = {"groupvel", "propagate",   "store",    "imbalance",
                                                  "mediums",  "gpe-soliton", "gpe-split", "feasibility"};

struct Field {
    std::string key;
    std::string doc;
    std::function<void(RunConfig&, const YAML::Node&, const std::string&)> read;
    std::function<std::string(const RunConfig&)> write;
};

double read_number(const YAML::Node& node, const std::string& key)
{
    if (!node.IsScalar()) throw ConfigError(key, "expected a number");
    try {
        return node.as<double>();
    } catch (const YAML::Exception&) {
        throw ConfigError(key, fmt::format("expected a number, got '{}'", node.Scalar()));
    }
}

long long read_integer(const YAML::Node& node, const std::string& key)
{
    const double v = read_number(node, key);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) throw ConfigError(key, "expected an integer");
    return static_cast<long long>(v);
}

std::string read_text(const YAML::Node& node, const std::string& key)
{
    if (!node.IsScalar()) throw ConfigError(key, "expected a string");
    return node.Scalar();
}

std::string format_number(double v) { return fmt::format("{}", v); }

std::string quote(const std::string& s)
{
    YAML::Emitter out;
    out << s;
    return out.c_str();
}

using RealRef = double& (*)(RunConfig&);
using CountRef = std::size_t& (*)(RunConfig&);
using IntRef = int& (*)(RunConfig&);
using TextRef = std::string& (*)(RunConfig&);
using RealListRef = std::vector<double>& (*)(RunConfig&);
using TextListRef = std::vector<std::string>& (*)(RunConfig&);

template <class Ref>
auto& get(Ref ref, const RunConfig& c)
{
    return ref(const_cast<RunConfig&>(c));
}

Field real(std::string key, std::string doc, RealRef ref)
{
    return {std::move(key), std::move(doc),
            [ref](RunConfig& c, const YAML::Node& n, const std::string& k) { ref(c) = read_number(n, k); },
            [ref](const RunConfig& c) { return format_number(get(ref, c)); }};
}

Field count(std::string key, std::string doc, CountRef ref)
{
    return {std::move(key), std::move(doc),
            [ref](RunConfig& c, const YAML::Node& n, const std::string& k) {
                const long long v = read_integer(n, k);
                if (v < 0) throw ConfigError(k, "must be >= 0");
                ref(c) = static_cast<std::size_t>(v);
            },
            [ref](const RunConfig& c) { return std::to_string(get(ref, c)); }};
}

Field integer(std::string key, std::string doc, IntRef ref)
{
    return {std::move(key), std::move(doc),
            [ref](RunConfig& c, const YAML::Node& n, const std::string& k) {
                const long long v = read_integer(n, k);
                if (v < -1000000 || v > 1000000) throw ConfigError(k, "integer out of range");
                ref(c) = static_cast<int>(v);
            },
            [ref](const RunConfig& c) { return std::to_string(get(ref, c)); }};
}

Field text(std::string key, std::string doc, TextRef ref)
{
    return {std::move(key), std::move(doc),
            [ref](RunConfig& c, const YAML::Node& n, const std::string& k) { ref(c) = read_text(n, k); },
            [ref](const RunConfig& c) { return quote(get(ref, c)); }};
}

Field real_list(std::string key, std::string doc, RealListRef ref)
{
    return {std::move(key), std::move(doc),
            [ref](RunConfig& c, const YAML::Node& n, const std::string& k) {
                if (!n.IsSequence()) throw ConfigError(k, "expected a list of numbers");
                std::vector<double> v;
                for (const auto& item : n) v.push_back(read_number(item, k));
                ref(c) = std::move(v);
            },
            [ref](const RunConfig& c) {
                std::vector<std::string> parts;
                for (double v : get(ref, c)) parts.push_back(format_number(v));
                return fmt::format("[{}]", fmt::join(parts, ", "));
            }};
}

Field text_list(std::string key, std::string doc, TextListRef ref)
{
    return {std::move(key), std::move(doc),
            [ref](RunConfig& c, const YAML::Node& n, const std::string& k) {
                if (!n.IsSequence()) throw ConfigError(k, "expected a list of strings");
                std::vector<std::string> v;
                for (const auto& item : n) v.push_back(read_text(item, k));
                ref(c) = std::move(v);
            },
            [ref](const RunConfig& c) {
                std::vector<std::string> parts;
                for (const auto& s : get(ref, c)) parts.push_back(quote(s));
                return fmt::format("[{}]", fmt::join(parts, ", "));
            }};
}

const std::vector<Field>& schema()
{
    static const std::vector<Field> fields = [] {
        std::vector<Field> f;
        f.push_back({"experiment",
                     "groupvel | propagate | store | imbalance | mediums | gpe-soliton | gpe-split | feasibility",
                     [](RunConfig& c, const YAML::Node& n, const std::string& k) {
                         try {
                             c.experiment = experiment_from_string(read_text(n, k));
                         } catch (const std::invalid_argument& e) {
                             throw ConfigError(k, e.what());
                         }
                     },
                     [](const RunConfig& c) { return std::string(to_string(c.experiment)); }});
        f.push_back(text("output.dir", "output directory (replaced atomically)",
                         [](RunConfig& c) -> std::string& { return c.output_dir; }));
        f.push_back(count("output.snapshot_stride", "steps between dumped frames; 0 picks a default",
                          [](RunConfig& c) -> std::size_t& { return c.snapshot_stride; }));

        f.push_back(real("medium.g_tilde_rad_per_us", "collective coupling g*sqrt(L)",
                         [](RunConfig& c) -> double& { return c.medium.g_tilde; }));
        f.push_back(real("medium.length_um", "quantization length L",
                         [](RunConfig& c) -> double& { return c.medium.length; }));
        f.push_back(real("medium.c_um_per_us", "vacuum signal speed", [](RunConfig& c) -> double& { return c.medium.c; }));
        f.push_back(real("medium.n_total", "total atom number N_a + N_b",
                         [](RunConfig& c) -> double& { return c.medium.n_total; }));
        f.push_back(real("medium.eta", "population imbalance N_b / N_a", [](RunConfig& c) -> double& { return c.medium.eta; }));
        f.push_back({"medium.kind", "atomic | homonuclear | heteronuclear | trimer",
                     [](RunConfig& c, const YAML::Node& n, const std::string& k) {
                         try {
                             c.medium.kind = medium_kind_from_string(read_text(n, k));
                         } catch (const std::invalid_argument& e) {
                             throw ConfigError(k, e.what());
                         }
                     },
                     [](const RunConfig& c) { return std::string(to_string(c.medium.kind)); }});
        f.push_back(real("medium.gamma_a_rad_per_us", "atom a loss rate", [](RunConfig& c) -> double& { return c.medium.gamma_a; }));
        f.push_back(real("medium.gamma_b_rad_per_us", "atom b loss rate", [](RunConfig& c) -> double& { return c.medium.gamma_b; }));
        f.push_back(real("medium.gamma_e_rad_per_us", "excited molecule decay rate",
                         [](RunConfig& c) -> double& { return c.medium.gamma_e; }));
        f.push_back(real("medium.gamma_g_rad_per_us", "ground molecule decay rate",
                         [](RunConfig& c) -> double& { return c.medium.gamma_g; }));
        f.push_back(real("medium.detuning_rad_per_us", "one-photon detuning Delta",
                         [](RunConfig& c) -> double& { return c.medium.Delta; }));
        f.push_back(real("medium.two_photon_detuning_rad_per_us", "two-photon detuning delta",
                         [](RunConfig& c) -> double& { return c.medium.delta; }));

        f.push_back(real("schedule.omega0_rad_per_us", "coupling plateau of the tanh ramp",
                         [](RunConfig& c) -> double& { return c.schedule.omega0; }));
        f.push_back(real("schedule.t_down_us", "switch-off time", [](RunConfig& c) -> double& { return c.schedule.t_down; }));
        f.push_back(real("schedule.t_up_us", "switch-on time", [](RunConfig& c) -> double& { return c.schedule.t_up; }));
        f.push_back(real("schedule.rate_per_us", "ramp steepness", [](RunConfig& c) -> double& { return c.schedule.rate; }));
        f.push_back(real_list("schedule.times_us", "tabulated schedule times; empty uses the tanh ramp",
                              [](RunConfig& c) -> std::vector<double>& { return c.schedule.times; }));
        f.push_back(real_list("schedule.values_rad_per_us", "tabulated Omega values",
                              [](RunConfig& c) -> std::vector<double>& { return c.schedule.values; }));

        f.push_back(real("grid.z_min_um", "first grid node", [](RunConfig& c) -> double& { return c.grid.z_min; }));
        f.push_back(real("grid.z_max_um", "last grid node", [](RunConfig& c) -> double& { return c.grid.z_max; }));
        f.push_back(count("grid.n_z", "grid points (>= 16)", [](RunConfig& c) -> std::size_t& { return c.grid.n_z; }));
        f.push_back(real("grid.dt_us", "time step; 0 uses dz / c", [](RunConfig& c) -> double& { return c.grid.dt; }));
        f.push_back(real("grid.t_end_us", "integration horizon", [](RunConfig& c) -> double& { return c.grid.t_end; }));

        f.push_back(real("pulse.center_um", "signal pulse centre", [](RunConfig& c) -> double& { return c.pulse.center; }));
        f.push_back(real("pulse.width_um", "rms width of |E|^2", [](RunConfig& c) -> double& { return c.pulse.width; }));
        f.push_back(real("pulse.density_ratio", "peak photon density over min(N_a, N_b)",
                         [](RunConfig& c) -> double& { return c.pulse.density_ratio; }));

        f.push_back(real("axis.t_begin_us", "first sample of velocity curves",
                         [](RunConfig& c) -> double& { return c.axis.t_begin; }));
        f.push_back(real("axis.t_end_us", "last sample of velocity curves", [](RunConfig& c) -> double& { return c.axis.t_end; }));
        f.push_back(count("axis.count", "samples per velocity curve", [](RunConfig& c) -> std::size_t& { return c.axis.count; }));

        f.push_back(real_list("sweep.etas", "imbalances for the imbalance sweep",
                              [](RunConfig& c) -> std::vector<double>& { return c.sweep.etas; }));
        f.push_back(text_list("sweep.kinds", "medium kinds for the medium comparison",
                              [](RunConfig& c) -> std::vector<std::string>& { return c.sweep.kinds; }));
        f.push_back(real("sweep.n_min", "smallest N of the exponent fit", [](RunConfig& c) -> double& { return c.sweep.n_min; }));
        f.push_back(real("sweep.n_max", "largest N of the exponent fit", [](RunConfig& c) -> double& { return c.sweep.n_max; }));
        f.push_back(count("sweep.fit_points", "log-spaced N samples of the fit",
                          [](RunConfig& c) -> std::size_t& { return c.sweep.fit_points; }));
        f.push_back(real("sweep.t_ref_us", "time at which Omega is taken for the fit",
                         [](RunConfig& c) -> double& { return c.sweep.t_ref; }));

        f.push_back(real("storage.threshold", "feasibility margin threshold",
                         [](RunConfig& c) -> double& { return c.storage.threshold; }));
        f.push_back(real("storage.pulse_duration_us", "temporal pulse length; 0 uses width / v_g",
                         [](RunConfig& c) -> double& { return c.storage.pulse_duration; }));
        f.push_back(real("storage.leakage_warning", "leaked signal fraction that triggers a warning",
                         [](RunConfig& c) -> double& { return c.storage.leakage_warning; }));
        f.push_back(integer("storage.reaction_substeps", "RK4 substeps per half step",
                            [](RunConfig& c) -> int& { return c.storage.reaction_substeps; }));
        f.push_back(text("storage.advection", "upwind | muscl", [](RunConfig& c) -> std::string& { return c.storage.advection; }));

        f.push_back(real("gpe.m_a_us_per_um2", "atom a mass (hbar = 1)", [](RunConfig& c) -> double& { return c.gpe.m_a; }));
        f.push_back(real("gpe.m_b_us_per_um2", "atom b mass (hbar = 1)", [](RunConfig& c) -> double& { return c.gpe.m_b; }));
        f.push_back(real("gpe.u_gg_rad_um_per_us", "molecule-molecule interaction",
                         [](RunConfig& c) -> double& { return c.gpe.u_gg; }));
        f.push_back(real("gpe.u_ab_rad_um_per_us", "atom-molecule interaction", [](RunConfig& c) -> double& { return c.gpe.u_ab; }));
        f.push_back(real("gpe.v_g_rad_per_us", "uniform external potential", [](RunConfig& c) -> double& { return c.gpe.v_g; }));
        f.push_back(real("gpe.n_a", "background atom number N_a", [](RunConfig& c) -> double& { return c.gpe.n_a; }));
        f.push_back(real("gpe.n_b", "background atom number N_b", [](RunConfig& c) -> double& { return c.gpe.n_b; }));
        f.push_back(real("gpe.background_amp_per_sqrt_um", "background amplitude |Phi0|",
                         [](RunConfig& c) -> double& { return c.gpe.background_amp; }));
        f.push_back(text("gpe.nonlinearity", "self-consistent | frozen",
                         [](RunConfig& c) -> std::string& { return c.gpe.nonlinearity; }));
        f.push_back(real("gpe.background_decay_per_us", "background amplitude decay rate",
                         [](RunConfig& c) -> double& { return c.gpe.background_decay; }));
        f.push_back(real("gpe.z_min_um", "first node of the periodic grid", [](RunConfig& c) -> double& { return c.gpe.z_min; }));
        f.push_back(real("gpe.period_um", "period of the grid", [](RunConfig& c) -> double& { return c.gpe.period; }));
        f.push_back(count("gpe.n_z", "grid points per period", [](RunConfig& c) -> std::size_t& { return c.gpe.n_z; }));
        f.push_back(real("gpe.dt_us", "split-step time step", [](RunConfig& c) -> double& { return c.gpe.dt; }));
        f.push_back(real("gpe.t_end_us", "evolution horizon", [](RunConfig& c) -> double& { return c.gpe.t_end; }));

        f.push_back(real("soliton.q", "grayness in (0, 1]", [](RunConfig& c) -> double& { return c.soliton.q; }));
        f.push_back(real("soliton.z0_um", "soliton centre", [](RunConfig& c) -> double& { return c.soliton.z0; }));
        f.push_back(integer("soliton.direction", "+1 or -1", [](RunConfig& c) -> int& { return c.soliton.direction; }));
        f.push_back(real("soliton.alpha_um2", "width parameter; 0 uses the self-consistent value",
                         [](RunConfig& c) -> double& { return c.soliton.alpha; }));
        f.push_back(text("soliton.seed", "split seed: exact | product", [](RunConfig& c) -> std::string& { return c.soliton.seed; }));
        f.push_back(real("soliton.late_fraction", "trailing fraction of a track used for its speed",
                         [](RunConfig& c) -> double& { return c.soliton.late_fraction; }));

        f.push_back(real("limits.max_cell_updates", "refuse runs with more time steps x grid points",
                         [](RunConfig& c) -> double& { return c.max_cell_updates; }));
        return f;
    }();
    return fields;
}

const Field& resolve(const std::string& key)
{
    const auto& fields = schema();
    for (const auto& f : fields)
        if (f.key == key) return f;
    if (key.find('.') == std::string::npos) {
        const Field* match = nullptr;
        for (const auto& f : fields) {
            const auto dot = f.key.rfind('.');
            if (dot == std::string::npos) continue;
            const std::string leaf = f.key.substr(dot + 1);
            // a short name matches the leaf with or without its unit suffix
            if (leaf == key || leaf.rfind(key + "_", 0) == 0) {
                if (match != nullptr) throw ConfigError(key, "ambiguous short key");
                match = &f;
            }
        }
        if (match != nullptr) return *match;
    }
    throw ConfigError(key, "unknown key");
}

void check(bool ok, const char* key, const std::string& reason)
{
    if (!ok) throw ConfigError(key, reason);
}

}  // namespace

std::string_view to_string(Experiment e) { return experiment_names[static_cast<int>(e)]; }

Experiment experiment_from_string(std::string_view name)
{
    for (std::size_t i = 0; i < std::size(experiment_names); ++i)
        if (experiment_names[i] == name) return static_cast<Experiment>(i);
    throw std::invalid_argument(fmt::format("unknown experiment '{}'", name));
}

MediumParams RunConfig::medium_params() const
{
    MediumParams p;
    p.g_tilde = medium.g_tilde;
    p.L = medium.length;
    p.c = medium.c;
    std::tie(p.N_a, p.N_b) = split_populations(medium.n_total, medium.eta);
    p.gamma_a = medium.gamma_a;
    p.gamma_b = medium.gamma_b;
    p.gamma_e = medium.gamma_e;
    p.gamma_g = medium.gamma_g;
    p.Delta = medium.Delta;
    p.delta = medium.delta;
    return p;
}

ControlSchedule RunConfig::control_schedule() const
{
    if (!schedule.times.empty()) return ControlSchedule(Tabulated{schedule.times, schedule.values});
    return ControlSchedule(TanhRamp{schedule.omega0, schedule.t_down, schedule.t_up, schedule.rate});
}

Grid1D RunConfig::optical_grid() const
{
    if (grid.dt == 0.0) return Grid1D::unit_courant(grid.z_min, grid.z_max, grid.n_z, medium.c, grid.t_end);
    return Grid1D(grid.z_min, grid.z_max, grid.n_z, grid.dt, grid.t_end);
}

GaussianPulse RunConfig::gaussian_pulse() const
{
    const auto p = medium_params();
    return GaussianPulse{pulse.center, pulse.width, std::sqrt(pulse.density_ratio * p.L * std::min(p.N_a, p.N_b))};
}

TimeAxis RunConfig::time_axis() const { return TimeAxis{axis.t_begin, axis.t_end, axis.count}; }

ExponentFit RunConfig::exponent_fit() const { return ExponentFit{sweep.n_min, sweep.n_max, sweep.fit_points, sweep.t_ref}; }

std::vector<MediumKind> RunConfig::medium_kinds() const
{
    std::vector<MediumKind> kinds;
    for (const auto& k : sweep.kinds) kinds.push_back(medium_kind_from_string(k));
    return kinds;
}

StorageOptions RunConfig::storage_options(bool force) const
{
    StorageOptions o;
    o.force = force;
    o.feasibility_threshold = storage.threshold;
    o.t_s = storage.pulse_duration;
    o.leakage_warning = storage.leakage_warning;
    o.integrator.reaction_substeps = storage.reaction_substeps;
    o.integrator.advection = storage.advection == "muscl" ? Advection::Muscl : Advection::Upwind;
    o.integrator.snapshot_stride = snapshot_stride;
    return o;
}

GpeParams RunConfig::gpe_params() const
{
    GpeParams p;
    p.m_a = gpe.m_a;
    p.m_b = gpe.m_b;
    p.U_gg = gpe.u_gg;
    p.U_ab = gpe.u_ab;
    if (gpe.v_g != 0.0) p.V_g.assign(gpe.n_z, gpe.v_g);
    p.N_a = gpe.n_a;
    p.N_b = gpe.n_b;
    p.background_amp = gpe.background_amp;
    p.nonlinearity = gpe.nonlinearity == "frozen" ? Nonlinearity::FrozenBackground : Nonlinearity::SelfConsistent;
    p.background_decay = gpe.background_decay;
    return p;
}

Grid1D RunConfig::gpe_grid() const
{
    const double dz = gpe.period / static_cast<double>(gpe.n_z);
    return Grid1D(gpe.z_min, gpe.z_min + dz * static_cast<double>(gpe.n_z - 1), gpe.n_z, gpe.dt, gpe.t_end);
}

SolitonSpec RunConfig::soliton_spec() const
{
    const double alpha = soliton.alpha > 0.0 ? soliton.alpha : SolitonSpec::self_consistent_alpha(gpe_params());
    return SolitonSpec{soliton.q, soliton.z0, soliton.direction, alpha};
}

SplitOptions RunConfig::split_options() const
{
    SplitOptions o;
    o.seed = soliton.seed == "product" ? SplitSeed::Product : SplitSeed::Exact;
    o.z0 = soliton.z0;
    o.snapshot_stride = snapshot_stride;
    o.late_fraction = soliton.late_fraction;
    return o;
}

void RunConfig::validate() const
{
    check(medium.g_tilde >= 0.0 && std::isfinite(medium.g_tilde), "medium.g_tilde_rad_per_us", "must be finite and >= 0");
    check(medium.length > 0.0, "medium.length_um", "must be > 0");
    check(medium.c > 0.0, "medium.c_um_per_us", "must be > 0");
    check(medium.n_total > 0.0 && std::isfinite(medium.n_total), "medium.n_total", "must be finite and > 0");
    check(medium.eta > 0.0 && std::isfinite(medium.eta), "medium.eta",
          "eta = N_b/N_a must be > 0 (both populations present)");
    for (auto [v, key] : {std::pair{medium.gamma_a, "medium.gamma_a_rad_per_us"},
                          std::pair{medium.gamma_b, "medium.gamma_b_rad_per_us"},
                          std::pair{medium.gamma_e, "medium.gamma_e_rad_per_us"},
                          std::pair{medium.gamma_g, "medium.gamma_g_rad_per_us"}})
        check(v >= 0.0 && std::isfinite(v), key, "decay rates must be finite and >= 0");
    check(std::isfinite(medium.Delta), "medium.detuning_rad_per_us", "must be finite");
    check(std::isfinite(medium.delta), "medium.two_photon_detuning_rad_per_us", "must be finite");

    if (schedule.times.empty()) {
        check(schedule.values.empty(), "schedule.values_rad_per_us", "given without schedule.times_us");
        check(schedule.omega0 >= 0.0, "schedule.omega0_rad_per_us", "must be >= 0");
        check(schedule.rate > 0.0, "schedule.rate_per_us", "must be > 0");
        check(schedule.t_up >= schedule.t_down, "schedule.t_up_us", "must not precede schedule.t_down_us");
    } else {
        check(schedule.values.size() == schedule.times.size(), "schedule.values_rad_per_us",
              "must have one value per schedule.times_us entry");
    }
    try {
        (void)control_schedule();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(schedule.times.empty() ? "schedule.omega0_rad_per_us" : "schedule.times_us", e.what());
    }

    check(grid.z_max > grid.z_min, "grid.z_max_um", "must exceed grid.z_min_um");
    check(grid.n_z >= 16, "grid.n_z", "must be >= 16");
    check(grid.dt >= 0.0, "grid.dt_us", "must be >= 0");
    check(grid.t_end >= 0.0, "grid.t_end_us", "must be >= 0");
    if (grid.dt > 0.0) {
        const double dz = (grid.z_max - grid.z_min) / static_cast<double>(grid.n_z - 1);
        check(grid.dt * medium.c <= dz * (1.0 + 1e-12), "grid.dt_us",
              fmt::format("CFL violated: dt c / dz = {} > 1", grid.dt * medium.c / dz));
    }

    check(pulse.width > 0.0, "pulse.width_um", "must be > 0");
    check(pulse.density_ratio >= 0.0, "pulse.density_ratio", "must be >= 0");

    check(axis.count >= 2, "axis.count", "must be >= 2");
    check(axis.t_end > axis.t_begin, "axis.t_end_us", "must exceed axis.t_begin_us");

    check(!sweep.etas.empty(), "sweep.etas", "must not be empty");
    for (double e : sweep.etas) check(e > 0.0 && std::isfinite(e), "sweep.etas", "every eta must be finite and > 0");
    check(!sweep.kinds.empty(), "sweep.kinds", "must not be empty");
    try {
        (void)medium_kinds();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("sweep.kinds", e.what());
    }
    check(sweep.n_min > 0.0, "sweep.n_min", "must be > 0");
    check(sweep.n_max > sweep.n_min, "sweep.n_max", "must exceed sweep.n_min");
    check(sweep.fit_points >= 2, "sweep.fit_points", "must be >= 2");

    check(storage.threshold > 0.0, "storage.threshold", "must be > 0");
    check(storage.pulse_duration >= 0.0, "storage.pulse_duration_us", "must be >= 0");
    check(storage.leakage_warning >= 0.0, "storage.leakage_warning", "must be >= 0");
    check(storage.reaction_substeps >= 1, "storage.reaction_substeps", "must be >= 1");
    check(storage.advection == "upwind" || storage.advection == "muscl", "storage.advection",
          "must be 'upwind' or 'muscl'");

    check(gpe.m_a + gpe.m_b > 0.0, "gpe.m_a_us_per_um2", "m_a + m_b must be > 0");
    check(gpe.u_gg >= 0.0, "gpe.u_gg_rad_um_per_us", "must be >= 0 for soliton experiments");
    check(std::isfinite(gpe.u_ab), "gpe.u_ab_rad_um_per_us", "must be finite");
    check(std::isfinite(gpe.v_g), "gpe.v_g_rad_per_us", "must be finite");
    check(gpe.n_a >= 0.0, "gpe.n_a", "must be >= 0");
    check(gpe.n_b >= 0.0, "gpe.n_b", "must be >= 0");
    check(gpe.background_amp >= 0.0, "gpe.background_amp_per_sqrt_um", "must be >= 0");
    check(gpe.nonlinearity == "self-consistent" || gpe.nonlinearity == "frozen", "gpe.nonlinearity",
          "must be 'self-consistent' or 'frozen'");
    check(gpe.background_decay >= 0.0, "gpe.background_decay_per_us", "must be >= 0");
    check(gpe.period > 0.0, "gpe.period_um", "must be > 0");
    check(gpe.n_z >= 16, "gpe.n_z", "must be >= 16");
    check(gpe.dt > 0.0, "gpe.dt_us", "must be > 0");
    check(gpe.t_end >= 0.0, "gpe.t_end_us", "must be >= 0");

    check(soliton.q > 0.0 && soliton.q <= 1.0, "soliton.q", "must be in (0, 1]");
    check(soliton.direction == 1 || soliton.direction == -1, "soliton.direction", "must be +1 or -1");
    check(soliton.alpha >= 0.0, "soliton.alpha_um2", "must be >= 0");
    check(soliton.seed == "exact" || soliton.seed == "product", "soliton.seed", "must be 'exact' or 'product'");
    check(soliton.late_fraction > 0.0 && soliton.late_fraction <= 1.0, "soliton.late_fraction", "must be in (0, 1]");

    check(max_cell_updates > 0.0, "limits.max_cell_updates", "must be > 0");
    check(!output_dir.empty(), "output.dir", "must not be empty");
}

RunConfig parse_config(std::string_view text)
{
    YAML::Node doc;
    try {
        doc = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ConfigError("<document>", fmt::format("malformed YAML: {}", e.what()));
    }
    RunConfig config;
    if (doc.IsNull()) {
        config.validate();
        return config;
    }
    if (!doc.IsMap()) throw ConfigError("<document>", "expected a map of keys to values");
    std::vector<std::string> seen;
    for (const auto& entry : doc) {
        const std::string key = entry.first.as<std::string>();
        const Field& field = resolve(key);
        if (std::find(seen.begin(), seen.end(), field.key) != seen.end())
            throw ConfigError(field.key, "given more than once");
        seen.push_back(field.key);
        field.read(config, entry.second, field.key);
    }
    config.validate();
    return config;
}

std::string serialize_config(const RunConfig& config)
{
    std::string out;
    for (const auto& f : schema()) out += fmt::format("{}: {}\n", f.key, f.write(config));
    return out;
}

void apply_override(RunConfig& config, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError(std::string(assignment), "override must have the form key=value");
    const std::string key(assignment.substr(0, eq));
    const std::string value(assignment.substr(eq + 1));
    const Field& field = resolve(key);
    YAML::Node node;
    try {
        node = YAML::Load(value);
    } catch (const YAML::Exception& e) {
        throw ConfigError(field.key, fmt::format("malformed value: {}", e.what()));
    }
    if (node.IsNull()) node = YAML::Node(value);
    field.read(config, node, field.key);
    config.validate();
}

std::vector<std::pair<std::string, std::string>> config_keys()
{
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto& f : schema()) keys.emplace_back(f.key, f.doc);
    return keys;
}

}  // namespace slowlight::cli
