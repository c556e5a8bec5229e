#include "slowlight/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "slowlight/errors.hpp"

namespace slowlight {

FeasibilityReport feasibility_check(const MediumParams& p, double t_s, const ControlSchedule& sched,
                                    double t_storage, double threshold)
{
    if (!(t_s > 0.0)) throw std::invalid_argument("feasibility_check: t_s must be > 0");
    p.validate();
    const auto [gamma1, gamma2] = transversal_rates(p);
    const double inf = std::numeric_limits<double>::infinity();

    FeasibilityReport r;
    r.threshold = threshold;
    r.optical_depth = gamma2 > 0.0 ? p.collective_coupling_sq() * p.L / (gamma2 * p.c) : inf;
    r.plateau_velocity = group_velocity_for_density(p, p.N_a * p.N_b, sched.plateau());

    r.storage_margin = t_storage * gamma1;
    if (std::isinf(r.optical_depth)) {
        r.spectral_margin = 0.0;
    } else {
        const double window = std::sqrt(r.optical_depth) * r.plateau_velocity / p.L;
        r.spectral_margin = window > 0.0 ? (1.0 / t_s) / window : inf;
    }
    r.compression_margin = r.plateau_velocity * t_s / p.L;

    r.storage_window_ok = r.storage_margin < threshold;
    r.spectral_window_ok = r.spectral_margin < threshold;
    r.compression_ok = r.compression_margin < threshold;
    return r;
}

std::vector<double> TimeAxis::samples() const
{
    if (count < 2) return {t_begin};
    std::vector<double> t(count);
    const double step = (t_end - t_begin) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) t[i] = t_begin + step * static_cast<double>(i);
    return t;
}

double ExperimentReport::result(const std::string& name) const
{
    for (const auto& [key, value] : results)
        if (key == name) return value;
    throw std::out_of_range("ExperimentReport has no result '" + name + "'");
}

VelocityCurve velocity_curve(const MediumParams& p, double pair_density, const ControlSchedule& sched,
                             const TimeAxis& axis)
{
    VelocityCurve curve;
    curve.t = axis.samples();
    curve.omega.reserve(curve.t.size());
    curve.vg_over_c.reserve(curve.t.size());
    for (double t : curve.t) {
        const double omega = sched(t);
        curve.omega.push_back(omega);
        curve.vg_over_c.push_back(group_velocity_for_density(p, pair_density, omega) / p.c);
    }
    return curve;
}

namespace {

std::string format_label(const char* prefix, double value)
{
    std::ostringstream os;
    os.precision(17);
    os << prefix << value;
    return os.str();
}

void add_curve_summary(ExperimentReport& r)
{
    const auto& v = r.curve.vg_over_c;
    if (v.empty()) return;
    r.results.emplace_back("min_vg_over_c", *std::min_element(v.begin(), v.end()));
    r.results.emplace_back("max_vg_over_c", *std::max_element(v.begin(), v.end()));
}

}  // namespace

std::vector<ExperimentReport> imbalance_sweep(double N_total, const std::vector<double>& etas,
                                              const ControlSchedule& sched, const MediumParams& p_base,
                                              const TimeAxis& axis)
{
    p_base.validate();
    for (double eta : etas)
        if (!(eta > 0.0)) throw std::invalid_argument("imbalance_sweep: every eta must be > 0");

    std::vector<ExperimentReport> reports;
    reports.reserve(etas.size());
    for (double eta : etas) {
        ExperimentReport r;
        r.kind = "imbalance";
        r.label = format_label("eta=", eta);
        const auto [N_a, N_b] = split_populations(N_total, eta);
        const double pairs = effective_pair_density(MediumKind::HeteronuclearDimer, N_total, eta);
        r.parameters = {{"N_total", N_total}, {"eta", eta}, {"N_a", N_a}, {"N_b", N_b}, {"pair_density", pairs}};
        r.curve = velocity_curve(p_base, pairs, sched, axis);
        add_curve_summary(r);
        reports.push_back(std::move(r));
    }
    return reports;
}

double fit_density_exponent(MediumKind kind, const ControlSchedule& sched, const MediumParams& p_base,
                            const ExponentFit& fit)
{
    if (!(fit.N_min > 0.0 && fit.N_max > fit.N_min) || fit.points < 2)
        throw std::invalid_argument("fit_density_exponent: need 0 < N_min < N_max and >= 2 points");
    const double omega = sched(fit.t_ref);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(fit.points);
    for (std::size_t i = 0; i < fit.points; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(fit.points - 1);
        const double N = fit.N_min * std::pow(fit.N_max / fit.N_min, frac);
        const double v = group_velocity_for_density(p_base, effective_pair_density(kind, N, 1.0), omega);
        const double x = std::log(N);
        const double y = std::log(p_base.c / v - 1.0);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<ExperimentReport> medium_comparison(double N_total, const std::vector<MediumKind>& kinds,
                                                const ControlSchedule& sched, const MediumParams& p_base,
                                                const TimeAxis& axis, const ExponentFit& fit)
{
    p_base.validate();
    std::vector<ExperimentReport> reports;
    reports.reserve(kinds.size());
    for (MediumKind kind : kinds) {
        ExperimentReport r;
        r.kind = "medium";
        r.label = std::string(to_string(kind));
        const double pairs = effective_pair_density(kind, N_total, 1.0);
        r.parameters = {{"N_total", N_total}, {"pair_density", pairs}};
        r.curve = velocity_curve(p_base, pairs, sched, axis);
        add_curve_summary(r);
        r.results.emplace_back("exponent", fit_density_exponent(kind, sched, p_base, fit));
        reports.push_back(std::move(r));
    }
    return reports;
}

namespace {

/// L2 distance between `stored` (shifted by `shift`) and `target`, relative to |target|.
double shifted_residual(const std::vector<cplx>& target, const std::vector<cplx>& stored, long shift)
{
    const long n = static_cast<long>(target.size());
    double diff = 0.0, ref = 0.0;
    std::vector<bool> used(stored.size(), false);
    for (long i = 0; i < n; ++i) {
        const long j = i + shift;
        const cplx s = (j >= 0 && j < n) ? stored[static_cast<std::size_t>(j)] : cplx{};
        if (j >= 0 && j < n) used[static_cast<std::size_t>(j)] = true;
        diff += std::norm(s - target[static_cast<std::size_t>(i)]);
        ref += std::norm(target[static_cast<std::size_t>(i)]);
    }
    for (std::size_t j = 0; j < stored.size(); ++j)
        if (!used[j]) diff += std::norm(stored[j]);
    return std::sqrt(diff / ref);
}

double max_relative_drift(const Charges& now, double outflow, const Charges& start)
{
    auto rel = [](double a, double b) { return b != 0.0 ? std::abs(a - b) / std::abs(b) : std::abs(a); };
    return std::max({rel(now.q1, start.q1), rel(now.q2, start.q2), rel(now.q3 + outflow, start.q3)});
}

}  // namespace

ExperimentReport run_storage_retrieval(const MediumParams& p, const ControlSchedule& sched,
                                       const GaussianPulse& pulse, const Grid1D& grid, const StorageOptions& options)
{
    p.validate();
    ExperimentReport r;
    r.kind = "storage";
    r.label = "storage";
    r.parameters = {{"pulse_center", pulse.center}, {"pulse_width", pulse.width}, {"pulse_amplitude", pulse.amplitude},
                    {"t_store", sched.storage_time()}, {"t_end", grid.t_end()}};

    const double plateau_vg = group_velocity_for_density(p, p.N_a * p.N_b, sched.plateau());
    const double t_s = options.t_s > 0.0 ? options.t_s
                       : plateau_vg > 0.0 ? pulse.width / plateau_vg
                                          : std::numeric_limits<double>::infinity();
    r.feasibility = feasibility_check(p, t_s, sched, sched.storage_duration(), options.feasibility_threshold);
    if (!r.feasibility->all_ok()) {
        if (!options.force) throw FeasibilityRefused("storage run refused: feasibility check failed (use force to override)");
        r.warnings.push_back("feasibility check failed; run forced");
    }

    const SignalEnvelope input = SignalEnvelope::sample(grid, pulse);
    if (input.norm_sq() == 0.0) {
        r.trivial_input = true;
        r.warnings.push_back("trivial input: zero-norm pulse, fidelity undefined");
        return r;
    }
    if (!input.wea_admissible(p)) r.warnings.push_back("pulse violates the weak-excitation admissibility ratio");

    const MeanFieldIntegrator integrator(p, sched, grid, options.integrator);
    MeanFieldState state = MeanFieldState::dark_state_polariton(grid, p, sched, input);
    const Charges start = conserved_charges(state, p, grid);

    // v_g(t) curve sampled at ~1000 points of the run
    const std::size_t curve_points = std::min<std::size_t>(1001, grid.steps() + 1);
    r.curve = velocity_curve(p, p.N_a * p.N_b, sched, TimeAxis{0.0, grid.t_end(), curve_points});

    const double t_store = std::min(sched.storage_time(), grid.t_end());
    integrator.advance_to(state, t_store);
    const MeanFieldState stored = state;
    double drift = max_relative_drift(conserved_charges(stored, p, grid), stored.photon_outflow, start);

    const double leaked = stored.photon_outflow / start.q3;
    if (leaked > options.leakage_warning) {
        std::ostringstream msg;
        msg << "leakage: fraction " << leaked << " of the signal left the medium before storage";
        r.warnings.push_back(msg.str());
    }

    const double sqrt_L = std::sqrt(p.L);
    const SignalEnvelope scaled_molecules = stored.molecules_scaled(grid, sqrt_L);
    const Alignment mapping = align_envelopes(input, scaled_molecules);
    std::vector<cplx> target(input.samples.size());
    for (std::size_t i = 0; i < target.size(); ++i) target[i] = -input.samples[i];
    const double mapping_residual = shifted_residual(target, scaled_molecules.samples, mapping.shift);

    integrator.advance_to(state, grid.t_end());
    drift = std::max(drift, max_relative_drift(conserved_charges(state, p, grid), state.photon_outflow, start));

    const SignalEnvelope output = state.signal(grid);
    const Alignment retrieval = align_envelopes(input, output);
    const double efficiency = output.norm_sq() / input.norm_sq();

    r.results = {
        {"t_store", stored.t},
        {"t_final", state.t},
        {"predicted_shift_store", translation_distance(sched, p, 0.0, stored.t)},
        {"measured_shift_store", static_cast<double>(mapping.shift) * grid.dz()},
        {"mapping_residual", mapping_residual},
        {"leaked_fraction", leaked},
        {"fidelity", retrieval.fidelity},
        {"retrieval_shift", static_cast<double>(retrieval.shift) * grid.dz()},
        {"efficiency", efficiency},
        {"memory_fidelity", retrieval.fidelity * efficiency},
        {"max_charge_drift", drift},
    };

    StorageProfiles prof;
    prof.z = grid.positions();
    prof.E_in = input.samples;
    prof.phi_g_stored = stored.phi_g;
    prof.E_out = output.samples;
    r.profiles = std::move(prof);
    return r;
}

}  // namespace slowlight
