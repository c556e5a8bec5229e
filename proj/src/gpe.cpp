#include "slowlight/gpe.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fft.hpp"
#include "slowlight/errors.hpp"

namespace slowlight {

void GpeParams::validate() const
{
    if (!(m_a + m_b > 0.0)) throw std::invalid_argument("GpeParams: m_a + m_b must be > 0");
    if (!(N_a >= 0.0 && N_b >= 0.0)) throw std::invalid_argument("GpeParams: N_a, N_b must be >= 0");
    if (!(background_amp >= 0.0)) throw std::invalid_argument("GpeParams: background_amp must be >= 0");
    if (!(background_decay >= 0.0)) throw std::invalid_argument("GpeParams: background_decay must be >= 0");
    if (!std::isfinite(U_gg) || !std::isfinite(U_ab)) throw std::invalid_argument("GpeParams: interactions must be finite");
}

std::vector<double> effective_potential(const GpeParams& p, const Grid1D& grid)
{
    if (!p.V_g.empty() && p.V_g.size() != grid.size())
        throw std::invalid_argument("effective_potential: V_g does not match the grid");
    const double offset = std::sqrt(p.N_a * p.N_b) * p.U_ab;
    std::vector<double> v(grid.size(), offset);
    if (!p.V_g.empty())
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = p.V_g[i] + offset;
    return v;
}

double zeroing_potential(const GpeParams& p) { return -std::sqrt(p.N_a * p.N_b) * p.U_ab; }

double sound_speed(const GpeParams& p)
{
    if (p.U_gg < 0.0) throw std::domain_error("sound_speed: U_gg must be >= 0");
    if (!(p.total_mass() > 0.0)) throw std::invalid_argument("sound_speed: m_a + m_b must be > 0");
    return std::sqrt(p.U_gg * p.background_density() / p.total_mass());
}

double grayness(double v_nu, double v_s)
{
    if (!(v_s > 0.0)) throw std::invalid_argument("grayness: v_s must be > 0");
    const double ratio = std::abs(v_nu) / v_s;
    if (ratio > 1.0) throw std::domain_error("supersonic: no soliton");
    return std::sqrt(1.0 - ratio * ratio);
}

double SolitonSpec::self_consistent_alpha(const GpeParams& p)
{
    const double scale = p.total_mass() * p.U_gg * p.background_density();
    if (!(scale > 0.0)) throw std::domain_error("self_consistent_alpha: need M U_gg |Phi0|^2 > 0");
    return 1.0 / scale;
}

double SolitonSpec::alpha_from_scattering_length(double a_gg, double background_amp)
{
    if (!(a_gg > 0.0 && background_amp > 0.0)) throw std::domain_error("alpha_from_scattering_length: need a_gg > 0, |Phi0| > 0");
    return 1.0 / (std::sqrt(4.0 * pi * a_gg) * background_amp);
}

double SolitonSpec::width() const { return std::sqrt(alpha) / q; }

double SolitonSpec::velocity(const GpeParams& p) const
{
    return static_cast<double>(direction) * sound_speed(p) * std::sqrt(std::max(0.0, 1.0 - q * q));
}

void SolitonSpec::validate() const
{
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("SolitonSpec: q must be in (0, 1]");
    if (!(alpha > 0.0)) throw std::invalid_argument("SolitonSpec: alpha must be > 0");
    if (direction != 1 && direction != -1) throw std::invalid_argument("SolitonSpec: direction must be +1 or -1");
}

cplx soliton_factor(double q, int direction, double alpha, double x)
{
    return {q * std::tanh(q * x / std::sqrt(alpha)), static_cast<double>(direction) * std::sqrt(1.0 - q * q)};
}

namespace {

void require_free_background(const GpeParams& p, const Grid1D& grid)
{
    for (double v : effective_potential(p, grid))
        if (std::abs(v) > 1e-12 * std::max(1.0, std::abs(zeroing_potential(p))))
            throw std::invalid_argument("gray soliton requires V_eff = 0 on the grid");
}

/// Maps z onto [origin, origin + period).
double wrap(double z, double origin, double period)
{
    double x = std::fmod(z - origin, period);
    if (x < 0.0) x += period;
    return origin + x;
}

}  // namespace

WaveFunction soliton_pair(const SolitonSpec& spec, const GpeParams& p, const Grid1D& grid, double z_main,
                          double z_partner, double t)
{
    spec.validate();
    const double period = grid.period();
    // Evaluate on a window that starts a quarter period before the main soliton
    // when the partner sits half a period ahead, so both factors are interior.
    double gap = std::fmod(z_partner - z_main, period);
    if (gap < 0.0) gap += period;
    const double origin = z_main - 0.5 * (period - gap);
    const cplx phase = background_phase(p, 0.0, t) * p.background_amp;

    WaveFunction out;
    out.t = t;
    out.psi.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double z = wrap(grid.z(i), origin, period);
        out.psi[i] = phase * soliton_factor(spec.q, spec.direction, spec.alpha, z - z_main) *
                     soliton_factor(spec.q, -spec.direction, spec.alpha, z - (z_main + gap));
    }
    return out;
}

WaveFunction gray_soliton(const SolitonSpec& spec, const GpeParams& p, const Grid1D& grid)
{
    spec.validate();
    require_free_background(p, grid);
    return soliton_pair(spec, p, grid, spec.z0, spec.z0 + 0.5 * grid.period(), 0.0);
}

cplx background_phase(const GpeParams& p, double t0, double t)
{
    const double n0 = p.background_density();
    double integral;
    if (p.background_decay > 0.0) {
        const double k = 2.0 * p.background_decay;
        integral = n0 * (std::exp(-k * t0) - std::exp(-k * t)) / k;
    } else {
        integral = n0 * (t - t0);
    }
    return std::polar(1.0, -p.U_gg * integral);
}

double gpe_norm(const WaveFunction& psi, const Grid1D& grid)
{
    double sum = 0.0;
    for (const auto& v : psi.psi) sum += std::norm(v);
    return sum * grid.dz();
}

double gpe_energy(const WaveFunction& psi, const GpeParams& p, const Grid1D& grid)
{
    const auto n = grid.size();
    detail::Fft fft(n);
    std::vector<cplx> spectrum = psi.psi;
    fft.forward(spectrum);
    const auto k = detail::wavenumbers(n, grid.period());
    double kinetic = 0.0;
    for (std::size_t m = 0; m < n; ++m) kinetic += k[m] * k[m] * std::norm(spectrum[m]);
    kinetic *= grid.dz() / static_cast<double>(n) / (2.0 * p.total_mass());

    const auto v = effective_potential(p, grid);
    double potential = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = std::norm(psi.psi[i]);
        if (p.nonlinearity == Nonlinearity::SelfConsistent)
            potential += v[i] * rho + 0.5 * p.U_gg * rho * rho;
        else
            potential += (v[i] + p.U_gg * p.background_density()) * rho;
    }
    return kinetic + potential * grid.dz();
}

Evolution split_step_evolve(const WaveFunction& psi0, const GpeParams& p, const Grid1D& grid, double t_end,
                            const EvolveOptions& options)
{
    p.validate();
    const auto n = grid.size();
    if (psi0.psi.size() != n) throw std::invalid_argument("split_step_evolve: wavefunction does not match grid");
    if (t_end < psi0.t) throw std::invalid_argument("split_step_evolve: t_end before the initial time");

    const double dt = grid.dt();
    const double M = p.total_mass();
    const auto v_eff = effective_potential(p, grid);
    const bool frozen = p.nonlinearity == Nonlinearity::FrozenBackground;

    double max_phase_rate = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = frozen ? p.background_density() : std::norm(psi0.psi[i]);
        max_phase_rate = std::max(max_phase_rate, std::abs(v_eff[i] + p.U_gg * rho));
    }
    if (dt * max_phase_rate >= 0.1) {
        std::ostringstream msg;
        msg << "split_step_evolve: dt * max|V_eff + U n| = " << dt * max_phase_rate << " must be < 0.1";
        throw std::invalid_argument(msg.str());
    }

    detail::Fft fft(n);
    const auto k = detail::wavenumbers(n, grid.period());
    std::vector<cplx> kinetic(n);
    for (std::size_t m = 0; m < n; ++m) kinetic[m] = std::polar(1.0, -dt * k[m] * k[m] / (2.0 * M));

    const double nyquist = k.empty() ? 0.0 : two_pi / grid.period() * static_cast<double>(n / 2);
    auto spectral_tail = [&](const std::vector<cplx>& psi) {
        std::vector<cplx> spec = psi;
        fft.forward(spec);
        double total = 0.0, tail = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            const double power = std::norm(spec[m]);
            total += power;
            if (std::abs(k[m]) > (2.0 / 3.0) * nyquist) tail += power;
        }
        return total > 0.0 ? tail / total : 0.0;
    };

    Evolution evo;
    evo.frames.push_back(psi0);
    bool warned = false;
    auto check_aliasing = [&](const WaveFunction& frame) {
        const double tail = spectral_tail(frame.psi);
        if (!warned && tail > options.aliasing_threshold) {
            std::ostringstream msg;
            msg << "aliasing: spectral tail fraction " << tail << " at t = " << frame.t;
            evo.warnings.push_back(msg.str());
            warned = true;
        }
    };
    check_aliasing(psi0);

    WaveFunction state = psi0;
    auto potential_half_step = [&](double t_mid) {
        const double decay = std::exp(-0.5 * dt * p.background_decay);
        const double frozen_density = p.background_density() * std::exp(-2.0 * p.background_decay * t_mid);
        for (std::size_t i = 0; i < n; ++i) {
            const double rho = frozen ? frozen_density : std::norm(state.psi[i]);
            state.psi[i] *= decay * std::polar(1.0, -0.5 * dt * (v_eff[i] + p.U_gg * rho));
        }
    };

    const double span = t_end - psi0.t;
    const double ratio = span / dt;
    const auto steps = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
    for (std::size_t s = 1; s <= steps; ++s) {
        potential_half_step(state.t + 0.25 * dt);
        fft.forward(state.psi);
        for (std::size_t m = 0; m < n; ++m) state.psi[m] *= kinetic[m];
        fft.backward(state.psi);
        potential_half_step(state.t + 0.75 * dt);
        state.t = psi0.t + static_cast<double>(s) * dt;

        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(state.psi[i].real()) || !std::isfinite(state.psi[i].imag())) {
                std::ostringstream msg;
                msg << "split_step_evolve: non-finite psi at t = " << state.t << ", grid index " << i;
                throw NumericalError(msg.str());
            }
        }
        if (s == steps || (options.snapshot_stride > 0 && s % options.snapshot_stride == 0)) {
            evo.frames.push_back(state);
            check_aliasing(state);
        }
    }
    return evo;
}

// ---------------------------------------------------------------------------

SolitonRunReport propagate_soliton(const SolitonSpec& spec, const GpeParams& p, const Grid1D& grid, double t_end,
                                   std::size_t snapshot_stride)
{
    SolitonRunReport r;
    const WaveFunction psi0 = gray_soliton(spec, p, grid);
    r.evolution = split_step_evolve(psi0, p, grid, t_end, EvolveOptions{snapshot_stride});
    const auto& frames = r.evolution.frames;

    r.expected_speed = spec.velocity(p);
    r.expected_min_density = (1.0 - spec.q * spec.q) * p.background_density();

    TrackOptions track;
    track.background_density = p.background_density();
    r.trajectories = track_minima(frames, grid, track);

    // The tracked soliton is the trajectory starting nearest z0.
    const Trajectory* main = nullptr;
    double best = grid.period();
    for (const auto& traj : r.trajectories) {
        if (traj.t.empty() || traj.t.front() != frames.front().t) continue;
        const double d = std::abs(traj.z.front() - spec.z0);
        if (d < best) {
            best = d;
            main = &traj;
        }
    }
    if (main != nullptr && main->t.size() >= 2) {
        r.measured_speed = main->fitted_speed(1.0);
        r.measured_min_density = *std::min_element(main->density.begin(), main->density.end());
        double drift = 0.0;
        for (std::size_t i = 0; i < main->z.size(); ++i)
            drift = std::max(drift, std::abs(main->z[i] - (spec.z0 + r.expected_speed * (main->t[i] - main->t.front()))));
        r.center_drift = drift;
    }

    const double norm0 = gpe_norm(frames.front(), grid);
    const double energy0 = gpe_energy(frames.front(), p, grid);
    const double elapsed = frames.back().t - frames.front().t;
    const double background_norm = std::sqrt(p.background_density() * grid.period());
    for (const auto& frame : frames) {
        if (elapsed > 0.0)
            r.norm_drift_per_time = std::max(r.norm_drift_per_time, std::abs(gpe_norm(frame, grid) - norm0) / norm0 / elapsed);
        r.energy_drift = std::max(r.energy_drift, std::abs(gpe_energy(frame, p, grid) - energy0) / std::abs(energy0));

        const double dt = frame.t - frames.front().t;
        const double v = r.expected_speed;
        const WaveFunction exact =
            soliton_pair(spec, p, grid, spec.z0 + v * dt, spec.z0 + 0.5 * grid.period() - v * dt, frame.t);
        double diff = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) diff += std::norm(frame.psi[i] - exact.psi[i]);
        r.shape_error = std::max(r.shape_error, std::sqrt(diff * grid.dz()) / background_norm);
    }
    return r;
}

WaveFunction split_seed(double q, const GpeParams& p, const Grid1D& grid, const SplitOptions& options)
{
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("split_seed: q must be in (0, 1)");
    require_free_background(p, grid);
    const double xi = std::sqrt(SolitonSpec::self_consistent_alpha(p));
    const double period = grid.period();
    const double s = std::sqrt(1.0 - q * q);

    WaveFunction out;
    out.psi.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = (wrap(grid.z(i), options.z0 - 0.5 * period, period) - options.z0) / xi;
        if (options.seed == SplitSeed::Product) {
            out.psi[i] = p.background_amp * soliton_factor(q, 1, 1.0, x) * soliton_factor(q, -1, 1.0, x);
        } else {
            // Two-soliton solution with velocities +-s v_s at its collision time,
            // symmetric about x = 0; written with u = exp(-2q|x|) <= 1.
            const double u = std::exp(-2.0 * q * std::abs(x));
            const double num = u * u + 2.0 * (1.0 - 2.0 * q * q) * u / s + 1.0;
            const double den = u * u + 2.0 * u / s + 1.0;
            out.psi[i] = p.background_amp * num / den;
        }
    }
    return out;
}

SplitReport soliton_split_experiment(double q, const GpeParams& p, const Grid1D& grid, double t_end,
                                     const SplitOptions& options)
{
    SplitReport r;
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("soliton_split_experiment: q must be in (0, 1]");
    if (1.0 - q < 1e-9) {
        r.degenerate = true;
        r.diagnostics = "degenerate: q = 1 gives zero soliton velocities; the two factors merge into a stationary double-dark structure";
        return r;
    }
    r.expected_speed = sound_speed(p) * std::sqrt(1.0 - q * q);

    const WaveFunction seed = split_seed(q, p, grid, options);
    const std::size_t total_steps = static_cast<std::size_t>(std::ceil(t_end / grid.dt() - 1e-9));
    const std::size_t stride = options.snapshot_stride > 0 ? options.snapshot_stride : std::max<std::size_t>(1, total_steps / 200);
    r.evolution = split_step_evolve(seed, p, grid, t_end, EvolveOptions{stride});

    TrackOptions track;
    track.background_density = p.background_density();
    r.trajectories = track_minima(r.evolution.frames, grid, track);

    const std::size_t frames = r.evolution.frames.size();
    for (std::size_t i = 0; i < r.trajectories.size(); ++i)
        if (2 * r.trajectories[i].t.size() >= frames) r.persistent.push_back(i);

    std::ostringstream diag;
    if (r.persistent.size() != 2) {
        diag << "expected two persistent density minima, found " << r.persistent.size();
        r.diagnostics = diag.str();
        return r;
    }

    const Trajectory* a = &r.trajectories[r.persistent[0]];
    const Trajectory* b = &r.trajectories[r.persistent[1]];
    const double speed_a = a->fitted_speed(options.late_fraction);
    const double speed_b = b->fitted_speed(options.late_fraction);
    if (speed_a > speed_b) std::swap(a, b);
    r.left_speed = std::min(speed_a, speed_b);
    r.right_speed = std::max(speed_a, speed_b);

    // Separation on the common time samples after the transient.
    const double t_cut = r.evolution.frames.front().t + options.transient * (t_end - r.evolution.frames.front().t);
    double last = -1.0;
    bool monotone = true;
    std::size_t compared = 0;
    for (std::size_t i = 0; i < a->t.size(); ++i) {
        if (a->t[i] < t_cut) continue;
        const auto it = std::find(b->t.begin(), b->t.end(), a->t[i]);
        if (it == b->t.end()) continue;
        const double sep = b->z[static_cast<std::size_t>(it - b->t.begin())] - a->z[i];
        if (last >= 0.0 && sep < last) monotone = false;
        last = sep;
        ++compared;
    }
    r.separation_monotone = monotone && compared >= 2;
    r.success = r.separation_monotone && r.left_speed < 0.0 && r.right_speed > 0.0 && !a->ambiguous && !b->ambiguous;
    if (!r.success) {
        diag << "split failed:" << (r.separation_monotone ? "" : " separation not monotone;")
             << " speeds " << r.left_speed << ", " << r.right_speed;
        r.diagnostics = diag.str();
    }
    return r;
}

}  // namespace slowlight
