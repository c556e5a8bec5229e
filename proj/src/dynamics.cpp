#include "slowlight/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "slowlight/errors.hpp"

namespace slowlight {

cplx GaussianPulse::operator()(double z) const
{
    const double x = (z - center) / width;
    return amplitude * std::exp(-0.25 * x * x);
}

cplx GaussianPulse::derivative(double z) const
{
    return (*this)(z) * (-0.5 * (z - center) / (width * width));
}

SignalEnvelope SignalEnvelope::sample(const Grid1D& grid, const GaussianPulse& pulse)
{
    if (!(pulse.width > 0.0)) throw std::invalid_argument("GaussianPulse: width must be > 0");
    SignalEnvelope env;
    env.z_min = grid.z_min();
    env.dz = grid.dz();
    env.shape = pulse;
    env.samples.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) env.samples[i] = pulse(grid.z(i));
    return env;
}

double SignalEnvelope::norm_sq() const
{
    double sum = 0.0;
    for (const auto& v : samples) sum += std::norm(v);
    return sum * dz;
}

double SignalEnvelope::centroid() const
{
    double weight = 0.0, moment = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double w = std::norm(samples[i]);
        weight += w;
        moment += w * z(i);
    }
    return weight > 0.0 ? moment / weight : std::numeric_limits<double>::quiet_NaN();
}

double SignalEnvelope::peak() const
{
    double best = 0.0;
    for (const auto& v : samples) best = std::max(best, std::abs(v));
    return best;
}

double SignalEnvelope::photon_density_ratio(const MediumParams& p) const
{
    const double atoms = std::min(p.N_a, p.N_b);
    const double photons = peak() * peak() / p.L;
    if (photons == 0.0) return 0.0;
    return atoms > 0.0 ? photons / atoms : std::numeric_limits<double>::infinity();
}

namespace {

double lossless_velocity(const MediumParams& p, double omega)
{
    const double coupling_sq = p.collective_coupling_sq();
    if (coupling_sq == 0.0) return p.c;
    const double omega_sq = omega * omega;
    return p.c * omega_sq / (omega_sq + coupling_sq);
}

double cos_mixing(const MediumParams& p, double omega)
{
    const double coupling_sq = p.collective_coupling_sq();
    if (coupling_sq == 0.0) return 1.0;
    return omega / std::sqrt(omega * omega + coupling_sq);
}

}  // namespace

double translation_distance(const ControlSchedule& sched, const MediumParams& p, double t0, double t1,
                            double rel_tol)
{
    if (t1 == t0) return 0.0;
    auto integrand = [&](double t) { return lossless_velocity(p, sched(t)); };
    // GK61 estimates are well below rel_tol once the adaptive bisection converges.
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, t0, t1, 20, rel_tol * 1e-2);
}

double amplitude_factor(const ControlSchedule& sched, const MediumParams& p, double t)
{
    const double initial = cos_mixing(p, sched(0.0));
    if (initial == 0.0) throw std::domain_error("amplitude_factor: cos(theta(0)) = 0, the light starts fully stopped");
    return cos_mixing(p, sched(t)) / initial;
}

SignalEnvelope wea_propagate(const SignalEnvelope& env0, const ControlSchedule& sched, const MediumParams& p,
                             double t, double rel_tol)
{
    if (t < 0.0) throw std::invalid_argument("wea_propagate: t must be >= 0");
    const double shift = translation_distance(sched, p, 0.0, t, rel_tol);
    const double factor = amplitude_factor(sched, p, t);

    SignalEnvelope out = env0;
    if (env0.shape) {
        GaussianPulse moved = *env0.shape;
        moved.center += shift;
        moved.amplitude *= factor;
        out.shape = moved;
        for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] = moved(out.z(i));
        return out;
    }
    const auto n = env0.samples.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (out.z(i) - shift - env0.z_min) / env0.dz;
        if (x < 0.0 || x > static_cast<double>(n - 1)) {
            out.samples[i] = 0.0;
            continue;
        }
        const auto j = std::min(static_cast<std::size_t>(x), n - 2);
        const double w = x - static_cast<double>(j);
        out.samples[i] = factor * ((1.0 - w) * env0.samples[j] + w * env0.samples[j + 1]);
    }
    return out;
}

MeanFieldState MeanFieldState::uniform_atoms(const Grid1D& grid, const MediumParams& p)
{
    const auto n = grid.size();
    MeanFieldState s;
    s.E.assign(n, 0.0);
    s.phi_a.assign(n, std::sqrt(p.N_a));
    s.phi_b.assign(n, std::sqrt(p.N_b));
    s.phi_e.assign(n, 0.0);
    s.phi_g.assign(n, 0.0);
    return s;
}

MeanFieldState MeanFieldState::dark_state_polariton(const Grid1D& grid, const MediumParams& p,
                                                    const ControlSchedule& sched, const SignalEnvelope& signal)
{
    if (signal.samples.size() != grid.size()) throw std::invalid_argument("dark_state_polariton: envelope/grid size mismatch");
    MeanFieldState s = uniform_atoms(grid, p);
    s.E = signal.samples;

    const double pair_amp = std::sqrt(p.N_a * p.N_b);
    const double g = p.g_bare();
    if (pair_amp == 0.0 || g == 0.0) return s;

    const double omega0 = sched(0.0);
    if (omega0 == 0.0) throw std::domain_error("dark_state_polariton: Omega(0) = 0");
    const double v0 = lossless_velocity(p, omega0);
    const double dz = grid.dz();
    const auto n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        s.phi_g[i] = -g * pair_amp / omega0 * s.E[i];
        cplx slope;
        if (signal.shape) {
            slope = signal.shape->derivative(grid.z(i));
        } else if (i == 0) {
            slope = (s.E[1] - s.E[0]) / dz;
        } else if (i == n - 1) {
            slope = (s.E[n - 1] - s.E[n - 2]) / dz;
        } else {
            slope = (s.E[i + 1] - s.E[i - 1]) / (2.0 * dz);
        }
        // (c - v_g) dE/dz = i g L phi_a* phi_b* phi_e for a stationary polariton
        s.phi_e[i] = cplx(0.0, -1.0) * (p.c - v0) * slope / (g * p.L * pair_amp);
    }
    return s;
}

SignalEnvelope MeanFieldState::signal(const Grid1D& grid) const
{
    SignalEnvelope env;
    env.z_min = grid.z_min();
    env.dz = grid.dz();
    env.samples = E;
    return env;
}

SignalEnvelope MeanFieldState::molecules_scaled(const Grid1D& grid, double scale) const
{
    SignalEnvelope env;
    env.z_min = grid.z_min();
    env.dz = grid.dz();
    env.samples.resize(phi_g.size());
    for (std::size_t i = 0; i < phi_g.size(); ++i) env.samples[i] = scale * phi_g[i];
    return env;
}

Charges conserved_charges(const MeanFieldState& s, const MediumParams& p, const Grid1D& grid)
{
    Charges q;
    const double inv_L = 1.0 / p.L;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double shared = std::norm(s.phi_e[i]) + std::norm(s.phi_g[i]);
        q.q1 += std::norm(s.phi_a[i]) + shared;
        q.q2 += std::norm(s.phi_b[i]) + shared;
        q.q3 += std::norm(s.E[i]) * inv_L + shared;
    }
    const double dz = grid.dz();
    q.q1 *= dz;
    q.q2 *= dz;
    q.q3 *= dz;
    return q;
}

// ---------------------------------------------------------------------------
// MeanFieldIntegrator

namespace {

struct Point {
    cplx E, a, b, e, g;
};

struct Rates {
    double g;        // bare coupling
    double gL;       // g L
    double gamma_a, gamma_b, gamma_e, gamma_g;
    double Delta, delta;
};

inline Point derivative(const Point& y, const Rates& r, double omega)
{
    const cplx i(0.0, 1.0);
    Point d;
    d.E = i * r.gL * std::conj(y.a) * std::conj(y.b) * y.e;
    d.a = -i * r.delta * y.a - r.gamma_a * y.a + i * r.g * std::conj(y.E) * std::conj(y.b) * y.e;
    d.b = -r.gamma_b * y.b + i * r.g * std::conj(y.E) * std::conj(y.a) * y.e;
    d.e = -i * r.Delta * y.e - r.gamma_e * y.e + i * r.g * y.E * y.a * y.b + i * omega * y.g;
    d.g = -r.gamma_g * y.g + i * omega * y.e;
    return d;
}

inline Point axpy(const Point& y, double h, const Point& k)
{
    return {y.E + h * k.E, y.a + h * k.a, y.b + h * k.b, y.e + h * k.e, y.g + h * k.g};
}

double minmod(double a, double b)
{
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

cplx limited_slope(cplx left, cplx right)
{
    return {minmod(left.real(), right.real()), minmod(left.imag(), right.imag())};
}

}  // namespace

MeanFieldIntegrator::MeanFieldIntegrator(MediumParams p, ControlSchedule sched, Grid1D grid, IntegratorOptions options)
    : p_(p), sched_(std::move(sched)), grid_(grid), options_(std::move(options))
{
    p_.validate();
    require_cfl(grid_, p_.c);
    if (options_.reaction_substeps < 1) throw std::invalid_argument("reaction_substeps must be >= 1");
}

void MeanFieldIntegrator::react(MeanFieldState& s, double t0, double h) const
{
    const Rates r{p_.g_bare(), p_.g_bare() * p_.L, p_.gamma_a, p_.gamma_b, p_.gamma_e, p_.gamma_g, p_.Delta, p_.delta};
    const int m = options_.reaction_substeps;
    const double hs = h / m;

    // Omega at every RK4 stage time: t0 + k hs/2, k = 0..2m.
    std::vector<double> omega(static_cast<std::size_t>(2 * m + 1));
    for (std::size_t k = 0; k < omega.size(); ++k) omega[k] = sched_(t0 + 0.5 * hs * static_cast<double>(k));

    for (std::size_t j = 0; j < s.size(); ++j) {
        Point y{s.E[j], s.phi_a[j], s.phi_b[j], s.phi_e[j], s.phi_g[j]};
        for (int sub = 0; sub < m; ++sub) {
            const auto k0 = static_cast<std::size_t>(2 * sub);
            const Point k1 = derivative(y, r, omega[k0]);
            const Point k2 = derivative(axpy(y, 0.5 * hs, k1), r, omega[k0 + 1]);
            const Point k3 = derivative(axpy(y, 0.5 * hs, k2), r, omega[k0 + 1]);
            const Point k4 = derivative(axpy(y, hs, k3), r, omega[k0 + 2]);
            const double w = hs / 6.0;
            y.E += w * (k1.E + 2.0 * k2.E + 2.0 * k3.E + k4.E);
            y.a += w * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
            y.b += w * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b);
            y.e += w * (k1.e + 2.0 * k2.e + 2.0 * k3.e + k4.e);
            y.g += w * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g);
        }
        s.E[j] = y.E;
        s.phi_a[j] = y.a;
        s.phi_b[j] = y.b;
        s.phi_e[j] = y.e;
        s.phi_g[j] = y.g;
    }
}

void MeanFieldIntegrator::transport(MeanFieldState& s, double t) const
{
    auto& E = s.E;
    const auto n = E.size();
    const double dz = grid_.dz();
    const double nu = grid_.courant(p_.c);
    const cplx ghost = options_.inflow ? options_.inflow(t + dz / p_.c) : cplx{};
    const double to_charge = dz / p_.L;

    if (std::abs(nu - 1.0) < 1e-12) {
        // Courant number one: the upwind update is an exact shift.
        s.photon_outflow += (std::norm(E[n - 1]) - std::norm(ghost)) * to_charge;
        std::move_backward(E.begin(), E.end() - 1, E.end());
        E[0] = ghost;
        return;
    }

    // Interface fluxes F[j] at z_{j-1/2}, j = 0..n (F[0] at the inflow face).
    std::vector<cplx> face(n + 1);
    if (options_.advection == Advection::Upwind) {
        face[0] = ghost;
        for (std::size_t j = 0; j < n; ++j) face[j + 1] = E[j];
    } else {
        auto value = [&](long j) -> cplx {
            if (j < 0) return ghost;
            if (j >= static_cast<long>(n)) return E[n - 1];
            return E[static_cast<std::size_t>(j)];
        };
        for (long j = -1; j < static_cast<long>(n); ++j) {
            const cplx slope = limited_slope(value(j) - value(j - 1), value(j + 1) - value(j));
            face[static_cast<std::size_t>(j + 1)] = value(j) + 0.5 * (1.0 - nu) * slope;
        }
    }
    s.photon_outflow += nu * (std::norm(face[n]) - std::norm(face[0])) * to_charge;
    for (std::size_t j = 0; j < n; ++j) E[j] -= nu * (face[j + 1] - face[j]);
}

void MeanFieldIntegrator::check_finite(const MeanFieldState& s) const
{
    const std::vector<cplx>* fields[] = {&s.E, &s.phi_a, &s.phi_b, &s.phi_e, &s.phi_g};
    const char* names[] = {"E", "phi_a", "phi_b", "phi_e", "phi_g"};
    for (std::size_t f = 0; f < 5; ++f) {
        const auto& v = *fields[f];
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (!std::isfinite(v[j].real()) || !std::isfinite(v[j].imag())) {
                std::ostringstream msg;
                msg << "non-finite " << names[f] << " at t = " << s.t << ", grid index " << j;
                throw NumericalError(msg.str());
            }
        }
    }
}

void MeanFieldIntegrator::step(MeanFieldState& s) const
{
    const double dt = grid_.dt();
    react(s, s.t, 0.5 * dt);
    transport(s, s.t);
    react(s, s.t + 0.5 * dt, 0.5 * dt);
    s.t += dt;
    check_finite(s);
}

void MeanFieldIntegrator::advance_to(MeanFieldState& s, double t_stop) const
{
    const double eps = 1e-9 * grid_.dt();
    while (s.t < t_stop - eps) step(s);
}

std::vector<MeanFieldState> MeanFieldIntegrator::run(MeanFieldState s0) const
{
    const auto n = grid_.size();
    for (const auto* v : {&s0.E, &s0.phi_a, &s0.phi_b, &s0.phi_e, &s0.phi_g})
        if (v->size() != n) throw std::invalid_argument("MeanFieldIntegrator: state does not match grid size");
    check_finite(s0);

    std::vector<MeanFieldState> frames{s0};
    const std::size_t steps = grid_.steps();
    MeanFieldState s = std::move(s0);
    for (std::size_t k = 1; k <= steps; ++k) {
        step(s);
        if (k == steps || (options_.snapshot_stride > 0 && k % options_.snapshot_stride == 0)) frames.push_back(s);
    }
    return frames;
}

std::vector<MeanFieldState> integrate_mean_field(const MeanFieldState& s0, const ControlSchedule& sched,
                                                 const MediumParams& p, const Grid1D& grid,
                                                 const IntegratorOptions& options)
{
    return MeanFieldIntegrator(p, sched, grid, options).run(s0);
}

// ---------------------------------------------------------------------------

Alignment align_envelopes(const SignalEnvelope& input, const SignalEnvelope& retrieved,
                          std::optional<std::size_t> max_shift)
{
    const auto n = input.samples.size();
    if (retrieved.samples.size() != n || std::abs(input.dz - retrieved.dz) > 1e-12 * std::abs(input.dz))
        throw std::invalid_argument("storage_fidelity: envelopes are not on the same grid");
    double in_norm = 0.0, out_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        in_norm += std::norm(input.samples[i]);
        out_norm += std::norm(retrieved.samples[i]);
    }
    if (in_norm == 0.0) throw std::invalid_argument("storage_fidelity: input has zero norm");
    if (out_norm == 0.0) return {0.0, 0};

    const long limit = static_cast<long>(std::min(max_shift.value_or(n - 1), n - 1));
    Alignment best{-1.0, 0};
    for (long shift = -limit; shift <= limit; ++shift) {
        cplx overlap = 0.0;
        const long lo = std::max(0L, -shift);
        const long hi = std::min(static_cast<long>(n), static_cast<long>(n) - shift);
        for (long i = lo; i < hi; ++i)
            overlap += std::conj(input.samples[static_cast<std::size_t>(i)]) *
                       retrieved.samples[static_cast<std::size_t>(i + shift)];
        const double f = std::norm(overlap) / (in_norm * out_norm);
        if (f > best.fidelity) best = {f, shift};
    }
    best.fidelity = std::min(1.0, best.fidelity);
    return best;
}

double storage_fidelity(const SignalEnvelope& input, const SignalEnvelope& retrieved,
                        std::optional<std::size_t> max_shift)
{
    return align_envelopes(input, retrieved, max_shift).fidelity;
}

}  // namespace slowlight
