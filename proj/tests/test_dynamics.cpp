#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "slowlight/dynamics.hpp"
#include "slowlight/errors.hpp"

using namespace slowlight;
using doctest::Approx;

namespace {

/// Scaled medium: c = 1, L = 70, one atom of each species per unit length.
MediumParams scaled_medium(double g_tilde)
{
    MediumParams p;
    p.c = 1.0;
    p.L = 70.0;
    p.N_a = 1.0;
    p.N_b = 1.0;
    p.g_tilde = g_tilde;
    return p;
}

/// Composite Simpson rule, the reference for the adaptive quadrature.
template <class F>
double simpson(F f, double a, double b, int panels)
{
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int k = 1; k < panels; ++k) sum += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

ControlSchedule constant(double omega) { return ControlSchedule(Tabulated{{0.0, 1.0}, {omega, omega}}); }

}  // namespace

TEST_CASE("gaussian pulse width is the rms width of the intensity")
{
    const GaussianPulse pulse{5.0, 2.0, 3.0};
    const Grid1D grid(-40.0, 50.0, 4001, 1.0, 0.0);
    const auto env = SignalEnvelope::sample(grid, pulse);
    double w = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < env.samples.size(); ++i) {
        w += std::norm(env.samples[i]);
        m2 += std::norm(env.samples[i]) * (env.z(i) - 5.0) * (env.z(i) - 5.0);
    }
    CHECK(std::sqrt(m2 / w) == Approx(2.0).epsilon(1e-9));
    CHECK(env.centroid() == Approx(5.0).epsilon(1e-12));
    CHECK(env.peak() == Approx(3.0));
    CHECK(std::abs(pulse.derivative(6.0) - (pulse(6.0 + 1e-6) - pulse(6.0 - 1e-6)) / 2e-6) < 1e-6);
}

TEST_CASE("weak-excitation admissibility")
{
    const MediumParams p = scaled_medium(1.0);
    const Grid1D grid = Grid1D::unit_courant(0.0, 70.0, 1024, 1.0, 1.0);
    const auto env = SignalEnvelope::sample(grid, GaussianPulse{35.0, 3.0, std::sqrt(1e-3 * 70.0)});
    CHECK(env.photon_density_ratio(p) == Approx(1e-3).epsilon(1e-6));
    CHECK(env.wea_admissible(p));
    const auto bright = SignalEnvelope::sample(grid, GaussianPulse{35.0, 3.0, std::sqrt(0.1 * 70.0)});
    CHECK_FALSE(bright.wea_admissible(p));
}

TEST_CASE("translation distance against a Simpson reference")
{
    const MediumParams p = scaled_medium(3.0);
    const ControlSchedule s = default_storage_schedule();
    const double G2 = p.collective_coupling_sq();
    auto vg = [&](double t) { return p.c * s(t) * s(t) / (s(t) * s(t) + G2); };
    for (double t : {5.0, 30.0, 70.0, 140.0}) {
        const double ref = simpson(vg, 0.0, t, 20000);
        CHECK(translation_distance(s, p, 0.0, t) == Approx(ref).epsilon(1e-9));
    }
    CHECK(translation_distance(s, p, 3.0, 3.0) == 0.0);
}

TEST_CASE("closed-form propagation")
{
    const MediumParams p = scaled_medium(3.0);
    const Grid1D grid(0.0, 200.0, 2001, 0.1, 0.0);
    const GaussianPulse pulse{20.0, 3.0, 0.5};
    const auto env0 = SignalEnvelope::sample(grid, pulse);

    SUBCASE("constant coupling translates without distortion")
    {
        const double omega = 6.0;
        const double vg = group_velocity(p, omega);
        const auto moved = wea_propagate(env0, constant(omega), p, 50.0);
        CHECK(moved.shape->center == Approx(20.0 + vg * 50.0).epsilon(1e-10));
        CHECK(moved.peak() == Approx(env0.peak()).epsilon(1e-3));
        CHECK(moved.shape->amplitude == Approx(0.5).epsilon(1e-14));
        CHECK(moved.shape->width == 3.0);
    }
    SUBCASE("interpolated envelopes follow the same law")
    {
        SignalEnvelope bare = env0;
        bare.shape.reset();
        const auto a = wea_propagate(bare, constant(6.0), p, 50.0);
        const auto b = wea_propagate(env0, constant(6.0), p, 50.0);
        for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(std::abs(a.samples[i] - b.samples[i]) < 2e-4);
    }
    SUBCASE("ramping down stores the light")
    {
        const ControlSchedule s = default_storage_schedule();
        const double at60 = translation_distance(s, p, 0.0, 60.0);
        const double at80 = translation_distance(s, p, 0.0, 80.0);
        CHECK(at80 - at60 < 1e-6 * at60);
        CHECK(amplitude_factor(s, p, 70.0) < 1e-5);
        CHECK(wea_propagate(env0, s, p, 70.0).peak() < 1e-5);
    }
    SUBCASE("returning to the initial coupling restores the amplitude")
    {
        const ControlSchedule s(Tabulated{{0.0, 10.0, 20.0}, {6.0, 1.0, 6.0}});
        CHECK(amplitude_factor(s, p, 20.0) == Approx(1.0));
        CHECK(amplitude_factor(s, p, 10.0) < 1.0);
    }
    CHECK_THROWS_AS(wea_propagate(env0, constant(6.0), p, -1.0), std::invalid_argument);
}

TEST_CASE("conserved charges of simple states")
{
    const MediumParams p = scaled_medium(1.0);
    const Grid1D grid(0.0, 15.0, 16, 1.0, 1.0);
    MeanFieldState vacuum;
    for (auto* f : {&vacuum.E, &vacuum.phi_a, &vacuum.phi_b, &vacuum.phi_e, &vacuum.phi_g}) f->assign(16, 0.0);
    const auto q0 = conserved_charges(vacuum, p, grid);
    CHECK(q0.q1 == 0.0);
    CHECK(q0.q2 == 0.0);
    CHECK(q0.q3 == 0.0);

    MediumParams q = p;
    q.N_a = 2.0;
    q.N_b = 3.0;
    const auto atoms = conserved_charges(MeanFieldState::uniform_atoms(grid, q), q, grid);
    // populations are densities, so the charges scale with the sampled length n dz
    CHECK(atoms.q1 == Approx(2.0 * 16));
    CHECK(atoms.q2 == Approx(3.0 * 16));
    CHECK(atoms.q3 == 0.0);
}

TEST_CASE("uncoupled integrator")
{
    MediumParams p = scaled_medium(0.0);
    p.delta = 0.3;
    p.gamma_a = 0.01;
    p.gamma_e = 0.2;
    p.Delta = 1.0;
    const Grid1D grid = Grid1D::unit_courant(0.0, 100.0, 501, 1.0, 20.0);
    const GaussianPulse pulse{20.0, 3.0, 0.1};
    MeanFieldState s0 = MeanFieldState::uniform_atoms(grid, p);
    s0.E = SignalEnvelope::sample(grid, pulse).samples;
    const auto frames = integrate_mean_field(s0, constant(2.0), p, grid);
    const auto& last = frames.back();
    CHECK(last.t == Approx(20.0));
    const auto env = last.signal(grid);
    CHECK(env.centroid() == Approx(40.0).epsilon(1e-9));
    const cplx expected_a = std::exp(cplx(-p.gamma_a, -p.delta) * last.t);
    for (std::size_t i = 0; i < grid.size(); i += 50) {
        CHECK(std::abs(last.E[i] - pulse(grid.z(i) - 20.0)) < 1e-10);
        CHECK(std::abs(last.phi_a[i] - expected_a) < 1e-9);
        CHECK(std::abs(last.phi_b[i] - 1.0) < 1e-14);
        CHECK(std::abs(last.phi_e[i]) == 0.0);
    }
}

TEST_CASE("integrator guards")
{
    const MediumParams p = scaled_medium(1.0);
    const Grid1D too_coarse(0.0, 10.0, 16, 1.0, 5.0);
    CHECK_THROWS_AS(MeanFieldIntegrator(p, default_storage_schedule(), too_coarse), std::invalid_argument);

    const Grid1D grid = Grid1D::unit_courant(0.0, 10.0, 16, 1.0, 5.0);
    MeanFieldState s = MeanFieldState::uniform_atoms(grid, p);
    s.phi_g[7] = cplx(std::nan(""), 0.0);
    try {
        integrate_mean_field(s, default_storage_schedule(), p, grid);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("phi_g") != std::string::npos);
        CHECK(std::string(e.what()).find("grid index 7") != std::string::npos);
    }
    MeanFieldState wrong = MeanFieldState::uniform_atoms(Grid1D::unit_courant(0.0, 10.0, 32, 1.0, 5.0), p);
    CHECK_THROWS_AS(integrate_mean_field(wrong, default_storage_schedule(), p, grid), std::invalid_argument);
}

TEST_CASE("inflow boundary feeds the grid")
{
    const MediumParams p = scaled_medium(0.0);
    const Grid1D grid = Grid1D::unit_courant(0.0, 50.0, 501, 1.0, 30.0);
    IntegratorOptions opts;
    const GaussianPulse pulse{-10.0, 2.0, 1.0};
    opts.inflow = [pulse](double t) { return pulse(-t); };  // a pulse arriving from z < 0
    const auto frames = integrate_mean_field(MeanFieldState::uniform_atoms(grid, p), constant(1.0), p, grid, opts);
    const auto env = frames.back().signal(grid);
    CHECK(env.centroid() == Approx(20.0).epsilon(1e-3));
    CHECK(env.peak() == Approx(1.0).epsilon(1e-3));
}

TEST_CASE("dark-state polariton moves at the group velocity and converts to molecules")
{
    const double omega = default_storage_schedule()(0.0);
    const MediumParams p = scaled_medium(omega / 10.0);
    const Grid1D grid = Grid1D::unit_courant(0.0, 70.0, 1024, 1.0, 145.0);
    const GaussianPulse pulse{10.0, 3.0, std::sqrt(1e-3 * 70.0)};
    const auto input = SignalEnvelope::sample(grid, pulse);
    const auto s0 = MeanFieldState::dark_state_polariton(grid, p, default_storage_schedule(), input);
    CHECK(std::abs(s0.phi_g[146] - (-p.g_bare() / omega) * s0.E[146]) < 1e-15);

    IntegratorOptions opts;
    opts.snapshot_stride = 100;
    const MeanFieldIntegrator integrator(p, default_storage_schedule(), grid, opts);
    MeanFieldState s = s0;
    integrator.advance_to(s, 70.0);
    const auto closed_form = wea_propagate(input, default_storage_schedule(), p, 70.0);
    // stored: light gone, molecules hold -E_input / sqrt(L) translated by the closed-form distance
    CHECK(s.signal(grid).peak() < 1e-2 * input.peak());
    const auto stored = s.molecules_scaled(grid, -std::sqrt(p.L));
    CHECK(stored.centroid() == Approx(closed_form.shape->center).epsilon(2e-3));
    CHECK(stored.peak() == Approx(input.peak()).epsilon(0.02));

    const Charges q0 = conserved_charges(s0, p, grid);
    const Charges q1 = conserved_charges(s, p, grid);
    CHECK(std::abs(q1.q1 - q0.q1) / q0.q1 < 1e-6);
    CHECK(std::abs(q1.q2 - q0.q2) / q0.q2 < 1e-6);
    CHECK(std::abs(q1.q3 + s.photon_outflow - q0.q3) / q0.q3 < 1e-6);
}

TEST_CASE("second-order transport option")
{
    const MediumParams p = scaled_medium(0.0);
    const GaussianPulse pulse{20.0, 3.0, 1.0};
    auto error = [&](std::size_t n, Advection scheme) {
        const double dz = 100.0 / static_cast<double>(n - 1);
        const Grid1D grid(0.0, 100.0, n, 0.5 * dz, 30.0);
        MeanFieldState s0 = MeanFieldState::uniform_atoms(grid, p);
        s0.E = SignalEnvelope::sample(grid, pulse).samples;
        IntegratorOptions opts;
        opts.advection = scheme;
        const auto last = integrate_mean_field(s0, constant(1.0), p, grid, opts).back();
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) err += std::abs(last.E[i] - pulse(grid.z(i) - last.t)) * grid.dz();
        return err;
    };
    const double up = error(401, Advection::Upwind);
    const double muscl = error(401, Advection::Muscl);
    CHECK(muscl < 0.5 * up);
    CHECK(std::log2(up / error(801, Advection::Upwind)) == Approx(1.0).epsilon(0.2));
    CHECK(std::log2(muscl / error(801, Advection::Muscl)) > 1.5);
}

TEST_CASE("storage fidelity")
{
    const Grid1D grid(0.0, 99.0, 100, 1.0, 1.0);
    const auto in = SignalEnvelope::sample(grid, GaussianPulse{30.0, 3.0, 1.0});
    CHECK(storage_fidelity(in, in) == Approx(1.0).epsilon(1e-14));
    const auto shifted = SignalEnvelope::sample(grid, GaussianPulse{62.0, 3.0, -0.2});
    const auto a = align_envelopes(in, shifted);
    CHECK(a.fidelity == Approx(1.0).epsilon(1e-10));
    CHECK(a.shift == 32);
    SignalEnvelope disjoint = in;
    for (std::size_t i = 0; i < 100; ++i) disjoint.samples[i] = i == 99 ? 1.0 : 0.0;
    SignalEnvelope narrow = in;
    for (std::size_t i = 0; i < 100; ++i) narrow.samples[i] = i == 0 ? 1.0 : 0.0;
    CHECK(storage_fidelity(narrow, disjoint, 10) == 0.0);
    SignalEnvelope zero = in;
    for (auto& v : zero.samples) v = 0.0;
    CHECK_THROWS_AS(storage_fidelity(zero, in), std::invalid_argument);
    CHECK(storage_fidelity(in, zero) == 0.0);
}
