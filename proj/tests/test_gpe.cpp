#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "slowlight/errors.hpp"
#include "slowlight/gpe.hpp"

using namespace slowlight;
using doctest::Approx;

namespace {

/// Periodic grid of n points over `period`, starting at z_min.
Grid1D periodic(double z_min, double period, std::size_t n, double dt)
{
    const double dz = period / static_cast<double>(n);
    return Grid1D(z_min, z_min + dz * static_cast<double>(n - 1), n, dt, 0.0);
}

/// Free Schrodinger evolution of exp(-z^2/(4 s^2)) with mass M.
cplx free_gaussian(double z, double s, double M, double t)
{
    const cplx width_sq = s * s + cplx(0.0, t / (2.0 * M));
    return std::sqrt(s * s / width_sq) * std::exp(-z * z / (4.0 * width_sq));
}

double max_free_error(std::size_t n, double s, double t)
{
    GpeParams p;
    p.U_gg = 0.0;
    const Grid1D grid = periodic(-20.0, 40.0, n, 0.01);
    WaveFunction psi0;
    for (std::size_t i = 0; i < n; ++i) psi0.psi.push_back(free_gaussian(grid.z(i), s, 1.0, 0.0));
    const auto last = split_step_evolve(psi0, p, grid, t).frames.back();
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(last.psi[i] - free_gaussian(grid.z(i), s, 1.0, last.t)));
    return err;
}

}  // namespace

TEST_CASE("effective potential")
{
    GpeParams p;
    p.N_a = 4.0;
    p.N_b = 9.0;
    p.U_ab = 0.5;
    const Grid1D grid = periodic(-8.0, 16.0, 32, 0.01);
    p.V_g.assign(32, zeroing_potential(p));
    CHECK(zeroing_potential(p) == -3.0);
    for (double v : effective_potential(p, grid)) CHECK(v == 0.0);

    GpeParams free;
    for (double v : effective_potential(free, grid)) CHECK(v == 0.0);

    GpeParams trap;
    for (std::size_t i = 0; i < 32; ++i) trap.V_g.push_back(0.5 * grid.z(i) * grid.z(i));
    const auto v = effective_potential(trap, grid);
    for (std::size_t i = 0; i < 32; ++i) CHECK(v[i] == trap.V_g[i]);

    trap.V_g.pop_back();
    CHECK_THROWS_AS(effective_potential(trap, grid), std::invalid_argument);
}

TEST_CASE("sound speed and grayness")
{
    GpeParams p;
    CHECK(sound_speed(p) == 1.0);
    p.U_gg = 0.0;
    CHECK(sound_speed(p) == 0.0);
    p.U_gg = 1.0;
    p.background_amp = 2.0;
    CHECK(sound_speed(p) == Approx(2.0));
    p.background_amp = 0.0;
    CHECK(sound_speed(p) == 0.0);
    p.U_gg = -1.0;
    CHECK_THROWS_AS(sound_speed(p), std::domain_error);

    CHECK(grayness(0.0, 1.0) == 1.0);
    CHECK(grayness(0.6, 1.0) == Approx(0.8));
    CHECK(grayness(-0.6, 1.0) == Approx(0.8));
    CHECK(grayness(1.0, 1.0) == 0.0);
    CHECK_THROWS_WITH_AS(grayness(1.01, 1.0), "supersonic: no soliton", std::domain_error);
}

TEST_CASE("soliton spec")
{
    GpeParams p;
    p.m_a = 1.0;
    p.m_b = 1.0;
    p.U_gg = 1.0;
    p.background_amp = 0.5;
    CHECK(SolitonSpec::self_consistent_alpha(p) == Approx(2.0));
    CHECK(SolitonSpec::alpha_from_scattering_length(1.0 / (4.0 * pi), 0.5) == Approx(2.0));
    const SolitonSpec s{0.8, 0.0, -1, 2.0};
    CHECK(s.width() == Approx(std::sqrt(2.0) / 0.8));
    CHECK(s.velocity(p) == Approx(-0.6 * sound_speed(p)));
    CHECK_THROWS_AS((SolitonSpec{0.0, 0.0, 1, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SolitonSpec{1.2, 0.0, 1, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SolitonSpec{0.5, 0.0, 0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SolitonSpec{0.5, 0.0, 1, 0.0}.validate()), std::invalid_argument);
}

TEST_CASE("gray soliton profile")
{
    GpeParams p;
    const Grid1D grid = periodic(-32.0, 128.0, 2048, 0.005);
    for (double q : {0.3, 0.8, 1.0}) {
        const SolitonSpec spec{q, 0.0, 1, 1.0};
        const auto psi = gray_soliton(spec, p, grid);
        // z = 0 is node 512
        CHECK(std::norm(psi.psi[512]) == Approx(1.0 - q * q).epsilon(1e-12));
        for (std::size_t i = 400; i < 700; i += 7) {
            const double sech = 1.0 / std::cosh(q * grid.z(i));
            CHECK(std::norm(psi.psi[i]) == Approx(1.0 - q * q * sech * sech).epsilon(1e-10));
        }
        CHECK(std::norm(psi.psi[1000]) == Approx(1.0).epsilon(1e-6));
    }
    GpeParams shifted = p;
    shifted.U_ab = 1.0;
    shifted.N_a = shifted.N_b = 1.0;
    CHECK_THROWS_AS(gray_soliton(SolitonSpec{0.5, 0.0, 1, 1.0}, shifted, grid), std::invalid_argument);
    shifted.V_g.assign(grid.size(), zeroing_potential(shifted));
    CHECK_NOTHROW(gray_soliton(SolitonSpec{0.5, 0.0, 1, 1.0}, shifted, grid));
}

TEST_CASE("background phase")
{
    GpeParams p;
    CHECK(background_phase(p, 3.0, 3.0) == cplx(1.0, 0.0));
    GpeParams free = p;
    free.U_gg = 0.0;
    CHECK(background_phase(free, 0.0, 17.0) == cplx(1.0, 0.0));

    // a uniform background evolves by exactly this phase, in both nonlinearity modes
    for (auto mode : {Nonlinearity::SelfConsistent, Nonlinearity::FrozenBackground}) {
        GpeParams q;
        q.U_gg = 1.3;
        q.background_amp = 0.7;
        q.nonlinearity = mode;
        const Grid1D grid = periodic(0.0, 10.0, 16, 0.01);
        WaveFunction psi0{std::vector<cplx>(16, cplx(0.7, 0.0)), 0.0};
        const auto last = split_step_evolve(psi0, q, grid, 5.0).frames.back();
        const cplx expected = 0.7 * background_phase(q, 0.0, last.t);
        CHECK(std::arg(expected) == Approx(std::remainder(-1.3 * 0.49 * last.t, two_pi)).epsilon(1e-12));
        for (const auto& v : last.psi) CHECK(std::abs(v - expected) < 1e-11);
    }
}

TEST_CASE("decaying background")
{
    GpeParams q;
    q.background_decay = 0.05;
    q.nonlinearity = Nonlinearity::FrozenBackground;
    const Grid1D grid = periodic(0.0, 10.0, 16, 0.01);
    WaveFunction psi0{std::vector<cplx>(16, cplx(1.0, 0.0)), 0.0};
    const auto last = split_step_evolve(psi0, q, grid, 10.0).frames.back();
    const cplx expected = std::exp(-0.05 * last.t) * background_phase(q, 0.0, last.t);
    CHECK(std::abs(last.psi[3] - expected) < 1e-6);
}

TEST_CASE("free particle against the closed form")
{
    CHECK(max_free_error(1024, 1.5, 4.0) < 1e-6);

    double previous = max_free_error(32, 0.6, 1.0);
    for (std::size_t n : {64, 128}) {
        const double err = max_free_error(n, 0.6, 1.0);
        if (previous > 1e-12) CHECK(previous / err > 10.0);
        previous = err;
    }
}

TEST_CASE("evolution guards")
{
    GpeParams p;
    const Grid1D coarse_time = periodic(-32.0, 64.0, 256, 0.2);
    WaveFunction psi{std::vector<cplx>(256, cplx(1.0, 0.0)), 0.0};
    CHECK_THROWS_AS(split_step_evolve(psi, p, coarse_time, 1.0), std::invalid_argument);

    const Grid1D grid = periodic(-32.0, 64.0, 256, 0.01);
    psi.psi[10] = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(split_step_evolve(psi, p, grid, 0.1), NumericalError);

    WaveFunction spiky{std::vector<cplx>(256, cplx(1.0, 0.0)), 0.0};
    for (std::size_t i = 0; i < 256; i += 2) spiky.psi[i] = 0.5;
    const auto evo = split_step_evolve(spiky, p, grid, 0.05);
    REQUIRE(evo.warnings.size() == 1);
    CHECK(evo.warnings[0].rfind("aliasing", 0) == 0);

    WaveFunction mismatched{std::vector<cplx>(128, cplx(1.0, 0.0)), 0.0};
    CHECK_THROWS_AS(split_step_evolve(mismatched, p, grid, 1.0), std::invalid_argument);
}

TEST_CASE("gray soliton dynamics")
{
    GpeParams p;
    const double alpha = SolitonSpec::self_consistent_alpha(p);
    Grid1D grid = periodic(-32.0, 128.0, 2048, 0.005);
    grid = Grid1D(grid.z_min(), grid.z_max(), grid.size(), grid.dt(), 12.0);
    for (double q : {0.5, 0.8, 0.95}) {
        const SolitonSpec spec{q, 0.0, 1, alpha};
        const auto r = propagate_soliton(spec, p, grid, 12.0, 100);
        CHECK(r.measured_speed == Approx(r.expected_speed).epsilon(0.02));
        CHECK(r.measured_min_density == Approx(1.0 - q * q).epsilon(0.01));
        CHECK(r.norm_drift_per_time < 1e-10);
        CHECK(r.energy_drift < 1e-6);
        CHECK(r.shape_error < 0.01);
        CHECK(r.evolution.warnings.empty());
    }
    const auto left = propagate_soliton(SolitonSpec{0.8, 0.0, -1, alpha}, p, grid, 12.0, 100);
    CHECK(left.measured_speed == Approx(-0.6).epsilon(0.02));

    const auto dark = propagate_soliton(SolitonSpec{1.0, 0.0, 1, alpha}, p, grid, 12.0, 100);
    CHECK(dark.center_drift < grid.dz());
    CHECK(dark.measured_min_density < 1e-6);
}

TEST_CASE("frozen nonlinearity is linear")
{
    GpeParams p;
    p.nonlinearity = Nonlinearity::FrozenBackground;
    const Grid1D grid = periodic(-32.0, 64.0, 512, 0.01);
    const auto psi0 = gray_soliton(SolitonSpec{0.8, 0.0, 1, 1.0}, p, grid);
    WaveFunction doubled = psi0;
    for (auto& v : doubled.psi) v *= 2.0;
    const auto a = split_step_evolve(psi0, p, grid, 2.0).frames.back();
    const auto b = split_step_evolve(doubled, p, grid, 2.0).frames.back();
    for (std::size_t i = 0; i < 512; i += 16) CHECK(std::abs(b.psi[i] - 2.0 * a.psi[i]) < 1e-12);
    CHECK(gpe_energy(psi0, p, grid) > 0.0);
}

TEST_CASE("soliton splitting")
{
    GpeParams p;
    Grid1D grid = periodic(-80.0, 160.0, 2048, 0.005);
    grid = Grid1D(grid.z_min(), grid.z_max(), grid.size(), grid.dt(), 30.0);

    const auto seed = split_seed(0.8, p, grid, {});
    CHECK(std::norm(seed.psi[1024]) == Approx(0.04).epsilon(1e-9));
    CHECK(std::norm(seed.psi[0]) == Approx(1.0).epsilon(1e-9));

    const auto r = soliton_split_experiment(0.8, p, grid, 30.0);
    CHECK(r.success);
    CHECK(r.persistent.size() == 2);
    CHECK(r.separation_monotone);
    CHECK(r.left_speed == Approx(-0.6).epsilon(0.05));
    CHECK(r.right_speed == Approx(0.6).epsilon(0.05));

    const auto degenerate = soliton_split_experiment(1.0, p, grid, 30.0);
    CHECK(degenerate.degenerate);
    CHECK_FALSE(degenerate.success);
    CHECK(degenerate.evolution.frames.empty());

    SplitOptions product;
    product.seed = SplitSeed::Product;
    const auto ps = split_seed(0.8, p, grid, product);
    CHECK(std::norm(ps.psi[1024]) == Approx(std::pow(0.36, 2)).epsilon(1e-9));
    const auto pr = soliton_split_experiment(0.8, p, grid, 30.0, product);
    CHECK(pr.persistent.size() == 2);
    CHECK(pr.left_speed < 0.0);
    CHECK(pr.right_speed > 0.0);

    CHECK_THROWS_AS(split_seed(1.0, p, grid, {}), std::invalid_argument);
    CHECK_THROWS_AS(soliton_split_experiment(0.0, p, grid, 30.0), std::invalid_argument);
}
