#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "slowlight/errors.hpp"
#include "slowlight/medium.hpp"

using namespace slowlight;
using doctest::Approx;

namespace {

MediumParams balanced(double N, double g_tilde = 2.0e-5)
{
    MediumParams p;
    p.g_tilde = g_tilde;
    p.N_a = N / 2;
    p.N_b = N / 2;
    return p;
}

MediumParams krb()
{
    MediumParams p;
    p.g_tilde = units::per_s_to_per_us(50.0);
    p.N_a = 1.0e6;
    p.N_b = 5.0e6;
    p.gamma_g = units::hz_to_rad_per_us(97.0);
    p.gamma_e = units::hz_to_rad_per_us(5.7e6);
    return p;
}

}  // namespace

TEST_CASE("params validation names the broken invariant")
{
    MediumParams p = balanced(3e6);
    CHECK_NOTHROW(p.validate());
    p.N_a = -1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = balanced(3e6);
    p.L = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = balanced(3e6);
    p.gamma_e = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = balanced(3e6);
    p.L = 70.0;
    p.g_tilde = 7.0;
    CHECK(p.g_bare() == Approx(7.0 / std::sqrt(70.0)));
}

TEST_CASE("mixing angle limits")
{
    const MediumParams p = balanced(3e6);
    const double G = std::sqrt(p.collective_coupling_sq());
    CHECK(mixing_angle(p, 1e9 * G) == Approx(0.0).epsilon(1e-9));
    CHECK(mixing_angle(p, G) == Approx(pi / 4));
    CHECK(mixing_angle(p, 0.0) == pi / 2);

    MediumParams empty = p;
    empty.N_b = 0;
    CHECK(mixing_angle(empty, 0.0) == 0.0);
}

TEST_CASE("group velocity examples")
{
    const MediumParams p = balanced(3e6);
    const double G = std::sqrt(p.collective_coupling_sq());
    CHECK(group_velocity(p, G) == Approx(p.c / 2));

    MediumParams no_pairs = p;
    no_pairs.N_b = 0;
    CHECK(group_velocity(no_pairs, 1.0) == p.c);

    CHECK_THROWS_AS(group_velocity(p, 0.0), StoppedLight);
    CHECK_THROWS_AS(group_velocity(p, 0.0), std::domain_error);

    // doubling N at balance quadruples c/v_g - 1
    const double omega = 10.0;
    const double r1 = p.c / group_velocity(balanced(3e6), omega) - 1.0;
    const double r2 = p.c / group_velocity(balanced(6e6), omega) - 1.0;
    CHECK(r2 / r1 == Approx(4.0).epsilon(1e-12));
}

TEST_CASE("group velocity properties over a parameter grid")
{
    for (double N : {1e3, 1e5, 3e6, 1e8}) {
        const MediumParams p = balanced(N);
        double previous = 0.0;
        for (double omega = 1e-3; omega < 1e4; omega *= 1.7) {
            const double vg = group_velocity(p, omega);
            CHECK(vg > 0.0);
            CHECK(vg <= p.c);
            CHECK(vg >= previous);
            previous = vg;
            CHECK((p.c / vg - 1.0) == Approx(p.collective_coupling_sq() / (omega * omega)).epsilon(1e-12));
            const auto state = mixing_state(p, omega);
            CHECK(state.v_g == Approx(vg).epsilon(1e-12));
            const double cos_theta = std::cos(state.theta);
            if (cos_theta > 1e-3) CHECK(p.c * cos_theta * cos_theta == Approx(vg).epsilon(1e-9));
            CHECK(std::tan(state.theta) * std::tan(state.theta) * omega * omega ==
                  Approx(p.collective_coupling_sq()).epsilon(1e-10));

            MediumParams lossy = p;
            lossy.gamma_e = 3.0;
            lossy.gamma_g = 0.01;
            CHECK(group_velocity_with_decay(lossy, omega) >= vg);
        }
    }
}

TEST_CASE("decay substitution")
{
    const MediumParams p = balanced(3e6);
    for (double omega : {0.1, 1.0, 31.4})
        CHECK(group_velocity_with_decay(p, omega) == group_velocity(p, omega));
    CHECK_THROWS_AS(group_velocity_with_decay(p, 0.0), StoppedLight);

    const MediumParams k = krb();
    CHECK(units::um_per_us_to_km_per_s(group_velocity_with_decay(k, 0.0)) == Approx(0.524).epsilon(0.01));
    CHECK(group_velocity_with_decay(k, 1e8) == Approx(k.c).epsilon(1e-9));
}

TEST_CASE("velocity floor")
{
    const MediumParams k = krb();
    CHECK(units::um_per_us_to_km_per_s(velocity_floor(k)) == Approx(0.524).epsilon(0.01));

    // gamma_1 gamma_2 = (2 pi 97)(2 pi 5.7e6) s^-2
    const auto [g1, g2] = transversal_rates(k);
    const double product_per_s2 = g1 * g2 * units::us_per_s * units::us_per_s;
    CHECK(product_per_s2 == Approx(2.18e10).epsilon(0.005));

    CHECK_THROWS_WITH_AS(velocity_floor(balanced(3e6)), "no decay floor; velocity is zero at Omega=0",
                         std::domain_error);
    MediumParams free = k;
    free.g_tilde = 0.0;
    CHECK(velocity_floor(free) == free.c);
}

TEST_CASE("mapping coefficient")
{
    MediumParams p = balanced(2.0, 0.1);
    p.L = 70.0;
    const double G = std::sqrt(p.collective_coupling_sq());

    CHECK(std::abs(mapping_coefficient(p, 1e6 * G, 1e6 * G)) < 1e-6);
    const double omega0 = 3.0;
    CHECK(mapping_coefficient(p, omega0, omega0) == Approx(-p.g_bare() * std::sqrt(p.N_a * p.N_b) / omega0));
    // strong initial stage then Omega -> 0: sqrt(L) k -> -1
    const double k = mapping_coefficient(p, 1e4 * G, 0.0);
    CHECK(std::sqrt(p.L) * k == Approx(-1.0).epsilon(1e-7));
    CHECK(mapping_coefficient(p, 1.0, 0.5) <= 0.0);
    CHECK_THROWS_AS(mapping_coefficient(p, 0.0, 1.0), std::domain_error);
}

TEST_CASE("effective pair density")
{
    CHECK(effective_pair_density(MediumKind::HeteronuclearDimer, 3.0e6, 1.0) == Approx(2.25e12));
    CHECK(effective_pair_density(MediumKind::AtomicEIT, 1234.0, 7.0) == 1234.0);
    CHECK(effective_pair_density(MediumKind::HomonuclearDimer, 10.0, 1.0) == 100.0);
    CHECK(effective_pair_density(MediumKind::HeteronuclearTrimer, 3.0, 1.0) == Approx(1.0));
    CHECK(effective_pair_density(MediumKind::HeteronuclearDimer, 3.0e6, 1e12) < 1e-10 * 2.25e12);
    CHECK_THROWS_AS(effective_pair_density(MediumKind::AtomicEIT, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(effective_pair_density(MediumKind::HeteronuclearDimer, 1.0, -1.0), std::invalid_argument);

    // maximized at eta = 1 and symmetric under eta <-> 1/eta
    const double peak = effective_pair_density(MediumKind::HeteronuclearDimer, 3e6, 1.0);
    for (double eta : {1.0 / 15, 0.25, 0.5, 0.9, 1.1, 2.0, 4.0, 15.0}) {
        const double d = effective_pair_density(MediumKind::HeteronuclearDimer, 3e6, eta);
        CHECK(d < peak);
        CHECK(d == effective_pair_density(MediumKind::HeteronuclearDimer, 3e6, 1.0 / eta));
        const auto [na, nb] = split_populations(3e6, eta);
        CHECK(na * nb == Approx(d).epsilon(1e-12));
        CHECK(na + nb == Approx(3e6));
    }
}

TEST_CASE("density exponents and kind names")
{
    CHECK(density_exponent(MediumKind::AtomicEIT) == 1);
    CHECK(density_exponent(MediumKind::HomonuclearDimer) == 2);
    CHECK(density_exponent(MediumKind::HeteronuclearDimer) == 2);
    CHECK(density_exponent(MediumKind::HeteronuclearTrimer) == 3);
    for (auto kind : {MediumKind::AtomicEIT, MediumKind::HomonuclearDimer, MediumKind::HeteronuclearDimer,
                      MediumKind::HeteronuclearTrimer}) {
        CHECK(medium_kind_from_string(to_string(kind)) == kind);
        const MediumParams p = balanced(1.0);
        // slope of log(c/v_g - 1) against log N over two decades
        const double lo = group_velocity_for_density(p, effective_pair_density(kind, 1e5, 1.0), 10.0);
        const double hi = group_velocity_for_density(p, effective_pair_density(kind, 1e7, 1.0), 10.0);
        const double slope = std::log((p.c / hi - 1) / (p.c / lo - 1)) / std::log(100.0);
        CHECK(slope == Approx(density_exponent(kind)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(medium_kind_from_string("plasma"), std::invalid_argument);
}

TEST_CASE("transversal rates")
{
    MediumParams p;
    CHECK(transversal_rates(p) == std::pair{0.0, 0.0});
    p.gamma_e = 4.5;
    CHECK(transversal_rates(p) == std::pair{0.0, 4.5});
    p.gamma_a = 1;
    p.gamma_b = 2;
    p.gamma_g = 3;
    CHECK(transversal_rates(p) == std::pair{6.0, 7.5});
    const auto [g1, g2] = transversal_rates(krb());
    CHECK(g1 == units::hz_to_rad_per_us(97.0));
    CHECK(g2 == units::hz_to_rad_per_us(5.7e6));
}
