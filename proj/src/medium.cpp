#include "slowlight/medium.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "slowlight/errors.hpp"

namespace slowlight {

namespace {

void require(bool ok, const char* what)
{
    if (!ok) throw std::invalid_argument(std::string("MediumParams: ") + what);
}

}  // namespace

void MediumParams::validate() const
{
    require(std::isfinite(g_tilde), "g_tilde must be finite");
    require(N_a >= 0.0, "N_a must be >= 0");
    require(N_b >= 0.0, "N_b must be >= 0");
    require(L > 0.0, "L must be > 0");
    require(c > 0.0, "c must be > 0");
    require(gamma_a >= 0.0 && gamma_b >= 0.0 && gamma_e >= 0.0 && gamma_g >= 0.0,
            "decay rates must be >= 0");
    require(std::isfinite(Delta) && std::isfinite(delta), "detunings must be finite");
}

double MediumParams::g_bare() const { return g_tilde / std::sqrt(L); }

int density_exponent(MediumKind kind)
{
    switch (kind) {
    case MediumKind::AtomicEIT: return 1;
    case MediumKind::HomonuclearDimer: return 2;
    case MediumKind::HeteronuclearDimer: return 2;
    case MediumKind::HeteronuclearTrimer: return 3;
    }
    return 0;
}

std::string_view to_string(MediumKind kind)
{
    switch (kind) {
    case MediumKind::AtomicEIT: return "atomic";
    case MediumKind::HomonuclearDimer: return "homonuclear";
    case MediumKind::HeteronuclearDimer: return "heteronuclear";
    case MediumKind::HeteronuclearTrimer: return "trimer";
    }
    return "unknown";
}

MediumKind medium_kind_from_string(std::string_view name)
{
    if (name == "atomic" || name == "AtomicEIT") return MediumKind::AtomicEIT;
    if (name == "homonuclear" || name == "HomonuclearDimer") return MediumKind::HomonuclearDimer;
    if (name == "heteronuclear" || name == "HeteronuclearDimer") return MediumKind::HeteronuclearDimer;
    if (name == "trimer" || name == "HeteronuclearTrimer") return MediumKind::HeteronuclearTrimer;
    throw std::invalid_argument("unknown medium kind '" + std::string(name) + "'");
}

std::pair<double, double> transversal_rates(const MediumParams& p)
{
    return {p.gamma_a + p.gamma_b + p.gamma_g, p.gamma_a + p.gamma_b + p.gamma_e};
}

double mixing_angle(const MediumParams& p, double omega)
{
    if (omega < 0.0) throw std::invalid_argument("mixing_angle: omega must be >= 0");
    const double coupling = std::sqrt(p.collective_coupling_sq());
    if (omega == 0.0) return coupling > 0.0 ? pi / 2 : 0.0;
    return std::atan2(coupling, omega);
}

double group_velocity_for_density(const MediumParams& p, double pair_density, double omega)
{
    const auto [gamma1, gamma2] = transversal_rates(p);
    const double numerator = p.g_tilde * p.g_tilde * pair_density;
    const double denominator = omega * omega + gamma1 * gamma2;
    if (numerator == 0.0) return p.c;
    if (denominator == 0.0) return 0.0;
    return p.c / (1.0 + numerator / denominator);
}

double group_velocity(const MediumParams& p, double omega)
{
    if (omega < 0.0) throw std::invalid_argument("group_velocity: omega must be >= 0");
    const double coupling_sq = p.collective_coupling_sq();
    if (coupling_sq == 0.0) return p.c;
    if (omega == 0.0) throw StoppedLight();
    return p.c / (1.0 + coupling_sq / (omega * omega));
}

double group_velocity_with_decay(const MediumParams& p, double omega)
{
    const auto [gamma1, gamma2] = transversal_rates(p);
    const double coupling_sq = p.collective_coupling_sq();
    const double effective_sq = omega * omega + gamma1 * gamma2;
    if (coupling_sq == 0.0) return p.c;
    if (effective_sq == 0.0) throw StoppedLight();
    return p.c / (1.0 + coupling_sq / effective_sq);
}

double velocity_floor(const MediumParams& p)
{
    const auto [gamma1, gamma2] = transversal_rates(p);
    if (!(gamma1 * gamma2 > 0.0))
        throw std::domain_error("no decay floor; velocity is zero at Omega=0");
    return group_velocity_with_decay(p, 0.0);
}

MixingState mixing_state(const MediumParams& p, double omega)
{
    const double theta = mixing_angle(p, omega);
    // c cos^2(theta) evaluated without the cancellation near theta = pi/2
    const double coupling_sq = p.collective_coupling_sq();
    const double omega_sq = omega * omega;
    const double v_g = coupling_sq == 0.0 ? p.c : p.c * omega_sq / (omega_sq + coupling_sq);
    return {theta, v_g};
}

double mapping_coefficient(const MediumParams& p, double omega0, double omega_t)
{
    if (!(omega0 > 0.0)) throw std::domain_error("mapping_coefficient: undefined initial stage (Omega(0) = 0)");
    const double coupling_sq = p.collective_coupling_sq();
    const double ratio = (omega0 * omega0 + coupling_sq) / (omega_t * omega_t + coupling_sq);
    return -(p.g_bare() * std::sqrt(p.N_a * p.N_b) / omega0) * std::sqrt(ratio);
}

std::pair<double, double> split_populations(double N_total, double eta)
{
    if (!(N_total >= 0.0)) throw std::invalid_argument("N_total must be >= 0");
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
    if (std::isinf(eta)) return {0.0, N_total};
    return {N_total / (1.0 + eta), eta * N_total / (1.0 + eta)};
}

double effective_pair_density(MediumKind kind, double N_total, double eta)
{
    if (!(N_total > 0.0)) throw std::invalid_argument("effective_pair_density: N_total must be > 0");
    switch (kind) {
    case MediumKind::AtomicEIT: return N_total;
    case MediumKind::HomonuclearDimer: return N_total * N_total;
    case MediumKind::HeteronuclearDimer:
        if (!(eta > 0.0)) throw std::invalid_argument("effective_pair_density: eta must be > 0");
        // N_a N_b = N^2 eta/(1+eta)^2, written so that eta <-> 1/eta is bitwise symmetric.
        return N_total * N_total / ((1.0 + eta) * (1.0 + 1.0 / eta));
    case MediumKind::HeteronuclearTrimer: return N_total * N_total * N_total / 27.0;
    }
    return 0.0;
}

}  // namespace slowlight
