// medium.hpp - hybrid atom-molecule medium and its closed-form optics
//
// All quantities use the internal units of units.hpp. The collective
// coupling g_tilde = g * sqrt(L) is the only coupling stored; the bare g
// is recovered as g_tilde / sqrt(L) where the field equations need it.

#pragma once

#include <string_view>
#include <utility>

#include "slowlight/units.hpp"

namespace slowlight {

struct MediumParams {
    double g_tilde = 0.0;                   // rad/us per sqrt(pair)
    double L = units::um_per_mm;            // quantization length, um
    double c = units::speed_of_light;       // um/us
    double N_a = 0.0;
    double N_b = 0.0;
    double gamma_a = 0.0;
    double gamma_b = 0.0;
    double gamma_e = 0.0;
    double gamma_g = 0.0;
    double Delta = 0.0;                     // one-photon detuning
    double delta = 0.0;                     // two-photon detuning

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;

    /// Bare photon-matter coupling g = g_tilde / sqrt(L).
    double g_bare() const;

    /// g_tilde^2 N_a N_b, the squared collective Rabi frequency of the pair channel.
    double collective_coupling_sq() const { return g_tilde * g_tilde * N_a * N_b; }

    bool operator==(const MediumParams&) const = default;
};

enum class MediumKind { AtomicEIT, HomonuclearDimer, HeteronuclearDimer, HeteronuclearTrimer };

/// Exponent of N_total in the effective pair density: 1, 2, 2, 3.
int density_exponent(MediumKind kind);
std::string_view to_string(MediumKind kind);
/// Accepts the enum spelling or the short names atomic/homonuclear/heteronuclear/trimer.
MediumKind medium_kind_from_string(std::string_view name);

struct MixingState {
    double theta = 0.0;
    double v_g = 0.0;
};

/// Transversal decay rates (gamma_1, gamma_2) = (g_a+g_b+g_g, g_a+g_b+g_e).
std::pair<double, double> transversal_rates(const MediumParams& p);

/// theta = atan(sqrt(g~^2 N_a N_b) / Omega), in [0, pi/2].
double mixing_angle(const MediumParams& p, double omega);

/// c / (1 + g~^2 N_a N_b / Omega^2). Throws StoppedLight at Omega = 0
/// unless the medium is transparent (no pairs).
double group_velocity(const MediumParams& p, double omega);

/// group_velocity with Omega^2 -> Omega^2 + gamma_1 gamma_2.
double group_velocity_with_decay(const MediumParams& p, double omega);

/// Group velocity at Omega = 0 with decay. Throws std::domain_error if gamma_1 gamma_2 = 0.
double velocity_floor(const MediumParams& p);

/// Mixing angle and group velocity together (v_g = c cos^2 theta).
MixingState mixing_state(const MediumParams& p, double omega);

/// Coefficient k of phi_g ~ k E(z - s, 0). Throws std::domain_error for omega0 = 0.
double mapping_coefficient(const MediumParams& p, double omega0, double omega_t);

/// Pair density entering g~^2 (...) for each medium kind at total count N and
/// imbalance eta = N_b / N_a (eta only used by the heteronuclear dimer).
double effective_pair_density(MediumKind kind, double N_total, double eta);

/// Balanced-or-imbalanced two-species split N_a = N/(1+eta), N_b = eta N/(1+eta).
std::pair<double, double> split_populations(double N_total, double eta);

/// c / (1 + g~^2 n / (Omega^2 + gamma_1 gamma_2)) for an explicit pair density n.
/// Returns 0 when the denominator vanishes with n > 0.
double group_velocity_for_density(const MediumParams& p, double pair_density, double omega);

}  // namespace slowlight
