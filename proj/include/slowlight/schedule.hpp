// schedule.hpp - classical coupling field Omega(t)

#pragma once

#include <variant>
#include <vector>

namespace slowlight {

/// Omega(t) = omega0 (1 - 0.5 tanh[rate (t - t_down)] + 0.5 tanh[rate (t - t_up)]).
struct TanhRamp {
    double omega0 = 0.0;
    double t_down = 0.0;
    double t_up = 0.0;
    double rate = 1.0;

    bool operator==(const TanhRamp&) const = default;
};

/// Piecewise-linear table, held constant outside [times.front(), times.back()].
struct Tabulated {
    std::vector<double> times;
    std::vector<double> values;

    bool operator==(const Tabulated&) const = default;
};

class ControlSchedule {
public:
    ControlSchedule() = default;
    explicit ControlSchedule(TanhRamp ramp);
    explicit ControlSchedule(Tabulated table);

    double operator()(double t) const;

    /// Largest Omega the schedule attains (omega0 for a ramp).
    double plateau() const;

    /// Time of the storage stage: ramp midpoint, or the argmin of the table.
    double storage_time() const;

    /// Duration of the dark interval (t_up - t_down for a ramp, else the
    /// span where Omega stays below 1% of the plateau).
    double storage_duration() const;

    const std::variant<TanhRamp, Tabulated>& form() const { return form_; }

    bool operator==(const ControlSchedule&) const = default;

private:
    std::variant<TanhRamp, Tabulated> form_{TanhRamp{}};
};

/// The storage/retrieval ramp: 10 pi rad/us, switched off around 15 us and back on around 125 us.
ControlSchedule default_storage_schedule();

}  // namespace slowlight
