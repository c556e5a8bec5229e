#include "slowlight/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "slowlight/units.hpp"

namespace slowlight {

ControlSchedule::ControlSchedule(TanhRamp ramp) : form_(ramp)
{
    if (!(ramp.omega0 >= 0.0)) throw std::invalid_argument("TanhRamp: omega0 must be >= 0");
    if (!(ramp.rate > 0.0)) throw std::invalid_argument("TanhRamp: rate must be > 0");
    if (!(ramp.t_down <= ramp.t_up)) throw std::invalid_argument("TanhRamp: t_down must not exceed t_up");
}

ControlSchedule::ControlSchedule(Tabulated table) : form_(std::move(table))
{
    const auto& tab = std::get<Tabulated>(form_);
    if (tab.times.size() < 2 || tab.times.size() != tab.values.size())
        throw std::invalid_argument("Tabulated: need >= 2 (time, value) pairs of equal length");
    for (std::size_t i = 1; i < tab.times.size(); ++i)
        if (!(tab.times[i] > tab.times[i - 1]))
            throw std::invalid_argument("Tabulated: times must be strictly increasing");
    for (double v : tab.values)
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("Tabulated: values must be finite and >= 0");
}

namespace {

double evaluate(const TanhRamp& r, double t)
{
    return r.omega0 * (1.0 - 0.5 * std::tanh(r.rate * (t - r.t_down)) + 0.5 * std::tanh(r.rate * (t - r.t_up)));
}

double evaluate(const Tabulated& tab, double t)
{
    if (t <= tab.times.front()) return tab.values.front();
    if (t >= tab.times.back()) return tab.values.back();
    const auto it = std::upper_bound(tab.times.begin(), tab.times.end(), t);
    const auto i = static_cast<std::size_t>(it - tab.times.begin());
    const double w = (t - tab.times[i - 1]) / (tab.times[i] - tab.times[i - 1]);
    return (1.0 - w) * tab.values[i - 1] + w * tab.values[i];
}

}  // namespace

double ControlSchedule::operator()(double t) const
{
    return std::visit([t](const auto& f) { return std::max(0.0, evaluate(f, t)); }, form_);
}

double ControlSchedule::plateau() const
{
    if (const auto* r = std::get_if<TanhRamp>(&form_)) return r->omega0;
    const auto& tab = std::get<Tabulated>(form_);
    return *std::max_element(tab.values.begin(), tab.values.end());
}

double ControlSchedule::storage_time() const
{
    if (const auto* r = std::get_if<TanhRamp>(&form_)) return 0.5 * (r->t_down + r->t_up);
    const auto& tab = std::get<Tabulated>(form_);
    const auto it = std::min_element(tab.values.begin(), tab.values.end());
    return tab.times[static_cast<std::size_t>(it - tab.values.begin())];
}

double ControlSchedule::storage_duration() const
{
    if (const auto* r = std::get_if<TanhRamp>(&form_)) return r->t_up - r->t_down;
    const auto& tab = std::get<Tabulated>(form_);
    const double threshold = 0.01 * plateau();
    double first = 0.0, last = 0.0;
    bool found = false;
    for (std::size_t i = 0; i < tab.times.size(); ++i) {
        if (tab.values[i] < threshold) {
            if (!found) first = tab.times[i];
            last = tab.times[i];
            found = true;
        }
    }
    return found ? last - first : 0.0;
}

ControlSchedule default_storage_schedule()
{
    return ControlSchedule(TanhRamp{10.0 * pi, 15.0, 125.0, 0.15});
}

}  // namespace slowlight
