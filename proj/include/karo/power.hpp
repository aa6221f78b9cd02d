#pragma once

// Battery endurance and energy budgeting: coulomb counting with a linear
// voltage sag, optionally calibrated by a mid-discharge knee point.  No
// Peukert effect, chemistry, or temperature modeling.

#include <stdexcept>
#include <string>
#include <vector>

#include "karo/spec.hpp"

namespace karo {

struct MissionProfile {
    std::string name;
    double avg_actuator_current_a = 0.0;
    double avg_electronics_current_a = 0.0;
    double duration_requested_min = 0.0;
    std::string provenance;  // where the currents come from
};

struct EnduranceReport {
    std::string profile;
    double actuator_minutes = 0.0;
    double electronics_minutes = 0.0;
    double actuator_energy_wh = 0.0;     // at nominal voltage over the endurance horizon
    double electronics_energy_wh = 0.0;
    bool meets_30min_mission = false;
};

struct DischargeSample {
    double t_min = 0.0;
    double voltage_v = 0.0;
};

// Coulomb counting: minutes to cutoff at a constant average draw.
// Errors when the draw exceeds the pack's c-rating burst limit.
inline double endurance_estimate(const BatterySpec& battery, double avg_current_a) {
    if (!(avg_current_a > 0.0)) throw std::invalid_argument("average current must be positive");
    if (avg_current_a > battery.burst_current_a())
        throw std::invalid_argument("average current " + std::to_string(avg_current_a) +
                                    " A exceeds c-rating burst limit " +
                                    std::to_string(battery.burst_current_a()) + " A");
    return 60.0 * (battery.capacity_mah / 1000.0) / avg_current_a;
}

// Voltage at elapsed fraction u in [0,1] of the discharge horizon.
// Piecewise-linear: full -> optional knee -> cutoff.
inline double discharge_voltage_at(const BatterySpec& b, double u) {
    if (u <= 0.0) return b.full_voltage_v;
    if (u >= 1.0) return b.cutoff_voltage_v;
    if (b.sag_knee_fraction > 0.0) {
        if (u <= b.sag_knee_fraction)
            return b.full_voltage_v +
                   (b.sag_knee_voltage_v - b.full_voltage_v) * (u / b.sag_knee_fraction);
        return b.sag_knee_voltage_v + (b.cutoff_voltage_v - b.sag_knee_voltage_v) *
                                          ((u - b.sag_knee_fraction) / (1.0 - b.sag_knee_fraction));
    }
    return b.full_voltage_v + (b.cutoff_voltage_v - b.full_voltage_v) * u;
}

// Monotone non-increasing series from full voltage at t=0 to cutoff at the
// endurance horizon, sampled every `step_s` seconds.
inline std::vector<DischargeSample> discharge_curve(const BatterySpec& battery,
                                                    double avg_current_a, double step_s) {
    if (!(step_s > 0.0)) throw std::invalid_argument("step must be positive");
    double horizon_min = endurance_estimate(battery, avg_current_a);
    std::vector<DischargeSample> series;
    double step_min = step_s / 60.0;
    size_t n = size_t(horizon_min / step_min);
    series.reserve(n + 2);
    for (size_t i = 0; i <= n; ++i) {
        double t = double(i) * step_min;
        series.push_back({t, discharge_voltage_at(battery, t / horizon_min)});
    }
    if (series.back().t_min < horizon_min)
        series.push_back({horizon_min, battery.cutoff_voltage_v});
    return series;
}

inline EnduranceReport mission_energy(const MissionProfile& profile, const RobotSpec& spec) {
    EnduranceReport r;
    r.profile = profile.name;
    if (profile.avg_actuator_current_a > 0.0) {
        r.actuator_minutes = endurance_estimate(spec.actuator_battery, profile.avg_actuator_current_a);
        r.actuator_energy_wh = spec.actuator_battery.nominal_voltage_v *
                               profile.avg_actuator_current_a * r.actuator_minutes / 60.0;
    }
    if (profile.avg_electronics_current_a > 0.0) {
        r.electronics_minutes =
            endurance_estimate(spec.electronics_battery, profile.avg_electronics_current_a);
        r.electronics_energy_wh = spec.electronics_battery.nominal_voltage_v *
                                  profile.avg_electronics_current_a * r.electronics_minutes / 60.0;
    }
    double limiting = r.actuator_minutes;
    if (profile.avg_electronics_current_a > 0.0)
        limiting = profile.avg_actuator_current_a > 0.0
                       ? std::min(r.actuator_minutes, r.electronics_minutes)
                       : r.electronics_minutes;
    // A zero-duration request is trivially feasible; otherwise the limiting
    // pack must cover max(requested, 30 min).
    double needed = std::max(profile.duration_requested_min, 30.0);
    r.meets_30min_mission = profile.duration_requested_min <= 0.0 ||
                            (limiting > 0.0 && limiting >= needed);
    if (profile.duration_requested_min > 0.0 && profile.avg_actuator_current_a <= 0.0 &&
        profile.avg_electronics_current_a <= 0.0)
        r.meets_30min_mission = true;  // no draw at all
    return r;
}

// Bundled mission profiles.  The average currents are back-computed from
// the published endurance figures (600 Ah-min pack divided by the reported
// minutes); they are consistency anchors, not independent predictions.
inline std::vector<MissionProfile> bundled_profiles() {
    return {
        {"center", 600.0 / 74.0, 4.0, 30.0, "derived: inverted 74 min reported endurance"},
        {"crossover", 600.0 / 62.0, 4.0, 30.0, "assumption: between center and stair_debris"},
        {"traverse", 600.0 / 55.0, 4.0, 30.0, "assumption: between center and stair_debris"},
        {"stair_debris", 600.0 / 42.0, 4.0, 30.0, "derived: inverted 42 min reported endurance"},
    };
}

inline const MissionProfile* find_profile(const std::vector<MissionProfile>& profiles,
                                          const std::string& name) {
    for (const auto& p : profiles)
        if (p.name == name) return &p;
    return nullptr;
}

}  // namespace karo
