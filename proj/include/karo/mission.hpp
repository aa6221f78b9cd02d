#pragma once

// Quasi-static obstacle negotiation in the sagittal plane: posture COM,
// tipover margin against the support interval, step/gap/ramp/stair
// feasibility, and the flipper-configuration comparison.  Rigid body,
// point contacts at track extremes and flipper tips, no slip.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "karo/spec.hpp"
#include "karo/statics.hpp"

namespace karo {

enum class FlipperVariant {
    None,                   // case a
    FrontPairRegular,       // case b
    FrontPairTriangular,    // case c
    TwoPairTwoLink,         // case d
    TriangularPlusRegular,  // case e
    TwoPairRegular,         // case f, the selected design
};

// Effective lever fraction of lb contributed by non-regular flipper shapes.
inline constexpr double kTriangularLeverFraction = 0.6;
// Two-link flippers modeled with a fixed second-link angle; this is the
// resulting tip-extension fraction.  Documented approximation.
inline constexpr double kTwoLinkLeverFraction = 0.85;

struct FlipperConfig {
    FlipperVariant variant = FlipperVariant::TwoPairRegular;
    double lb_m = 0.0;  // flipper length
    double la_m = 0.0;  // pivot offset from center

    // Horizontal distance from chassis center to the extreme front/rear
    // ground contact with flippers extended flat.
    double front_contact_m() const {
        switch (variant) {
            case FlipperVariant::None: return la_m;
            case FlipperVariant::FrontPairRegular: return la_m + lb_m;
            case FlipperVariant::FrontPairTriangular: return la_m + kTriangularLeverFraction * lb_m;
            case FlipperVariant::TwoPairTwoLink: return la_m + kTwoLinkLeverFraction * lb_m;
            case FlipperVariant::TriangularPlusRegular: return la_m + lb_m;
            case FlipperVariant::TwoPairRegular: return la_m + lb_m;
        }
        return la_m;
    }
    double rear_contact_m() const {
        switch (variant) {
            case FlipperVariant::None: return la_m;
            case FlipperVariant::FrontPairRegular: return la_m;
            case FlipperVariant::FrontPairTriangular: return la_m;
            case FlipperVariant::TwoPairTwoLink: return la_m + kTwoLinkLeverFraction * lb_m;
            case FlipperVariant::TriangularPlusRegular: return la_m + kTriangularLeverFraction * lb_m;
            case FlipperVariant::TwoPairRegular: return la_m + lb_m;
        }
        return la_m;
    }
};

inline FlipperConfig flipper_config(const RobotSpec& spec,
                                    FlipperVariant variant = FlipperVariant::TwoPairRegular) {
    return {variant, spec.levers.lb, spec.levers.la};
}

struct PlanarPoint {
    double x = 0.0;
    double z = 0.0;
};

struct Posture {
    double pitch_rad = 0.0;        // chassis pitch, nose-up positive
    double beta_front_rad = 0.0;   // front flipper angle
    double beta_rear_rad = 0.0;
    std::vector<double> contact_x;  // resolved ground contacts, world x
    PlanarPoint origin;             // chassis center in world coordinates
};

// Mass-weighted side-view COM in chassis coordinates (x forward from
// center O, z up from ground at zero pitch).  Symmetric flipper pairs at
// equal and opposite angles contribute no net x offset.
inline PlanarPoint com_position(const RobotSpec& spec, const Posture& posture) {
    double m1 = spec.chassis_mass_kg;
    double m2 = spec.flipper_pair_mass_kg;
    double m3 = spec.manipulator_mass_kg;
    double total = m1 + 2.0 * m2 + m3;
    const Levers& lv = spec.levers;
    double half_lb = lv.lb / 2.0;

    double front_x = lv.la + half_lb * std::cos(posture.beta_front_rad);
    double rear_x = -lv.la - half_lb * std::cos(posture.beta_rear_rad);
    double front_z = spec.track_radius_m + half_lb * std::sin(posture.beta_front_rad);
    double rear_z = spec.track_radius_m + half_lb * std::sin(posture.beta_rear_rad);

    PlanarPoint com;
    com.x = (m1 * lv.l1 + m3 * lv.l3 + m2 * front_x + m2 * rear_x) / total;
    com.z = (m1 * spec.com_height_m + m3 * spec.com_height_m + m2 * front_z + m2 * rear_z) / total;
    return com;
}

inline PlanarPoint com_world(const RobotSpec& spec, const Posture& posture) {
    PlanarPoint c = com_position(spec, posture);
    double cp = std::cos(posture.pitch_rad), sp = std::sin(posture.pitch_rad);
    return {posture.origin.x + c.x * cp - c.z * sp, posture.origin.z + c.x * sp + c.z * cp};
}

// Signed horizontal distance from the COM to the nearest edge of the
// support interval (hull of contact x's).  Negative means tipover.
inline double stability_margin(const RobotSpec& spec, const Posture& posture) {
    if (posture.contact_x.empty())
        throw std::invalid_argument("static posture requires at least one contact");
    double lo = *std::min_element(posture.contact_x.begin(), posture.contact_x.end());
    double hi = *std::max_element(posture.contact_x.begin(), posture.contact_x.end());
    double comx = com_world(spec, posture).x;
    return std::min(comx - lo, hi - comx);
}

// Flat-ground posture with both flipper pairs down at the given angles.
inline Posture flat_posture(const RobotSpec& spec, double beta_front = 0.0, double beta_rear = 0.0) {
    Posture p;
    p.beta_front_rad = beta_front;
    p.beta_rear_rad = beta_rear;
    double front = spec.levers.la + spec.levers.lb * std::cos(beta_front);
    double rear = spec.levers.la + spec.levers.lb * std::cos(beta_rear);
    p.contact_x = {-rear, front};
    return p;
}

// Posture on a uniform slope, uphill along +x, chassis centered at the
// slope origin; contacts expressed by their world-x coordinates.
inline Posture ramp_posture(const RobotSpec& spec, double slope_rad) {
    Posture p;
    p.pitch_rad = slope_rad;
    double span = spec.levers.la + spec.levers.lb;  // flippers flat on the slope
    p.contact_x = {-span * std::cos(slope_rad), span * std::cos(slope_rad)};
    return p;
}

enum class Feasibility { Feasible, InfeasibleReach, InfeasibleTipover, InfeasibleTorque };

inline std::string to_string(Feasibility f) {
    switch (f) {
        case Feasibility::Feasible: return "feasible";
        case Feasibility::InfeasibleReach: return "infeasible:reach";
        case Feasibility::InfeasibleTipover: return "infeasible:tipover";
        case Feasibility::InfeasibleTorque: return "infeasible:torque";
    }
    return "?";
}

struct StepVerdict {
    Feasibility feasibility = Feasibility::InfeasibleReach;
    double best_pitch_rad = 0.0;      // selected climbing pitch (if any lift reaches)
    double stability_margin_m = 0.0;  // at the selected pitch
    double torque_demand_nm = 0.0;    // per traction motor at the selected pitch
    double torque_margin = 0.0;
    double max_lift_m = 0.0;          // geometric lift ceiling for this config
};

// Climbing model: the chassis pitches about the extreme rear contact while
// the extreme front contact rides up the step face.  A step of height h is
// negotiable when some pitch lifts the front contact to h while the COM
// stays inside the horizontal support interval and the traction chain can
// hold the equivalent slope.  Pitch sweep: 1 degree steps up to 60.
inline StepVerdict step_feasibility(const RobotSpec& spec, const FlipperConfig& config,
                                    double step_height_m) {
    constexpr double kMaxPitchDeg = 60.0;
    StepVerdict v;
    double xf = config.front_contact_m();
    double xr = -config.rear_contact_m();
    double span = xf - xr;
    v.max_lift_m = span * std::sin(deg2rad(kMaxPitchDeg));
    if (step_height_m <= 0.0) {
        v.feasibility = Feasibility::Feasible;
        v.stability_margin_m = stability_margin(spec, flat_posture(spec));
        return v;
    }
    if (step_height_m > v.max_lift_m) {
        v.feasibility = Feasibility::InfeasibleReach;
        return v;
    }

    PlanarPoint com;
    {
        Posture flat;  // betas flat; contacts irrelevant for the COM itself
        com = com_position(spec, flat);
    }

    bool any_reaches = false, any_stable = false;
    double best_margin = -1e9;
    for (int deg = 1; deg <= int(kMaxPitchDeg); ++deg) {
        double phi = deg2rad(double(deg));
        double lift = span * std::sin(phi);
        if (lift + 1e-12 < step_height_m) continue;
        any_reaches = true;

        // COM and front contact in world coordinates, pivot at rear contact.
        double comx = xr + (com.x - xr) * std::cos(phi) - com.z * std::sin(phi);
        double frontx = xr + span * std::cos(phi);
        double margin = std::min(comx - xr, frontx - comx);
        if (margin < 0.0) continue;
        any_stable = true;

        OperatingPoint op = operating_point_check(
            spec.traction_drivetrain,
            traction_torque(ramp_case(spec, phi, false), spec.traction_drivetrain.motors_in_parallel));
        if (op.margin < 0.0) continue;

        if (margin > best_margin) {
            best_margin = margin;
            v.best_pitch_rad = phi;
            v.stability_margin_m = margin;
            v.torque_demand_nm = op.required_output_torque_nm;
            v.torque_margin = op.margin;
            v.feasibility = Feasibility::Feasible;
        }
    }
    if (v.feasibility == Feasibility::Feasible) return v;
    if (!any_reaches) v.feasibility = Feasibility::InfeasibleReach;
    else if (!any_stable) v.feasibility = Feasibility::InfeasibleTipover;
    else v.feasibility = Feasibility::InfeasibleTorque;
    return v;
}

// Largest negotiable step height for a configuration, by bisection on the
// monotone feasibility predicate.
inline double max_feasible_step(const RobotSpec& spec, const FlipperConfig& config) {
    double lo = 0.0, hi = 2.0;
    if (step_feasibility(spec, config, hi).feasibility == Feasibility::Feasible) return hi;
    for (int i = 0; i < 40; ++i) {
        double mid = (lo + hi) / 2.0;
        if (step_feasibility(spec, config, mid).feasibility == Feasibility::Feasible) lo = mid;
        else hi = mid;
    }
    return lo;
}

struct GapVerdict {
    Feasibility feasibility = Feasibility::Feasible;
    double min_margin_m = 0.0;  // worst stability margin over the crossing
    double critical_offset_m = 0.0;
};

// Crossing with flippers extended flat: as the gap window slides under the
// track line, the COM must stay over the hull of the remaining supported
// segments.  Offsets sampled at 5 mm.
inline GapVerdict gap_feasibility(const RobotSpec& spec, double gap_width_m) {
    if (!(gap_width_m > 0.0)) throw std::invalid_argument("gap width must be positive");
    constexpr double kStep = 0.005;
    double span = spec.levers.la + spec.levers.lb;
    double comx = com_position(spec, Posture{}).x;

    GapVerdict v;
    v.min_margin_m = span;
    for (double u = -span - gap_width_m; u <= span + 1e-12; u += kStep) {
        // Supported segments: [-span, u] and [u + w, span], clipped.
        double left_hi = std::min(u, span);
        double right_lo = std::max(u + gap_width_m, -span);
        bool left_ok = left_hi > -span;
        bool right_ok = right_lo < span;
        double lo, hi;
        if (left_ok && right_ok) { lo = -span; hi = span; }
        else if (left_ok) { lo = -span; hi = left_hi; }
        else if (right_ok) { lo = right_lo; hi = span; }
        else {
            v.feasibility = Feasibility::InfeasibleReach;  // nothing under the tracks
            v.min_margin_m = -span;
            v.critical_offset_m = u;
            return v;
        }
        double margin = std::min(comx - lo, hi - comx);
        if (margin < v.min_margin_m) {
            v.min_margin_m = margin;
            v.critical_offset_m = u;
        }
    }
    if (v.min_margin_m < 0.0) v.feasibility = Feasibility::InfeasibleTipover;
    return v;
}

// Ramps and stairs share the slope model.  Feasible when the posture is
// stable and the traction demand stays within the continuous capability
// times a short-duration overload allowance; the continuous margin is
// reported either way.
inline constexpr double kSlopeOverloadAllowance = 1.2;

struct SlopeVerdict {
    Feasibility feasibility = Feasibility::Feasible;
    double stability_margin_m = 0.0;
    double torque_demand_nm = 0.0;  // per motor
    double torque_margin = 0.0;     // vs continuous capability
    bool within_continuous = false;
};

inline SlopeVerdict slope_feasibility(const RobotSpec& spec, double slope_rad) {
    SlopeVerdict v;
    Posture p = ramp_posture(spec, slope_rad);
    v.stability_margin_m = stability_margin(spec, p);
    OperatingPoint op = operating_point_check(
        spec.traction_drivetrain,
        traction_torque(ramp_case(spec, slope_rad, false), spec.traction_drivetrain.motors_in_parallel));
    v.torque_demand_nm = op.required_output_torque_nm;
    v.torque_margin = op.margin;
    v.within_continuous = op.margin >= 0.0;
    if (v.stability_margin_m < 0.0) v.feasibility = Feasibility::InfeasibleTipover;
    else if (op.required_output_torque_nm >
             op.available_continuous_torque_nm * kSlopeOverloadAllowance)
        v.feasibility = Feasibility::InfeasibleTorque;
    return v;
}

enum class ElementKind { Ramp, Step, Gap, Stair };

struct ScenarioElement {
    ElementKind kind = ElementKind::Ramp;
    double angle_rad = 0.0;   // ramp/stair incline
    double height_m = 0.0;    // step
    double width_m = 0.0;     // gap
    double tread_m = 0.0;     // stair
    double riser_m = 0.0;
    double duration_min = 0.0;
    FlipperVariant variant = FlipperVariant::TwoPairRegular;
};

struct MissionScenario {
    std::string name;
    std::string profile;  // optional power profile for energy estimates
    std::vector<ScenarioElement> elements;
};

struct ElementReport {
    std::string kind;
    double dimension = 0.0;
    Feasibility feasibility = Feasibility::Feasible;
    double stability_margin_m = 0.0;
    double torque_demand_nm = 0.0;
    double torque_margin = 0.0;
    double energy_wh = 0.0;
};

struct ScenarioReport {
    std::string scenario;
    std::vector<ElementReport> elements;
    double total_energy_wh = 0.0;
    bool all_feasible = true;
};

inline ScenarioReport scenario_run(const RobotSpec& spec, const MissionScenario& scenario,
                                   double avg_actuator_current_a = 0.0) {
    ScenarioReport report;
    report.scenario = scenario.name;
    for (const auto& el : scenario.elements) {
        ElementReport er;
        switch (el.kind) {
            case ElementKind::Ramp:
            case ElementKind::Stair: {
                er.kind = el.kind == ElementKind::Ramp ? "ramp" : "stair";
                er.dimension = el.angle_rad;
                SlopeVerdict v = slope_feasibility(spec, el.angle_rad);
                er.feasibility = v.feasibility;
                er.stability_margin_m = v.stability_margin_m;
                er.torque_demand_nm = v.torque_demand_nm;
                er.torque_margin = v.torque_margin;
                break;
            }
            case ElementKind::Step: {
                er.kind = "step";
                er.dimension = el.height_m;
                StepVerdict v = step_feasibility(spec, flipper_config(spec, el.variant), el.height_m);
                er.feasibility = v.feasibility;
                er.stability_margin_m = v.stability_margin_m;
                er.torque_demand_nm = v.torque_demand_nm;
                er.torque_margin = v.torque_margin;
                break;
            }
            case ElementKind::Gap: {
                er.kind = "gap";
                er.dimension = el.width_m;
                GapVerdict v = gap_feasibility(spec, el.width_m);
                er.feasibility = v.feasibility;
                er.stability_margin_m = v.min_margin_m;
                break;
            }
        }
        if (avg_actuator_current_a > 0.0 && el.duration_min > 0.0)
            er.energy_wh = spec.actuator_battery.nominal_voltage_v * avg_actuator_current_a *
                           el.duration_min / 60.0;
        report.total_energy_wh += er.energy_wh;
        if (er.feasibility != Feasibility::Feasible) report.all_feasible = false;
        report.elements.push_back(er);
    }
    return report;
}

}  // namespace karo
