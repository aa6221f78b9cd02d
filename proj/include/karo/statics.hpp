#pragma once

// Quasi-static force/torque analyses: ramp traction, flipper lifting,
// manipulator joint loads, drivetrain chains, motor operating points, and
// a solid-shaft torsion estimate.  Terrain friction is excluded by design;
// drivetrain friction enters only through stage efficiencies.  Inertia
// terms are carried in the case types with zero defaults.

#include <cmath>
#include <stdexcept>

#include "karo/spec.hpp"

namespace karo {

struct RampCase {
    double mass_kg = 0.0;          // M
    double slope_rad = 0.0;        // alpha
    double gravity = kDefaultGravity;
    double track_radius_m = 0.0;   // b
    double accel_mps2 = 0.0;       // a_i, zero in quasi-static use
};

struct FlipperLiftCase {
    double chassis_mass_kg = 0.0;       // m1
    double flipper_pair_mass_kg = 0.0;  // m2, per pair
    double manipulator_mass_kg = 0.0;   // m3
    Levers levers;
    double beta_rad = 0.0;              // flipper angle
    double gravity = kDefaultGravity;
    double angular_accel = 0.0;         // rad/s^2, zero in quasi-static use
    double linear_accel = 0.0;          // m/s^2
};

struct JointLoadCase {
    double arm_total_mass_kg = 0.0;   // m_t
    double distal_mass_kg = 0.0;      // m_c, links 3-7
    double external_mass_kg = 0.0;    // m_ex
    double com_lever_total_m = 0.0;   // l_t
    double com_lever_distal_m = 0.0;  // l_c
    double extension_m = 0.0;         // l_ex
    double link2_length_m = 0.0;      // l_j
    double gravity = kDefaultGravity;
};

struct OperatingPoint {
    double required_output_torque_nm = 0.0;
    double available_continuous_torque_nm = 0.0;
    double output_speed_rpm = 0.0;
    double motor_torque_mnm = 0.0;
    double motor_current_a = 0.0;
    double margin = 0.0;  // (available - required) / available
    bool within_continuous = false;
};

inline void check_ramp_case(const RampCase& c) {
    if (!(c.mass_kg > 0.0 && c.gravity > 0.0 && c.track_radius_m > 0.0))
        throw std::invalid_argument("ramp case requires positive M, g, b");
    if (!(c.slope_rad >= 0.0 && c.slope_rad < kPi / 2.0 + 1e-12))
        throw std::invalid_argument("ramp slope must lie in [0, 90] degrees");
}

// Total traction force needed to hold/advance on the slope, N.
inline double ramp_traction(const RampCase& c) {
    check_ramp_case(c);
    return c.mass_kg * c.gravity * std::sin(c.slope_rad) + c.mass_kg * c.accel_mps2;
}

// Output torque per motor, Nm: total F_tr * b split across the motors.
inline double traction_torque(const RampCase& c, int motor_count = 2) {
    if (motor_count < 1) throw std::invalid_argument("motor_count must be >= 1");
    return ramp_traction(c) * c.track_radius_m / double(motor_count);
}

struct FlipperReactions {
    double front_n = 0.0;  // F2, manipulator side
    double rear_n = 0.0;   // F1
};

// Tip reaction forces with both flipper pairs in ground contact, tips at
// +-(la + lb*cos(beta)) from the center.  The vertical balance closes to
// the total weight exactly; the moment balance uses the chassis and
// manipulator COM offsets (symmetric flipper-pair COMs cancel about O).
inline FlipperReactions flipper_reactions(const FlipperLiftCase& c) {
    double lever = c.levers.la + c.levers.lb * std::cos(c.beta_rad);
    if (std::abs(lever) < 1e-12)
        throw std::invalid_argument("degenerate flipper geometry: la + lb*cos(beta) = 0");
    double total_mass = c.chassis_mass_kg + 2.0 * c.flipper_pair_mass_kg + c.manipulator_mass_kg;
    double weight = total_mass * (c.gravity + c.linear_accel);
    double moment = (c.chassis_mass_kg * c.levers.l1 + c.manipulator_mass_kg * c.levers.l3) * c.gravity;
    double delta = moment / lever;  // front carries the extra share
    FlipperReactions r;
    r.front_n = (weight + delta) / 2.0;
    r.rear_n = (weight - delta) / 2.0;
    return r;
}

// Worst-case pair torque: larger reaction applied at the tip lever lb*cos(beta).
inline double flipper_torque(const FlipperLiftCase& c) {
    FlipperReactions r = flipper_reactions(c);
    double worst = std::max(r.front_n, r.rear_n);
    return worst * c.levers.lb * std::cos(c.beta_rad);
}

enum class ArmJoint { Joint2 = 2, Joint3 = 3 };

// Static holding torque, Nm.  Joint 2 carries the whole arm plus the
// external load at l_ex; Joint 3 carries the distal links with the load
// lever shortened by the link-2 length.
inline double joint_static_torque(const JointLoadCase& c, ArmJoint joint) {
    if (!(c.extension_m >= c.link2_length_m && c.link2_length_m >= 0.0))
        throw std::invalid_argument("joint load case requires l_ex >= l_j >= 0");
    if (joint == ArmJoint::Joint2)
        return c.arm_total_mass_kg * c.gravity * c.com_lever_total_m +
               c.external_mass_kg * c.gravity * c.extension_m;
    return c.distal_mass_kg * c.gravity * c.com_lever_distal_m +
           c.external_mass_kg * c.gravity * (c.extension_m - c.link2_length_m);
}

struct DrivetrainOutput {
    double continuous_torque_nm = 0.0;
    double output_speed_rpm = 0.0;
};

// Multiplicative chain: torque scales by every ratio and efficiency,
// speed divides by the ratios.
inline DrivetrainOutput drivetrain_output(const Drivetrain& dt) {
    DrivetrainOutput out;
    out.continuous_torque_nm =
        dt.motor.nominal_torque_mnm / 1000.0 * dt.overall_ratio() * dt.overall_efficiency();
    out.output_speed_rpm = dt.motor.nominal_speed_rpm / dt.overall_ratio();
    return out;
}

// I = load/Km + I0, datasheet current model.  load_torque in mNm.
inline double motor_current(const MotorSpec& motor, double load_torque_mnm) {
    if (load_torque_mnm < 0.0) throw std::invalid_argument("load torque must be nonnegative");
    return load_torque_mnm / motor.torque_constant_mnm_per_a + motor.no_load_current_a;
}

// Reflects a required output torque back through the chain to the motor
// shaft (dividing by ratios and efficiencies), evaluates the current, and
// compares against the continuous limit.
inline OperatingPoint operating_point_check(const Drivetrain& dt, double required_output_torque_nm) {
    if (required_output_torque_nm < 0.0)
        throw std::invalid_argument("required torque must be nonnegative");
    OperatingPoint op;
    op.required_output_torque_nm = required_output_torque_nm;
    DrivetrainOutput cap = drivetrain_output(dt);
    op.available_continuous_torque_nm = cap.continuous_torque_nm;
    op.output_speed_rpm = cap.output_speed_rpm;
    op.motor_torque_mnm =
        required_output_torque_nm * 1000.0 / (dt.overall_ratio() * dt.overall_efficiency());
    op.motor_current_a = motor_current(dt.motor, op.motor_torque_mnm);
    op.margin = (cap.continuous_torque_nm - required_output_torque_nm) / cap.continuous_torque_nm;
    op.within_continuous = op.motor_current_a <= dt.motor.max_continuous_current_a + 1e-12;
    return op;
}

// tau = 16 T / (pi d^3) for a solid circular shaft, Pa.  Analytic stand-in
// for a full component stress analysis.
inline double shaft_torsion_stress(double torque_nm, double shaft_diameter_m) {
    if (!(shaft_diameter_m > 0.0)) throw std::invalid_argument("shaft diameter must be positive");
    return 16.0 * torque_nm / (kPi * shaft_diameter_m * shaft_diameter_m * shaft_diameter_m);
}

// Convenience constructors from a robot spec.

inline RampCase ramp_case(const RobotSpec& spec, double slope_rad, bool use_published_mass = true) {
    RampCase c;
    c.mass_kg = use_published_mass ? spec.published_total_mass_kg : spec.total_mass_kg;
    c.slope_rad = slope_rad;
    c.gravity = spec.gravity;
    c.track_radius_m = spec.track_radius_m;
    return c;
}

inline FlipperLiftCase flipper_case(const RobotSpec& spec, double beta_rad = 0.0) {
    FlipperLiftCase c;
    c.chassis_mass_kg = spec.chassis_mass_kg;
    c.flipper_pair_mass_kg = spec.flipper_pair_mass_kg;
    c.manipulator_mass_kg = spec.manipulator_mass_kg;
    c.levers = spec.levers;
    c.beta_rad = beta_rad;
    c.gravity = spec.gravity;
    return c;
}

inline JointLoadCase joint_load_case(const RobotSpec& spec, double external_mass_kg = 0.0) {
    const auto& m = spec.manipulator;
    JointLoadCase c;
    c.arm_total_mass_kg = m.arm_total_mass_kg;
    c.distal_mass_kg = m.distal_mass_kg;
    c.external_mass_kg = external_mass_kg;
    c.com_lever_total_m = m.com_lever_total_m;
    c.com_lever_distal_m = m.com_lever_distal_m;
    c.extension_m = m.full_extension_m;
    c.link2_length_m = m.link2_length_m;
    c.gravity = spec.gravity;
    return c;
}

}  // namespace karo
