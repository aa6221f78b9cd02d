#pragma once

// Declarative robot specification shared by every analysis module.  All
// values are SI internally (m, kg, rad, s) except where a field's unit is
// part of its name (battery capacity in mAh, motor torque in mNm, speeds
// in rpm) to stay aligned with datasheet conventions.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace karo {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDefaultGravity = 9.8;  // reproduces the published sizing figures

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

struct MotorSpec {
    std::string name;
    double nominal_torque_mnm = 0.0;
    double nominal_speed_rpm = 0.0;
    double torque_constant_mnm_per_a = 0.0;  // Km
    double no_load_current_a = 0.0;          // I0
    double nominal_voltage_v = 0.0;
    double max_continuous_current_a = 0.0;
};

struct GearStage {
    double ratio = 1.0;       // >1 reduces speed
    double efficiency = 1.0;  // fraction in (0, 1]
};

struct Drivetrain {
    MotorSpec motor;
    std::vector<GearStage> stages;
    int motors_in_parallel = 1;

    double overall_ratio() const {
        double r = 1.0;
        for (const auto& s : stages) r *= s.ratio;
        return r;
    }
    double overall_efficiency() const {
        double e = 1.0;
        for (const auto& s : stages) e *= s.efficiency;
        return e;
    }
};

enum class JointKind { Revolute, Prismatic };

struct DHRow {
    double r = 0.0;             // link length, m
    double alpha = 0.0;         // link twist, rad
    double d = 0.0;             // link offset, m (base value; prismatic variable adds)
    double theta_offset = 0.0;  // home angle offset, rad
    JointKind kind = JointKind::Revolute;
    double range_min = 0.0;     // rad (revolute) or m (prismatic)
    double range_max = 0.0;
};

struct ManipulatorSpec {
    std::vector<DHRow> dh_rows;  // exactly 6, locating the end-effector
    bool gripper = true;
    double arm_total_mass_kg = 0.0;   // m_t
    double distal_mass_kg = 0.0;      // m_c, links 3-7
    double com_lever_total_m = 0.0;   // l_t
    double com_lever_distal_m = 0.0;  // l_c
    double full_extension_m = 0.0;    // l_ex
    double link2_length_m = 0.0;      // l_j
    double mount_forward_m = 0.0;     // arm base, forward of chassis center
    double mount_height_m = 0.0;      // arm base above ground
    Drivetrain joint2_drive;
};

struct BatterySpec {
    std::string name;
    double capacity_mah = 0.0;
    double c_rating = 0.0;
    double nominal_voltage_v = 0.0;
    double full_voltage_v = 0.0;
    double cutoff_voltage_v = 0.0;
    // Optional sag calibration: voltage at a fixed fraction of the discharge
    // horizon.  <= 0 disables the knee and the curve is a single segment.
    double sag_knee_fraction = 0.0;
    double sag_knee_voltage_v = 0.0;

    double burst_current_a() const { return c_rating * capacity_mah / 1000.0; }
};

struct Levers {
    double l1 = 0.0;  // chassis COM offset from center O
    double l2 = 0.0;  // flipper COM lever
    double l3 = 0.0;  // manipulator COM offset
    double la = 0.0;  // flipper pivot offset from center
    double lb = 0.0;  // flipper length, pivot to tip
};

struct Footprint {
    double length_m = 0.0;
    double width_m = 0.0;
    double height_m = 0.0;
};

struct RobotSpec {
    std::string name;
    int spec_version = 1;

    double chassis_mass_kg = 0.0;       // m1
    double flipper_pair_mass_kg = 0.0;  // m2, one pair
    double manipulator_mass_kg = 0.0;   // m3
    double total_mass_kg = 0.0;         // M, must close against the components
    double published_total_mass_kg = 0.0;  // rounded figure used in the published arithmetic
    double gravity = kDefaultGravity;

    double track_radius_m = 0.0;  // b, pulley center to outer track surface
    double com_height_m = 0.0;    // COM height above ground (bundled assumption)
    Levers levers;
    Footprint footprint;

    Drivetrain traction_drivetrain;
    Drivetrain flipper_drivetrain;
    ManipulatorSpec manipulator;
    BatterySpec actuator_battery;
    BatterySpec electronics_battery;

    // Declared ratings carried as metadata (not derived by the toolkit).
    double rated_payload_flat_kg = 0.0;
    double rated_arm_payload_kg = 0.0;
    double rated_max_stair_incline_rad = 0.0;
};

struct Diagnostic {
    std::string field;
    double value = 0.0;
    std::string rule;

    std::string to_string() const {
        return field + " = " + std::to_string(value) + ": " + rule;
    }
};

namespace detail {

inline void require_positive(std::vector<Diagnostic>& out, const std::string& field, double v) {
    if (!(v > 0.0)) out.push_back({field, v, "must be strictly positive"});
}

inline void validate_motor(std::vector<Diagnostic>& out, const std::string& prefix, const MotorSpec& m) {
    require_positive(out, prefix + ".nominal_torque_mnm", m.nominal_torque_mnm);
    require_positive(out, prefix + ".nominal_speed_rpm", m.nominal_speed_rpm);
    require_positive(out, prefix + ".torque_constant_mnm_per_a", m.torque_constant_mnm_per_a);
    require_positive(out, prefix + ".no_load_current_a", m.no_load_current_a);
    require_positive(out, prefix + ".nominal_voltage_v", m.nominal_voltage_v);
    require_positive(out, prefix + ".max_continuous_current_a", m.max_continuous_current_a);
    if (m.torque_constant_mnm_per_a > 0.0) {
        // Datasheet self-consistency: the continuous limit must cover the
        // current drawn at nominal torque, to within 5%.
        double nominal_current = m.nominal_torque_mnm / m.torque_constant_mnm_per_a + m.no_load_current_a;
        if (m.max_continuous_current_a < nominal_current * 0.95)
            out.push_back({prefix + ".max_continuous_current_a", m.max_continuous_current_a,
                           "below current at nominal torque (" + std::to_string(nominal_current) + " A) by more than 5%"});
    }
}

inline void validate_drivetrain(std::vector<Diagnostic>& out, const std::string& prefix, const Drivetrain& dt) {
    validate_motor(out, prefix + ".motor", dt.motor);
    if (dt.stages.empty()) out.push_back({prefix + ".stages", 0.0, "must have at least one gear stage"});
    for (size_t i = 0; i < dt.stages.size(); ++i) {
        const auto& s = dt.stages[i];
        std::string sp = prefix + ".stages[" + std::to_string(i) + "]";
        if (!(s.ratio > 0.0)) out.push_back({sp + ".ratio", s.ratio, "must be strictly positive"});
        if (!(s.efficiency > 0.0 && s.efficiency <= 1.0))
            out.push_back({sp + ".efficiency", s.efficiency, "must be in (0, 1]"});
    }
    if (dt.motors_in_parallel < 1)
        out.push_back({prefix + ".motors_in_parallel", double(dt.motors_in_parallel), "must be >= 1"});
}

inline void validate_battery(std::vector<Diagnostic>& out, const std::string& prefix, const BatterySpec& b) {
    require_positive(out, prefix + ".capacity_mah", b.capacity_mah);
    require_positive(out, prefix + ".c_rating", b.c_rating);
    require_positive(out, prefix + ".nominal_voltage_v", b.nominal_voltage_v);
    if (!(b.full_voltage_v > b.cutoff_voltage_v))
        out.push_back({prefix + ".full_voltage_v", b.full_voltage_v, "must exceed cutoff voltage"});
    if (b.sag_knee_fraction != 0.0) {
        if (!(b.sag_knee_fraction > 0.0 && b.sag_knee_fraction < 1.0))
            out.push_back({prefix + ".sag_knee_fraction", b.sag_knee_fraction, "must be in (0, 1)"});
        if (!(b.sag_knee_voltage_v < b.full_voltage_v && b.sag_knee_voltage_v > b.cutoff_voltage_v))
            out.push_back({prefix + ".sag_knee_voltage_v", b.sag_knee_voltage_v,
                           "must lie between cutoff and full voltage"});
    }
}

inline void validate_manipulator(std::vector<Diagnostic>& out, const ManipulatorSpec& m) {
    if (m.dh_rows.size() != 6)
        out.push_back({"manipulator.dh", double(m.dh_rows.size()), "exactly 6 DH rows required"});
    double constant_length = 0.0;
    double stroke = 0.0;
    for (size_t i = 0; i < m.dh_rows.size(); ++i) {
        const auto& row = m.dh_rows[i];
        std::string rp = "manipulator.dh[" + std::to_string(i) + "]";
        if (!(row.range_min <= row.range_max))
            out.push_back({rp + ".range", row.range_min, "range min must not exceed max"});
        if (row.kind == JointKind::Prismatic) {
            if (row.range_min < 0.0)
                out.push_back({rp + ".range", row.range_min, "prismatic stroke must be nonnegative"});
            stroke += row.range_max;
            constant_length += std::abs(row.r) + std::abs(row.d);
        } else {
            constant_length += std::abs(row.r) + std::abs(row.d);
        }
    }
    if (m.dh_rows.size() == 6 && m.full_extension_m > constant_length + stroke + 1e-9)
        out.push_back({"manipulator.full_extension_m", m.full_extension_m,
                       "exceeds sum of link constants plus prismatic stroke"});
    if (!(m.link2_length_m >= 0.0) || !(m.full_extension_m >= m.link2_length_m))
        out.push_back({"manipulator.link2_length_m", m.link2_length_m, "requires 0 <= l_j <= l_ex"});
    require_positive(out, "manipulator.arm_total_mass_kg", m.arm_total_mass_kg);
    require_positive(out, "manipulator.distal_mass_kg", m.distal_mass_kg);
    require_positive(out, "manipulator.com_lever_total_m", m.com_lever_total_m);
    require_positive(out, "manipulator.com_lever_distal_m", m.com_lever_distal_m);
    validate_drivetrain(out, "manipulator.joint2_drive", m.joint2_drive);
}

}  // namespace detail

// Empty result iff every invariant holds; each diagnostic names the field,
// the offending value, and the violated rule.
inline std::vector<Diagnostic> validate_spec(const RobotSpec& spec) {
    std::vector<Diagnostic> out;
    detail::require_positive(out, "masses.chassis_kg", spec.chassis_mass_kg);
    detail::require_positive(out, "masses.flipper_pair_kg", spec.flipper_pair_mass_kg);
    detail::require_positive(out, "masses.manipulator_kg", spec.manipulator_mass_kg);
    detail::require_positive(out, "masses.total_kg", spec.total_mass_kg);
    detail::require_positive(out, "masses.gravity_mps2", spec.gravity);

    double closure = spec.chassis_mass_kg + 2.0 * spec.flipper_pair_mass_kg + spec.manipulator_mass_kg;
    if (std::abs(closure - spec.total_mass_kg) > 1e-9)
        out.push_back({"masses.total_kg", spec.total_mass_kg,
                       "mass closure violated: m1 + 2*m2 + m3 = " + std::to_string(closure)});

    detail::require_positive(out, "geometry.track_radius_m", spec.track_radius_m);
    detail::require_positive(out, "geometry.com_height_m", spec.com_height_m);
    detail::require_positive(out, "geometry.length_m", spec.footprint.length_m);
    detail::require_positive(out, "geometry.width_m", spec.footprint.width_m);
    detail::require_positive(out, "geometry.height_m", spec.footprint.height_m);

    detail::require_positive(out, "levers.la_m", spec.levers.la);
    detail::require_positive(out, "levers.lb_m", spec.levers.lb);
    if (spec.levers.l1 < 0.0) out.push_back({"levers.l1_m", spec.levers.l1, "must be nonnegative"});
    if (spec.levers.l2 < 0.0) out.push_back({"levers.l2_m", spec.levers.l2, "must be nonnegative"});
    if (spec.levers.l3 < 0.0) out.push_back({"levers.l3_m", spec.levers.l3, "must be nonnegative"});

    detail::validate_drivetrain(out, "traction_drivetrain", spec.traction_drivetrain);
    detail::validate_drivetrain(out, "flipper_drivetrain", spec.flipper_drivetrain);
    detail::validate_manipulator(out, spec.manipulator);
    detail::validate_battery(out, "actuator_battery", spec.actuator_battery);
    detail::validate_battery(out, "electronics_battery", spec.electronics_battery);
    return out;
}

}  // namespace karo
