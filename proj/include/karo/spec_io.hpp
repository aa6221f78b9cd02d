#pragma once

// Robot spec file loader and writer.  The file is a key/value tree with
// nested tables; SI units with explicit unit suffixes in key names
// (track_radius_m, alpha_deg, capacity_mah).  Unknown keys are rejected:
// a sizing tool must not silently drop parameters.

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "karo/spec.hpp"
#include "karo/toml.hpp"

namespace karo {

struct SpecError : std::runtime_error {
    explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace io_detail {

// Read-through cursor that records which keys were consumed so leftovers
// can be reported as unknown.
class Cursor {
public:
    Cursor(const toml::Table& table, std::string path) : table_(table), path_(std::move(path)) {}

    const toml::Value& require(const std::string& key) {
        const toml::Value* v = table_.find(key);
        if (v == nullptr) throw SpecError("missing key '" + join(key) + "'");
        seen_.insert(key);
        return *v;
    }

    const toml::Value* optional(const std::string& key) {
        const toml::Value* v = table_.find(key);
        if (v != nullptr) seen_.insert(key);
        return v;
    }

    double number(const std::string& key) {
        const toml::Value& v = require(key);
        if (v.kind != toml::Value::Kind::Number)
            throw SpecError("key '" + join(key) + "' must be a number");
        return v.number;
    }

    double number_or(const std::string& key, double fallback) {
        const toml::Value* v = optional(key);
        if (v == nullptr) return fallback;
        if (v->kind != toml::Value::Kind::Number)
            throw SpecError("key '" + join(key) + "' must be a number");
        return v->number;
    }

    std::string string(const std::string& key) {
        const toml::Value& v = require(key);
        if (v.kind != toml::Value::Kind::String)
            throw SpecError("key '" + join(key) + "' must be a string");
        return v.string;
    }

    bool boolean(const std::string& key) {
        const toml::Value& v = require(key);
        if (v.kind != toml::Value::Kind::Boolean)
            throw SpecError("key '" + join(key) + "' must be a boolean");
        return v.boolean;
    }

    std::vector<double> numbers(const std::string& key) {
        const toml::Value& v = require(key);
        if (v.kind != toml::Value::Kind::NumberArray)
            throw SpecError("key '" + join(key) + "' must be an array of numbers");
        return v.number_array;
    }

    Cursor child(const std::string& key) {
        const toml::Value& v = require(key);
        if (!v.is_table()) throw SpecError("key '" + join(key) + "' must be a table");
        return Cursor(v.table, join(key));
    }

    const std::vector<toml::Table>* table_array(const std::string& key) {
        const toml::Value* v = optional(key);
        if (v == nullptr) return nullptr;
        if (v->kind != toml::Value::Kind::TableArray)
            throw SpecError("key '" + join(key) + "' must be an array of tables");
        return &v->table_array;
    }

    void reject_unknown() const {
        for (const auto& [k, v] : table_.entries())
            if (!seen_.contains(k))
                throw SpecError("unknown key '" + join(k) + "'");
    }

    std::string join(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

private:
    const toml::Table& table_;
    std::string path_;
    std::set<std::string> seen_;
};

inline MotorSpec read_motor(Cursor c) {
    MotorSpec m;
    if (const auto* name = c.optional("name"); name != nullptr) m.name = name->string;
    m.nominal_torque_mnm = c.number("nominal_torque_mnm");
    m.nominal_speed_rpm = c.number("nominal_speed_rpm");
    m.torque_constant_mnm_per_a = c.number("torque_constant_mnm_per_a");
    m.no_load_current_a = c.number("no_load_current_a");
    m.nominal_voltage_v = c.number("nominal_voltage_v");
    m.max_continuous_current_a = c.number("max_continuous_current_a");
    c.reject_unknown();
    return m;
}

inline Drivetrain read_drivetrain(Cursor c) {
    Drivetrain dt;
    dt.motors_in_parallel = static_cast<int>(c.number_or("motors_in_parallel", 1.0));
    auto ratios = c.numbers("stage_ratios");
    auto effs = c.numbers("stage_efficiencies");
    if (ratios.size() != effs.size())
        throw SpecError("stage_ratios and stage_efficiencies must have equal length");
    for (size_t i = 0; i < ratios.size(); ++i) dt.stages.push_back({ratios[i], effs[i]});
    dt.motor = read_motor(c.child("motor"));
    c.reject_unknown();
    return dt;
}

inline BatterySpec read_battery(Cursor c, const std::string& name) {
    BatterySpec b;
    b.name = name;
    b.capacity_mah = c.number("capacity_mah");
    b.c_rating = c.number("c_rating");
    b.nominal_voltage_v = c.number("nominal_voltage_v");
    b.full_voltage_v = c.number("full_voltage_v");
    b.cutoff_voltage_v = c.number("cutoff_voltage_v");
    b.sag_knee_fraction = c.number_or("sag_knee_fraction", 0.0);
    b.sag_knee_voltage_v = c.number_or("sag_knee_voltage_v", 0.0);
    c.reject_unknown();
    return b;
}

inline DHRow read_dh_row(Cursor c) {
    DHRow row;
    std::string kind = c.string("kind");
    if (kind == "revolute") row.kind = JointKind::Revolute;
    else if (kind == "prismatic") row.kind = JointKind::Prismatic;
    else throw SpecError("dh row kind must be 'revolute' or 'prismatic', got '" + kind + "'");
    row.r = c.number("r_m");
    row.alpha = deg2rad(c.number("alpha_deg"));
    row.d = c.number("d_m");
    row.theta_offset = deg2rad(c.number_or("theta_offset_deg", 0.0));
    if (row.kind == JointKind::Revolute) {
        row.range_min = deg2rad(c.number("min_deg"));
        row.range_max = deg2rad(c.number("max_deg"));
    } else {
        row.range_min = c.number("min_m");
        row.range_max = c.number("max_m");
    }
    c.reject_unknown();
    return row;
}

inline ManipulatorSpec read_manipulator(Cursor c) {
    ManipulatorSpec m;
    m.gripper = c.boolean("gripper");
    m.arm_total_mass_kg = c.number("arm_total_mass_kg");
    m.distal_mass_kg = c.number("distal_mass_kg");
    m.com_lever_total_m = c.number("com_lever_total_m");
    m.com_lever_distal_m = c.number("com_lever_distal_m");
    m.full_extension_m = c.number("full_extension_m");
    m.link2_length_m = c.number("link2_length_m");
    m.mount_forward_m = c.number("mount_forward_m");
    m.mount_height_m = c.number("mount_height_m");
    m.joint2_drive = read_drivetrain(c.child("joint2_drive"));
    const auto* rows = c.table_array("dh");
    if (rows == nullptr) throw SpecError("missing [[manipulator.dh]] rows");
    for (size_t i = 0; i < rows->size(); ++i)
        m.dh_rows.push_back(read_dh_row(Cursor((*rows)[i], "manipulator.dh[" + std::to_string(i) + "]")));
    c.reject_unknown();
    return m;
}

}  // namespace io_detail

inline RobotSpec parse_spec(const std::string& text) {
    toml::Table root = toml::parse(text);
    io_detail::Cursor c(root, "");

    RobotSpec spec;
    spec.spec_version = static_cast<int>(c.number("spec_version"));
    if (spec.spec_version != 1)
        throw SpecError("unsupported spec_version " + std::to_string(spec.spec_version));
    spec.name = c.string("name");

    {
        auto m = c.child("masses");
        spec.chassis_mass_kg = m.number("chassis_kg");
        spec.flipper_pair_mass_kg = m.number("flipper_pair_kg");
        spec.manipulator_mass_kg = m.number("manipulator_kg");
        spec.total_mass_kg = m.number("total_kg");
        spec.published_total_mass_kg = m.number_or("published_total_kg", spec.total_mass_kg);
        spec.gravity = m.number_or("gravity_mps2", kDefaultGravity);
        m.reject_unknown();
    }
    {
        auto g = c.child("geometry");
        spec.track_radius_m = g.number("track_radius_m");
        spec.com_height_m = g.number("com_height_m");
        spec.footprint.length_m = g.number("length_m");
        spec.footprint.width_m = g.number("width_m");
        spec.footprint.height_m = g.number("height_m");
        g.reject_unknown();
    }
    {
        auto l = c.child("levers");
        spec.levers.l1 = l.number("l1_m");
        spec.levers.l2 = l.number("l2_m");
        spec.levers.l3 = l.number("l3_m");
        spec.levers.la = l.number("la_m");
        spec.levers.lb = l.number("lb_m");
        l.reject_unknown();
    }
    {
        auto r = c.child("ratings");
        spec.rated_payload_flat_kg = r.number("payload_flat_kg");
        spec.rated_arm_payload_kg = r.number("arm_payload_full_extend_kg");
        spec.rated_max_stair_incline_rad = deg2rad(r.number("max_stair_incline_deg"));
        r.reject_unknown();
    }
    spec.traction_drivetrain = io_detail::read_drivetrain(c.child("traction_drivetrain"));
    spec.flipper_drivetrain = io_detail::read_drivetrain(c.child("flipper_drivetrain"));
    spec.manipulator = io_detail::read_manipulator(c.child("manipulator"));
    spec.actuator_battery = io_detail::read_battery(c.child("actuator_battery"), "actuator");
    spec.electronics_battery = io_detail::read_battery(c.child("electronics_battery"), "electronics");
    c.reject_unknown();

    auto diags = validate_spec(spec);
    if (!diags.empty())
        throw SpecError("invalid spec: " + diags.front().to_string());
    return spec;
}

inline RobotSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open spec file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

namespace io_detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    std::string s = os.str();
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

inline void write_motor(std::ostream& os, const std::string& table, const MotorSpec& m) {
    os << "[" << table << "]\n";
    if (!m.name.empty()) os << "name = \"" << m.name << "\"\n";
    os << "nominal_torque_mnm = " << fmt(m.nominal_torque_mnm) << "\n"
       << "nominal_speed_rpm = " << fmt(m.nominal_speed_rpm) << "\n"
       << "torque_constant_mnm_per_a = " << fmt(m.torque_constant_mnm_per_a) << "\n"
       << "no_load_current_a = " << fmt(m.no_load_current_a) << "\n"
       << "nominal_voltage_v = " << fmt(m.nominal_voltage_v) << "\n"
       << "max_continuous_current_a = " << fmt(m.max_continuous_current_a) << "\n";
}

inline void write_drivetrain(std::ostream& os, const std::string& table, const Drivetrain& dt) {
    os << "[" << table << "]\n"
       << "motors_in_parallel = " << dt.motors_in_parallel << "\n";
    os << "stage_ratios = [";
    for (size_t i = 0; i < dt.stages.size(); ++i) os << (i ? ", " : "") << fmt(dt.stages[i].ratio);
    os << "]\n" << "stage_efficiencies = [";
    for (size_t i = 0; i < dt.stages.size(); ++i) os << (i ? ", " : "") << fmt(dt.stages[i].efficiency);
    os << "]\n";
    write_motor(os, table + ".motor", dt.motor);
}

inline void write_battery(std::ostream& os, const std::string& table, const BatterySpec& b) {
    os << "[" << table << "]\n"
       << "capacity_mah = " << fmt(b.capacity_mah) << "\n"
       << "c_rating = " << fmt(b.c_rating) << "\n"
       << "nominal_voltage_v = " << fmt(b.nominal_voltage_v) << "\n"
       << "full_voltage_v = " << fmt(b.full_voltage_v) << "\n"
       << "cutoff_voltage_v = " << fmt(b.cutoff_voltage_v) << "\n";
    if (b.sag_knee_fraction != 0.0)
        os << "sag_knee_fraction = " << fmt(b.sag_knee_fraction) << "\n"
           << "sag_knee_voltage_v = " << fmt(b.sag_knee_voltage_v) << "\n";
}

}  // namespace io_detail

inline std::string serialize_spec(const RobotSpec& spec) {
    using io_detail::fmt;
    std::ostringstream os;
    os << "spec_version = " << spec.spec_version << "\n"
       << "name = \"" << spec.name << "\"\n\n";
    os << "[masses]\n"
       << "chassis_kg = " << fmt(spec.chassis_mass_kg) << "\n"
       << "flipper_pair_kg = " << fmt(spec.flipper_pair_mass_kg) << "\n"
       << "manipulator_kg = " << fmt(spec.manipulator_mass_kg) << "\n"
       << "total_kg = " << fmt(spec.total_mass_kg) << "\n"
       << "published_total_kg = " << fmt(spec.published_total_mass_kg) << "\n"
       << "gravity_mps2 = " << fmt(spec.gravity) << "\n\n";
    os << "[geometry]\n"
       << "track_radius_m = " << fmt(spec.track_radius_m) << "\n"
       << "com_height_m = " << fmt(spec.com_height_m) << "\n"
       << "length_m = " << fmt(spec.footprint.length_m) << "\n"
       << "width_m = " << fmt(spec.footprint.width_m) << "\n"
       << "height_m = " << fmt(spec.footprint.height_m) << "\n\n";
    os << "[levers]\n"
       << "l1_m = " << fmt(spec.levers.l1) << "\n"
       << "l2_m = " << fmt(spec.levers.l2) << "\n"
       << "l3_m = " << fmt(spec.levers.l3) << "\n"
       << "la_m = " << fmt(spec.levers.la) << "\n"
       << "lb_m = " << fmt(spec.levers.lb) << "\n\n";
    os << "[ratings]\n"
       << "payload_flat_kg = " << fmt(spec.rated_payload_flat_kg) << "\n"
       << "arm_payload_full_extend_kg = " << fmt(spec.rated_arm_payload_kg) << "\n"
       << "max_stair_incline_deg = " << fmt(rad2deg(spec.rated_max_stair_incline_rad)) << "\n\n";
    io_detail::write_drivetrain(os, "traction_drivetrain", spec.traction_drivetrain);
    os << "\n";
    io_detail::write_drivetrain(os, "flipper_drivetrain", spec.flipper_drivetrain);
    os << "\n[manipulator]\n"
       << "gripper = " << (spec.manipulator.gripper ? "true" : "false") << "\n"
       << "arm_total_mass_kg = " << fmt(spec.manipulator.arm_total_mass_kg) << "\n"
       << "distal_mass_kg = " << fmt(spec.manipulator.distal_mass_kg) << "\n"
       << "com_lever_total_m = " << fmt(spec.manipulator.com_lever_total_m) << "\n"
       << "com_lever_distal_m = " << fmt(spec.manipulator.com_lever_distal_m) << "\n"
       << "full_extension_m = " << fmt(spec.manipulator.full_extension_m) << "\n"
       << "link2_length_m = " << fmt(spec.manipulator.link2_length_m) << "\n"
       << "mount_forward_m = " << fmt(spec.manipulator.mount_forward_m) << "\n"
       << "mount_height_m = " << fmt(spec.manipulator.mount_height_m) << "\n";
    io_detail::write_drivetrain(os, "manipulator.joint2_drive", spec.manipulator.joint2_drive);
    for (const auto& row : spec.manipulator.dh_rows) {
        os << "\n[[manipulator.dh]]\n"
           << "kind = \"" << (row.kind == JointKind::Revolute ? "revolute" : "prismatic") << "\"\n"
           << "r_m = " << fmt(row.r) << "\n"
           << "alpha_deg = " << fmt(rad2deg(row.alpha)) << "\n"
           << "d_m = " << fmt(row.d) << "\n"
           << "theta_offset_deg = " << fmt(rad2deg(row.theta_offset)) << "\n";
        if (row.kind == JointKind::Revolute)
            os << "min_deg = " << fmt(rad2deg(row.range_min)) << "\n"
               << "max_deg = " << fmt(rad2deg(row.range_max)) << "\n";
        else
            os << "min_m = " << fmt(row.range_min) << "\n"
               << "max_m = " << fmt(row.range_max) << "\n";
    }
    os << "\n";
    io_detail::write_battery(os, "actuator_battery", spec.actuator_battery);
    os << "\n";
    io_detail::write_battery(os, "electronics_battery", spec.electronics_battery);
    return os.str();
}

}  // namespace karo
