#include <doctest.h>

#include <cmath>

#include "karo/spec_io.hpp"
#include "karo/statics.hpp"

namespace {
karo::RobotSpec bundled_spec() { return karo::load_spec(std::string(KARO_DATA_DIR) + "/karo.toml"); }
}  // namespace

TEST_CASE("40 degree ramp traction reproduces the sizing figures") {
    karo::RobotSpec spec = bundled_spec();
    karo::RampCase rc = karo::ramp_case(spec, karo::deg2rad(40.0));
    // Oracle: independent arithmetic on the published inputs.
    double force = 85.0 * 9.8 * std::sin(karo::deg2rad(40.0));
    CHECK(karo::ramp_traction(rc) == doctest::Approx(force).epsilon(1e-12));
    CHECK(force * 0.12 == doctest::Approx(64.25).epsilon(2e-3));
    CHECK(karo::ramp_traction(rc) * rc.track_radius_m == doctest::Approx(64.25).epsilon(2e-3));
    CHECK(karo::traction_torque(rc, 2) == doctest::Approx(32.12).epsilon(2e-3));
}

TEST_CASE("ramp traction is linear in mass and monotone in slope") {
    karo::RampCase rc;
    rc.mass_kg = 85.0;
    rc.track_radius_m = 0.12;
    rc.slope_rad = karo::deg2rad(30.0);
    double base = karo::ramp_traction(rc);
    karo::RampCase doubled = rc;
    doubled.mass_kg *= 2.0;
    CHECK(karo::ramp_traction(doubled) == doctest::Approx(2.0 * base).epsilon(1e-9));
    double prev = 0.0;
    for (int deg = 0; deg <= 90; deg += 5) {
        karo::RampCase c = rc;
        c.slope_rad = karo::deg2rad(double(deg));
        double f = karo::ramp_traction(c);
        CHECK(f >= prev - 1e-12);
        prev = f;
    }
    karo::RampCase bad = rc;
    bad.slope_rad = -0.1;
    CHECK_THROWS(karo::ramp_traction(bad));
}

TEST_CASE("flipper reactions close the weight balance and match the published split") {
    karo::RobotSpec spec = bundled_spec();
    karo::FlipperLiftCase fc = karo::flipper_case(spec);
    karo::FlipperReactions r = karo::flipper_reactions(fc);
    // Vertical closure is exact.
    CHECK(r.front_n + r.rear_n == doctest::Approx(85.1 * 9.8).epsilon(1e-12));
    // The published reaction split and torque, reproduced within 2%:
    // the published arithmetic carries intermediate rounding.
    CHECK(r.front_n == doctest::Approx(441.2).epsilon(0.02));
    CHECK(r.rear_n == doctest::Approx(392.8).epsilon(0.02));
    CHECK(karo::flipper_torque(fc) == doctest::Approx(136.7).epsilon(0.02));
}

TEST_CASE("flipper reactions: front share grows with the COM levers") {
    karo::RobotSpec spec = bundled_spec();
    karo::FlipperLiftCase fc = karo::flipper_case(spec);
    karo::FlipperReactions base = karo::flipper_reactions(fc);
    CHECK(base.front_n > base.rear_n);  // COM offsets sit on the front side
    karo::FlipperLiftCase heavier = fc;
    heavier.levers.l1 *= 2.0;
    karo::FlipperReactions shifted = karo::flipper_reactions(heavier);
    CHECK(shifted.front_n > base.front_n);
    CHECK(shifted.front_n + shifted.rear_n ==
          doctest::Approx(base.front_n + base.rear_n).epsilon(1e-12));
    karo::FlipperLiftCase degenerate = fc;
    degenerate.levers.la = 0.0;
    degenerate.levers.lb = 0.0;
    CHECK_THROWS(karo::flipper_reactions(degenerate));
}

TEST_CASE("manipulator joint torques match the gravity-load oracle") {
    karo::RobotSpec spec = bundled_spec();
    karo::JointLoadCase jc = karo::joint_load_case(spec);
    // Oracle: 8.5 kg at 0.40 m and 2.8 kg at 0.45 m, g = 9.8.
    CHECK(karo::joint_static_torque(jc, karo::ArmJoint::Joint2) ==
          doctest::Approx(8.5 * 9.8 * 0.40).epsilon(1e-12));
    CHECK(karo::joint_static_torque(jc, karo::ArmJoint::Joint3) ==
          doctest::Approx(2.8 * 9.8 * 0.45).epsilon(1e-12));

    karo::JointLoadCase loaded = karo::joint_load_case(spec, 5.6);
    CHECK(karo::joint_static_torque(loaded, karo::ArmJoint::Joint2) ==
          doctest::Approx(33.32 + 5.6 * 9.8 * 1.30).epsilon(1e-9));
    CHECK(karo::joint_static_torque(loaded, karo::ArmJoint::Joint3) ==
          doctest::Approx(12.348 + 5.6 * 9.8 * (1.30 - 0.45)).epsilon(1e-9));
    // External load raises both joints monotonically.
    CHECK(karo::joint_static_torque(loaded, karo::ArmJoint::Joint2) >
          karo::joint_static_torque(jc, karo::ArmJoint::Joint2));
    karo::JointLoadCase bad = jc;
    bad.link2_length_m = 2.0;
    CHECK_THROWS(karo::joint_static_torque(bad, karo::ArmJoint::Joint2));
}

TEST_CASE("drivetrain chains multiply torque and divide speed") {
    karo::RobotSpec spec = bundled_spec();
    auto tr = karo::drivetrain_output(spec.traction_drivetrain);
    // Oracle: 0.405 Nm * 26 * 4 * 0.83 * 0.96.
    CHECK(tr.continuous_torque_nm == doctest::Approx(0.405 * 104.0 * 0.7968).epsilon(1e-12));
    CHECK(tr.continuous_torque_nm == doctest::Approx(33.56).epsilon(1e-3));
    CHECK(tr.output_speed_rpm == doctest::Approx(5680.0 / 104.0).epsilon(1e-12));
    double ground_speed = tr.output_speed_rpm * 2.0 * karo::kPi / 60.0 * 0.12;
    CHECK(ground_speed == doctest::Approx(0.686).epsilon(2e-3));

    auto fl = karo::drivetrain_output(spec.flipper_drivetrain);
    CHECK(fl.continuous_torque_nm == doctest::Approx(0.177 * 1290.0 * 0.612).epsilon(1e-12));
    CHECK(fl.continuous_torque_nm == doctest::Approx(139.7).epsilon(1e-3));
    CHECK(fl.output_speed_rpm * 6.0 == doctest::Approx(28.1).epsilon(1e-2));  // deg/s

    // Chain consistency: applying the stages one at a time agrees with the
    // aggregate helpers.
    double torque = spec.traction_drivetrain.motor.nominal_torque_mnm / 1000.0;
    double speed = spec.traction_drivetrain.motor.nominal_speed_rpm;
    for (const auto& s : spec.traction_drivetrain.stages) {
        torque *= s.ratio * s.efficiency;
        speed /= s.ratio;
    }
    CHECK(torque == doctest::Approx(tr.continuous_torque_nm).epsilon(1e-6));
    CHECK(speed == doctest::Approx(tr.output_speed_rpm).epsilon(1e-6));
}

TEST_CASE("motor currents follow the datasheet model") {
    karo::RobotSpec spec = bundled_spec();
    // Oracle: I = T/Km + I0 with datasheet numbers.
    CHECK(karo::motor_current(spec.traction_drivetrain.motor, 405.0) ==
          doctest::Approx(405.0 / 38.5 + 0.236).epsilon(1e-12));
    CHECK(karo::motor_current(spec.traction_drivetrain.motor, 405.0) ==
          doctest::Approx(10.755).epsilon(1e-3));
    CHECK(karo::motor_current(spec.flipper_drivetrain.motor, 177.0) ==
          doctest::Approx(5.998).epsilon(1e-3));
    CHECK_THROWS(karo::motor_current(spec.traction_drivetrain.motor, -1.0));
}

TEST_CASE("operating point reflects load torque back through the chain") {
    karo::RobotSpec spec = bundled_spec();
    karo::RampCase rc = karo::ramp_case(spec, karo::deg2rad(40.0));
    double per_motor = karo::traction_torque(rc, 2);
    karo::OperatingPoint op = karo::operating_point_check(spec.traction_drivetrain, per_motor);
    // Oracle: reflected motor torque = 32.12 Nm * 1000 / (104 * 0.7968).
    double reflected = per_motor * 1000.0 / (104.0 * 0.7968);
    CHECK(op.motor_torque_mnm == doctest::Approx(reflected).epsilon(1e-12));
    CHECK(op.motor_current_a ==
          doctest::Approx(reflected / 38.5 + 0.236).epsilon(1e-12));
    CHECK(op.within_continuous);
    CHECK(op.margin > 0.0);
    CHECK(op.margin == doctest::Approx((33.56 - 32.12) / 33.56).epsilon(5e-3));

    // Overload: demand above the continuous chain output flips the flags.
    karo::OperatingPoint over = karo::operating_point_check(spec.traction_drivetrain, 50.0);
    CHECK(over.margin < 0.0);
    CHECK_FALSE(over.within_continuous);
    CHECK_THROWS(karo::operating_point_check(spec.traction_drivetrain, -1.0));
}

TEST_CASE("joint 2 drive capability covers the bare arm but not the full payload") {
    karo::RobotSpec spec = bundled_spec();
    auto j2 = karo::drivetrain_output(spec.manipulator.joint2_drive);
    CHECK(j2.continuous_torque_nm == doctest::Approx(25.4 * 3.0 * 0.98).epsilon(1e-12));
    double bare = karo::joint_static_torque(karo::joint_load_case(spec), karo::ArmJoint::Joint2);
    double loaded =
        karo::joint_static_torque(karo::joint_load_case(spec, 5.6), karo::ArmJoint::Joint2);
    CHECK(j2.continuous_torque_nm > bare);
    CHECK(j2.continuous_torque_nm < loaded);  // documented capability gap
}

TEST_CASE("shaft torsion stress matches the closed form and scales as d^-3") {
    double tau = karo::shaft_torsion_stress(152.0, 0.030);
    CHECK(tau == doctest::Approx(16.0 * 152.0 / (karo::kPi * 2.7e-5)).epsilon(1e-12));
    CHECK(karo::shaft_torsion_stress(152.0, 0.060) == doctest::Approx(tau / 8.0).epsilon(1e-12));
    CHECK_THROWS(karo::shaft_torsion_stress(10.0, 0.0));
}
