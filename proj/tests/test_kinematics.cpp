#include <doctest.h>

#include <cmath>

#include "karo/kinematics.hpp"
#include "karo/spec_io.hpp"

using karo::deg2rad;
using karo::DHRow;
using karo::JointKind;
using karo::JointVector;
using karo::ManipulatorSpec;
using karo::Pose;
using karo::Vec3;

namespace {

karo::RobotSpec bundled_spec() { return karo::load_spec(std::string(KARO_DATA_DIR) + "/karo.toml"); }

DHRow revolute(double r, double alpha_deg, double d, double theta_offset_deg = 0.0,
               double min_deg = -360.0, double max_deg = 360.0) {
    return {r, deg2rad(alpha_deg), d, deg2rad(theta_offset_deg), JointKind::Revolute,
            deg2rad(min_deg), deg2rad(max_deg)};
}

// Independent oracle: multiply explicit 4x4 arrays built directly from the
// textbook entries, without the Pose class.
void oracle_chain(const ManipulatorSpec& spec, const JointVector& q, double out[4][4]) {
    double acc[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    for (size_t i = 0; i < spec.dh_rows.size(); ++i) {
        const DHRow& row = spec.dh_rows[i];
        double th = row.theta_offset + (row.kind == JointKind::Revolute ? q[i] : 0.0);
        double d = row.d + (row.kind == JointKind::Prismatic ? q[i] : 0.0);
        double a[4][4] = {
            {std::cos(th), -std::sin(th) * std::cos(row.alpha), std::sin(th) * std::sin(row.alpha),
             row.r * std::cos(th)},
            {std::sin(th), std::cos(th) * std::cos(row.alpha), -std::cos(th) * std::sin(row.alpha),
             row.r * std::sin(th)},
            {0.0, std::sin(row.alpha), std::cos(row.alpha), d},
            {0.0, 0.0, 0.0, 1.0}};
        double next[4][4];
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                next[r][c] = 0.0;
                for (int k = 0; k < 4; ++k) next[r][c] += acc[r][k] * a[k][c];
            }
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) acc[r][c] = next[r][c];
    }
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out[r][c] = acc[r][c];
}

}  // namespace

TEST_CASE("single-row transforms match hand calculations") {
    // Unit link, no twist, quarter turn: translate to (0, 1, 0), x maps to y.
    Pose a = karo::dh_transform(revolute(1.0, 0.0, 0.0), deg2rad(90.0));
    CHECK(a.at(0, 3) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(a.at(1, 3) == doctest::Approx(1.0));
    CHECK(a.at(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(a.at(1, 0) == doctest::Approx(1.0));
    CHECK(a.at(0, 1) == doctest::Approx(-1.0));

    // Pure twist with offset: y maps to z, translation (0, 0, 2).
    Pose b = karo::dh_transform(revolute(0.0, 90.0, 2.0), 0.0);
    CHECK(b.at(2, 1) == doctest::Approx(1.0));
    CHECK(b.at(1, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(b.at(2, 3) == doctest::Approx(2.0));

    // Prismatic: the variable adds to the link offset.
    DHRow slider{0.0, 0.0, 0.5, 0.0, JointKind::Prismatic, 0.0, 0.4};
    Pose c = karo::dh_transform(slider, 0.3);
    CHECK(c.at(2, 3) == doctest::Approx(0.8));
    CHECK(c.at(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("two-link planar chain matches the hand-computed elbow pose") {
    ManipulatorSpec arm;
    arm.dh_rows = {revolute(1.0, 0.0, 0.0), revolute(1.0, 0.0, 0.0)};
    JointVector q{};
    q[0] = deg2rad(90.0);
    q[1] = deg2rad(-90.0);
    Vec3 p = karo::fk_pose(arm, q).translation();
    CHECK(p.x == doctest::Approx(1.0));
    CHECK(p.y == doctest::Approx(1.0));
    CHECK(p.z == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fk agrees with the independent matrix-product oracle") {
    karo::RobotSpec spec = bundled_spec();
    const auto& arm = spec.manipulator;
    std::vector<JointVector> probes;
    {
        JointVector q{};
        probes.push_back(q);  // home
        q[0] = deg2rad(30.0); q[1] = deg2rad(60.0); q[2] = deg2rad(45.0);
        q[3] = 0.2; q[4] = deg2rad(120.0); q[5] = deg2rad(-30.0);
        probes.push_back(q);
        q[0] = deg2rad(-80.0); q[1] = deg2rad(180.0); q[2] = deg2rad(0.0);
        q[3] = 0.4; q[4] = deg2rad(359.0); q[5] = deg2rad(90.0);
        probes.push_back(q);
    }
    for (const auto& q : probes) {
        Pose t = karo::fk_pose(arm, q);
        double ref[4][4];
        oracle_chain(arm, q, ref);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                CHECK(t.at(r, c) == doctest::Approx(ref[r][c]).epsilon(1e-12));
        CHECK(t.rigidity_defect() < 1e-12);
    }
}

TEST_CASE("pose multiplication is associative to machine precision") {
    Pose a = karo::dh_transform(revolute(0.3, -90.0, 0.155), deg2rad(37.0));
    Pose b = karo::dh_transform(revolute(0.45, -180.0, 0.0, -180.0), deg2rad(101.0));
    Pose c = karo::dh_transform(revolute(0.0, -90.0, 0.0, -90.0), deg2rad(63.0));
    Pose lhs = (a * b) * c;
    Pose rhs = a * (b * c);
    for (int r = 0; r < 4; ++r)
        for (int ccol = 0; ccol < 4; ++ccol)
            CHECK(std::abs(lhs.at(r, ccol) - rhs.at(r, ccol)) < 1e-12);
}

TEST_CASE("base yaw symmetry: joint 1 rotates positions about z") {
    karo::RobotSpec spec = bundled_spec();
    JointVector q{};
    q[1] = deg2rad(70.0); q[2] = deg2rad(40.0); q[3] = 0.25; q[4] = deg2rad(10.0);
    Vec3 p0 = karo::fk_pose(spec.manipulator, q).translation();
    for (double yaw_deg : {-60.0, -15.0, 25.0, 80.0}) {
        q[0] = deg2rad(yaw_deg);
        Vec3 p = karo::fk_pose(spec.manipulator, q).translation();
        CHECK(p.norm() == doctest::Approx(p0.norm()).epsilon(1e-12));
        CHECK(p.z == doctest::Approx(p0.z).epsilon(1e-12));
        double radial0 = std::hypot(p0.x, p0.y);
        CHECK(std::hypot(p.x, p.y) == doctest::Approx(radial0).epsilon(1e-12));
    }
    q[0] = 0.0;
}

TEST_CASE("prismatic extension moves the end effector linearly") {
    karo::RobotSpec spec = bundled_spec();
    JointVector q{};
    q[0] = deg2rad(20.0); q[1] = deg2rad(110.0); q[2] = deg2rad(35.0); q[4] = deg2rad(200.0);
    q[3] = 0.0;
    Vec3 p0 = karo::fk_pose(spec.manipulator, q).translation();
    q[3] = 0.4;
    Vec3 p1 = karo::fk_pose(spec.manipulator, q).translation();
    Vec3 dir = (p1 - p0) * (1.0 / 0.4);
    CHECK(dir.norm() == doctest::Approx(1.0).epsilon(1e-9));  // slider axis is unit speed
    for (double t : {0.1, 0.2, 0.31}) {
        q[3] = t;
        Vec3 p = karo::fk_pose(spec.manipulator, q).translation();
        Vec3 expect = p0 + dir * t;
        CHECK((p - expect).norm() < 1e-9);
    }
}

TEST_CASE("joint range violations throw") {
    karo::RobotSpec spec = bundled_spec();
    JointVector q{};
    q[0] = deg2rad(81.0);  // beyond the +-80 degree yaw range
    CHECK_THROWS_AS(karo::fk_pose(spec.manipulator, q), karo::JointRangeError);
    q[0] = 0.0;
    q[3] = 0.41;
    CHECK_THROWS_AS(karo::fk_pose(spec.manipulator, q), karo::JointRangeError);
}

TEST_CASE("workspace cloud attains the full extension and stays bounded") {
    karo::RobotSpec spec = bundled_spec();
    auto cloud = karo::workspace_sample(spec.manipulator, karo::SampleStrategy::Grid, 15);
    CHECK(cloud.points.size() == size_t(15) * 15 * 15 * 9 * 15 * 15);
    double max_reach = 0.0, min_z = 1e9, max_x = -1e9, min_x = 1e9;
    for (const auto& p : cloud.points) {
        max_reach = std::max(max_reach, p.norm());
        min_z = std::min(min_z, p.z);
        max_x = std::max(max_x, p.x);
        min_x = std::min(min_x, p.x);
    }
    CHECK(max_reach <= spec.manipulator.full_extension_m + 1e-9);
    CHECK(max_reach == doctest::Approx(1.30).epsilon(1e-9));
    CHECK(min_z < -0.5);      // reaches well below the arm base plane
    CHECK(max_x > 1.14);      // forward horizontal reach
    CHECK(min_x < -1.14);     // rearward horizontal reach
}

TEST_CASE("random sampling is seed-deterministic and bounded") {
    karo::RobotSpec spec = bundled_spec();
    auto a = karo::workspace_sample(spec.manipulator, karo::SampleStrategy::Random, 2000, 42);
    auto b = karo::workspace_sample(spec.manipulator, karo::SampleStrategy::Random, 2000, 42);
    auto c = karo::workspace_sample(spec.manipulator, karo::SampleStrategy::Random, 2000, 43);
    REQUIRE(a.points.size() == 2000);
    bool identical = true, differs = false, bounded = true;
    for (size_t i = 0; i < a.points.size(); ++i) {
        identical = identical && a.points[i].x == b.points[i].x && a.points[i].y == b.points[i].y &&
                    a.points[i].z == b.points[i].z;
        differs = differs || a.points[i].x != c.points[i].x;
        bounded = bounded && a.points[i].norm() <= spec.manipulator.full_extension_m + 1e-9;
    }
    CHECK(bounded);
    CHECK(identical);
    CHECK(differs);
}

TEST_CASE("reachability query distinguishes inside from outside") {
    karo::RobotSpec spec = bundled_spec();
    auto cloud = karo::workspace_sample(spec.manipulator, karo::SampleStrategy::Grid, 9);
    CHECK(karo::reachability_query(cloud, cloud.points.front(), 1e-6));
    CHECK_FALSE(karo::reachability_query(cloud, {5.0, 0.0, 0.0}, 0.1));
    CHECK_THROWS(karo::reachability_query(cloud, {0.0, 0.0, 0.0}, 0.0));
}

TEST_CASE("ik round trip recovers an fk target") {
    karo::RobotSpec spec = bundled_spec();
    JointVector qs{};
    qs[0] = deg2rad(25.0); qs[1] = deg2rad(80.0); qs[2] = deg2rad(50.0);
    qs[3] = 0.15; qs[4] = deg2rad(90.0); qs[5] = deg2rad(10.0);
    Vec3 target = karo::fk_pose(spec.manipulator, qs).translation();

    JointVector q0{};
    q0[0] = deg2rad(0.0); q0[1] = deg2rad(90.0); q0[2] = deg2rad(90.0);
    q0[3] = 0.2; q0[4] = deg2rad(180.0); q0[5] = 0.0;
    karo::IkResult r = karo::ik_solve(spec.manipulator, target, q0);
    CHECK(r.converged);
    CHECK(r.residual <= 1e-4);
    Vec3 back = karo::fk_pose(spec.manipulator, r.q).translation();
    CHECK((back - target).norm() <= 1e-4 + 1e-12);
}

TEST_CASE("ik reports the best residual for unreachable targets") {
    karo::RobotSpec spec = bundled_spec();
    JointVector q0{};
    q0[1] = deg2rad(90.0);
    karo::IkResult r = karo::ik_solve(spec.manipulator, Vec3{3.0, 0.0, 0.0}, q0);
    CHECK_FALSE(r.converged);
    // Best effort cannot beat geometry: residual at least distance minus reach.
    CHECK(r.residual >= 3.0 - spec.manipulator.full_extension_m - 1e-6);
}

TEST_CASE("body clearance is signed and continuous") {
    karo::RobotSpec spec = bundled_spec();

    // Straight-up configurations clear the chassis.
    JointVector up{};
    up[1] = deg2rad(90.0);  // shoulder vertical
    double c_up = karo::body_clearance(spec, up);
    CHECK(std::isfinite(c_up));

    // Somewhere in the sampled joint space the arm can reach below the box
    // top inside the footprint (negative) and far outside it (positive).
    auto cloud = karo::workspace_sample(spec.manipulator, karo::SampleStrategy::Grid, 7);
    bool saw_negative = false, saw_positive = false;
    for (size_t i = 0; i < cloud.joints.size(); i += 11) {
        double c = karo::body_clearance(spec, cloud.joints[i]);
        saw_negative = saw_negative || c < -1e-3;
        saw_positive = saw_positive || c > 1e-3;
        if (saw_negative && saw_positive) break;
    }
    CHECK(saw_negative);
    CHECK(saw_positive);

    // Lipschitz continuity along a shoulder sweep: a 0.5 degree move cannot
    // change the clearance by more than the arm length times the step.
    JointVector q{};
    q[3] = 0.3;
    double prev = 0.0;
    bool first = true;
    for (double deg = 0.0; deg <= 180.0; deg += 0.5) {
        q[1] = deg2rad(deg);
        double c = karo::body_clearance(spec, q);
        if (!first) CHECK(std::abs(c - prev) <= 2.0 * deg2rad(0.5) + 1e-6);
        prev = c;
        first = false;
    }
}
