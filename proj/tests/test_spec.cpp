#include <doctest.h>

#include <fstream>
#include <sstream>

#include "karo/spec_io.hpp"

namespace {

std::string bundled_spec_text() {
    std::ifstream in(std::string(KARO_DATA_DIR) + "/karo.toml");
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Crude single-key patcher for invalid-spec cases: replaces the first
// "key = value" line matching `key`.
std::string patched(const std::string& text, const std::string& key, const std::string& value) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    bool done = false;
    while (std::getline(in, line)) {
        auto pos = line.find(key + " =");
        if (!done && pos == 0) {
            out << key << " = " << value << "\n";
            done = true;
        } else {
            out << line << "\n";
        }
    }
    REQUIRE(done);
    return out.str();
}

}  // namespace

TEST_CASE("bundled spec loads and validates") {
    karo::RobotSpec spec = karo::parse_spec(bundled_spec_text());
    CHECK(spec.name == "karo");
    CHECK(spec.total_mass_kg == doctest::Approx(85.1));
    CHECK(spec.published_total_mass_kg == doctest::Approx(85.0));
    CHECK(spec.chassis_mass_kg + 2.0 * spec.flipper_pair_mass_kg + spec.manipulator_mass_kg ==
          doctest::Approx(spec.total_mass_kg).epsilon(1e-12));
    CHECK(spec.manipulator.dh_rows.size() == 6);
    CHECK(spec.manipulator.dh_rows[3].kind == karo::JointKind::Prismatic);
    CHECK(spec.traction_drivetrain.overall_ratio() == doctest::Approx(104.0));
    CHECK(spec.flipper_drivetrain.overall_ratio() == doctest::Approx(1290.0));
    CHECK(spec.actuator_battery.burst_current_a() == doctest::Approx(100.0));
    CHECK(karo::validate_spec(spec).empty());
}

TEST_CASE("serialize/parse round trip is lossless") {
    karo::RobotSpec spec = karo::parse_spec(bundled_spec_text());
    std::string text = karo::serialize_spec(spec);
    karo::RobotSpec again = karo::parse_spec(text);
    // Second round trip must be byte-identical: the writer is a fixed point.
    CHECK(karo::serialize_spec(again) == text);
    CHECK(again.total_mass_kg == spec.total_mass_kg);
    CHECK(again.levers.lb == spec.levers.lb);
    CHECK(again.manipulator.dh_rows[1].alpha == spec.manipulator.dh_rows[1].alpha);
    CHECK(again.manipulator.dh_rows[1].r == spec.manipulator.dh_rows[1].r);
    CHECK(again.electronics_battery.sag_knee_voltage_v == spec.electronics_battery.sag_knee_voltage_v);
}

TEST_CASE("mass closure violation is rejected with the field named") {
    std::string text = patched(bundled_spec_text(), "total_kg", "90.0");
    try {
        karo::parse_spec(text);
        FAIL("expected rejection");
    } catch (const karo::SpecError& e) {
        CHECK(std::string(e.what()).find("total_kg") != std::string::npos);
        CHECK(std::string(e.what()).find("closure") != std::string::npos);
    }
}

TEST_CASE("efficiency above 1 is rejected") {
    std::string text = patched(bundled_spec_text(), "stage_efficiencies", "[0.83, 1.2]");
    CHECK_THROWS_AS(karo::parse_spec(text), karo::SpecError);
}

TEST_CASE("zero flipper length is rejected") {
    std::string text = patched(bundled_spec_text(), "lb_m", "0.0");
    try {
        karo::parse_spec(text);
        FAIL("expected rejection");
    } catch (const karo::SpecError& e) {
        CHECK(std::string(e.what()).find("lb_m") != std::string::npos);
    }
}

TEST_CASE("five DH rows are rejected") {
    std::string text = bundled_spec_text();
    size_t last = text.rfind("[[manipulator.dh]]");
    REQUIRE(last != std::string::npos);
    size_t end = text.find("\n[actuator_battery]", last);
    REQUIRE(end != std::string::npos);
    text.erase(last, end - last);
    CHECK_THROWS_AS(karo::parse_spec(text), karo::SpecError);
}

TEST_CASE("unknown keys are rejected, not ignored") {
    std::string text = bundled_spec_text() + "\n[masses]\nchassis_kg = 50.0\n";
    CHECK_THROWS(karo::parse_spec(text));  // duplicate key in a reopened table
    std::string text2 = bundled_spec_text();
    text2.insert(text2.find("[geometry]"), "stray_key = 1.0\n");
    try {
        karo::parse_spec(text2);
        FAIL("expected rejection");
    } catch (const karo::SpecError& e) {
        CHECK(std::string(e.what()).find("stray_key") != std::string::npos);
    }
}

TEST_CASE("full extension beyond link constants plus stroke is rejected") {
    std::string text = patched(bundled_spec_text(), "full_extension_m", "2.0");
    CHECK_THROWS_AS(karo::parse_spec(text), karo::SpecError);
}
