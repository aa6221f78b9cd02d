// Command-line entry point for the Karo design-verification toolkit.
// Every subcommand reads the robot spec file, writes machine-readable
// artifacts to --out, and embeds the spec hash for traceability.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "karo/kinematics.hpp"
#include "karo/mission.hpp"
#include "karo/mission_io.hpp"
#include "karo/ocu.hpp"
#include "karo/power.hpp"
#include "karo/report.hpp"
#include "karo/spec_io.hpp"
#include "karo/statics.hpp"
#include "karo/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct Common {
    std::string spec_path;
    std::string out_dir = ".";
    std::string format = "json";
    uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& c) {
    const char* env_spec = std::getenv("KARO_SPEC");
    if (env_spec != nullptr) c.spec_path = env_spec;
    cmd->add_option("--spec", c.spec_path, "robot spec file")->required(c.spec_path.empty());
    cmd->add_option("--out", c.out_dir, "output directory");
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", c.seed, "random seed");
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
}

json pose_json(const karo::Pose& pose) {
    json rows = json::array();
    for (int r = 0; r < 4; ++r) {
        json row = json::array();
        for (int c = 0; c < 4; ++c) row.push_back(pose.at(r, c));
        rows.push_back(row);
    }
    karo::Vec3 t = pose.translation();
    return {{"matrix", rows}, {"position_m", {t.x, t.y, t.z}}};
}

int run_validate(const Common& c) {
    karo::RobotSpec spec;
    try {
        spec = karo::load_spec(c.spec_path);
    } catch (const std::exception& e) {
        std::cerr << "validation failed: " << e.what() << "\n";
        return kExitValidation;
    }
    std::cout << "spec '" << spec.name << "' is valid (hash " << karo::file_hash(c.spec_path)
              << ")\n";
    return kExitOk;
}

int run_fk(const Common& c, const std::vector<double>& joints_in) {
    karo::RobotSpec spec = karo::load_spec(c.spec_path);
    if (joints_in.size() != 6) {
        std::cerr << "fk requires exactly 6 joint values\n";
        return kExitUsage;
    }
    karo::JointVector q;
    for (size_t i = 0; i < 6; ++i) {
        // Degrees for revolute joints, meters for the prismatic joint.
        q[i] = spec.manipulator.dh_rows[i].kind == karo::JointKind::Revolute
                   ? karo::deg2rad(joints_in[i])
                   : joints_in[i];
    }
    karo::Pose pose;
    try {
        pose = karo::fk_pose(spec.manipulator, q);
    } catch (const std::exception& e) {
        std::cerr << "fk failed: " << e.what() << "\n";
        return kExitValidation;
    }
    karo::ReportEnvelope env("fk", karo::file_hash(c.spec_path));
    env.input("joints", joints_in);
    env.raw()["results"] = pose_json(pose);
    write_file(fs::path(c.out_dir) / "fk.json", env.dump());
    std::cout << env.dump();
    return kExitOk;
}

int run_workspace(const Common& c, int grid, int samples, const std::string& strategy) {
    karo::RobotSpec spec = karo::load_spec(c.spec_path);
    karo::SampleStrategy strat =
        strategy == "random" ? karo::SampleStrategy::Random : karo::SampleStrategy::Grid;
    int density = strat == karo::SampleStrategy::Grid ? grid : samples;
    karo::WorkspaceCloud cloud = karo::workspace_sample(spec.manipulator, strat, density, c.seed);

    double max_reach = 0.0, min_z = 1e30;
    for (const auto& p : cloud.points) {
        max_reach = std::max(max_reach, p.norm());
        min_z = std::min(min_z, p.z);
    }

    fs::path out(c.out_dir);
    write_file(out / "workspace.csv", karo::svg::cloud_csv(cloud));
    for (const auto& proj : karo::svg::workspace_projections())
        write_file(out / ("workspace_" + proj.name + ".svg"),
                   karo::svg::scatter_svg(cloud.points, proj,
                                          "workspace " + proj.name + " view (" + spec.name + ")"));

    karo::ReportEnvelope env("workspace", karo::file_hash(c.spec_path));
    env.input("strategy", strategy);
    env.input("density", density);
    env.input("seed", c.seed);
    env.input("points", cloud.points.size());
    env.result("max_reach", max_reach, "m", karo::Provenance::Published,
               "reachable sphere radius");
    env.result("min_z", min_z, "m", karo::Provenance::Published, "reach below the arm base");
    write_file(out / "workspace.json", env.dump());
    std::cout << env.dump();
    return kExitOk;
}

int run_statics(const Common& c, const std::string& which) {
    karo::RobotSpec spec = karo::load_spec(c.spec_path);
    karo::ReportEnvelope env("statics", karo::file_hash(c.spec_path));
    env.input("case", which);

    bool all = which == "all";
    bool known = all;
    if (all || which == "ramp40") {
        known = true;
        karo::RampCase rc = karo::ramp_case(spec, karo::deg2rad(40.0));
        double total = karo::ramp_traction(rc) * rc.track_radius_m;
        double per_motor = karo::traction_torque(rc, spec.traction_drivetrain.motors_in_parallel);
        karo::OperatingPoint op = karo::operating_point_check(spec.traction_drivetrain, per_motor);
        env.result("ramp40.traction_force", karo::ramp_traction(rc), "N", karo::Provenance::Derived);
        env.result("ramp40.total_torque", total, "Nm", karo::Provenance::Published);
        env.result("ramp40.per_motor_torque", per_motor, "Nm", karo::Provenance::Published);
        env.result("ramp40.motor_current", op.motor_current_a, "A", karo::Provenance::Derived);
        env.result("ramp40.torque_margin", op.margin, "fraction", karo::Provenance::Derived);
        env.result_flag("ramp40.within_continuous", op.within_continuous, karo::Provenance::Derived);
    }
    if (all || which == "flippers") {
        known = true;
        karo::FlipperLiftCase fc = karo::flipper_case(spec);
        karo::FlipperReactions r = karo::flipper_reactions(fc);
        env.result("flippers.rear_reaction", r.rear_n, "N", karo::Provenance::Published);
        env.result("flippers.front_reaction", r.front_n, "N", karo::Provenance::Published);
        env.result("flippers.weight_sum", r.rear_n + r.front_n, "N", karo::Provenance::Derived);
        env.result("flippers.lift_torque", karo::flipper_torque(fc), "Nm",
                   karo::Provenance::Published);
    }
    if (all || which == "joints") {
        known = true;
        karo::JointLoadCase jc = karo::joint_load_case(spec);
        env.result("joints.joint2_torque", karo::joint_static_torque(jc, karo::ArmJoint::Joint2),
                   "Nm", karo::Provenance::Derived,
                   "SI value; the published 3.4 figure omits g (kgf m)");
        env.result("joints.joint3_torque", karo::joint_static_torque(jc, karo::ArmJoint::Joint3),
                   "Nm", karo::Provenance::Derived,
                   "SI value; the published 1.2 figure omits g (kgf m)");
        karo::JointLoadCase payload = karo::joint_load_case(spec, 5.6);
        env.result("joints.joint2_torque_with_5p6kg",
                   karo::joint_static_torque(payload, karo::ArmJoint::Joint2), "Nm",
                   karo::Provenance::Derived,
                   "exceeds the 74.7 Nm drive capability; discrepancy reported, not resolved");
        env.result("joints.joint2_drive_capability",
                   karo::drivetrain_output(spec.manipulator.joint2_drive).continuous_torque_nm,
                   "Nm", karo::Provenance::Derived);
    }
    if (all || which == "drivetrains") {
        known = true;
        karo::DrivetrainOutput tr = karo::drivetrain_output(spec.traction_drivetrain);
        karo::DrivetrainOutput fl = karo::drivetrain_output(spec.flipper_drivetrain);
        double ground_speed =
            tr.output_speed_rpm * 2.0 * karo::kPi / 60.0 * spec.track_radius_m;
        env.result("traction.continuous_torque", tr.continuous_torque_nm, "Nm",
                   karo::Provenance::Published);
        env.result("traction.output_speed", tr.output_speed_rpm, "rpm", karo::Provenance::Derived);
        env.result("traction.ground_speed", ground_speed, "m/s", karo::Provenance::Derived,
                   "multiplicative chain gives 0.69; the published claim is 0.8 (discrepancy flagged)");
        env.result("flipper.continuous_torque", fl.continuous_torque_nm, "Nm",
                   karo::Provenance::Derived,
                   "multiplicative chain gives 139.7; the published claim is 151.4 (discrepancy flagged)");
        env.result("flipper.output_speed", fl.output_speed_rpm * 6.0, "deg/s",
                   karo::Provenance::Derived, "published claim is 32 deg/s");
        env.result("traction.nominal_current",
                   karo::motor_current(spec.traction_drivetrain.motor,
                                       spec.traction_drivetrain.motor.nominal_torque_mnm),
                   "A", karo::Provenance::Published);
        env.result("flipper.nominal_current",
                   karo::motor_current(spec.flipper_drivetrain.motor,
                                       spec.flipper_drivetrain.motor.nominal_torque_mnm),
                   "A", karo::Provenance::Derived);
    }
    if (all || which == "shaft") {
        known = true;
        env.result("shaft.torsion_stress_152nm_30mm", karo::shaft_torsion_stress(152.0, 0.030),
                   "Pa", karo::Provenance::Derived, "solid circular shaft, 16 T / (pi d^3)");
    }
    if (!known) {
        std::cerr << "unknown statics case '" << which
                  << "' (choose ramp40, flippers, joints, drivetrains, shaft, all)\n";
        return kExitUsage;
    }
    write_file(fs::path(c.out_dir) / "statics.json", env.dump());
    std::cout << env.dump();
    return kExitOk;
}

int run_power(const Common& c, const std::string& profile_arg) {
    karo::RobotSpec spec = karo::load_spec(c.spec_path);
    karo::MissionProfile profile;
    auto bundled = karo::bundled_profiles();
    if (const karo::MissionProfile* p = karo::find_profile(bundled, profile_arg); p != nullptr)
        profile = *p;
    else if (fs::exists(profile_arg))
        profile = karo::load_profile(profile_arg);
    else {
        std::cerr << "unknown profile '" << profile_arg << "' (bundled: ";
        for (size_t i = 0; i < bundled.size(); ++i) std::cerr << (i ? ", " : "") << bundled[i].name;
        std::cerr << ")\n";
        return kExitUsage;
    }

    karo::EnduranceReport rep = karo::mission_energy(profile, spec);
    fs::path out(c.out_dir);

    for (const auto* pack : {&spec.actuator_battery, &spec.electronics_battery}) {
        double current = pack == &spec.actuator_battery ? profile.avg_actuator_current_a
                                                        : profile.avg_electronics_current_a;
        if (current <= 0.0) continue;
        auto curve = karo::discharge_curve(*pack, current, 60.0);
        std::ostringstream csv;
        csv << "t_min,voltage_v\n";
        csv.precision(6);
        for (const auto& s : curve) csv << s.t_min << "," << s.voltage_v << "\n";
        write_file(out / ("discharge_" + pack->name + ".csv"), csv.str());
    }

    karo::ReportEnvelope env("power", karo::file_hash(c.spec_path));
    env.input("profile", profile.name);
    env.input("avg_actuator_current_a", profile.avg_actuator_current_a);
    env.input("avg_electronics_current_a", profile.avg_electronics_current_a);
    if (!profile.provenance.empty()) env.input("provenance", profile.provenance);
    env.result("actuator_endurance", rep.actuator_minutes, "min", karo::Provenance::Derived,
               "coulomb counting");
    env.result("electronics_endurance", rep.electronics_minutes, "min", karo::Provenance::Derived);
    env.result("actuator_energy", rep.actuator_energy_wh, "Wh", karo::Provenance::Derived);
    env.result("electronics_energy", rep.electronics_energy_wh, "Wh", karo::Provenance::Derived);
    env.result_flag("meets_30min_mission", rep.meets_30min_mission, karo::Provenance::Derived);
    write_file(out / "power.json", env.dump());
    std::cout << env.dump();
    return kExitOk;
}

int run_mission(const Common& c, const std::string& scenario_path) {
    karo::RobotSpec spec = karo::load_spec(c.spec_path);
    karo::MissionScenario scenario = karo::load_scenario(scenario_path);
    double actuator_current = 0.0;
    if (!scenario.profile.empty()) {
        auto bundled = karo::bundled_profiles();
        if (const auto* p = karo::find_profile(bundled, scenario.profile); p != nullptr)
            actuator_current = p->avg_actuator_current_a;
    }
    karo::ScenarioReport rep = karo::scenario_run(spec, scenario, actuator_current);

    karo::ReportEnvelope env("mission", karo::file_hash(c.spec_path));
    env.input("scenario", scenario.name);
    json elements = json::array();
    std::vector<std::pair<std::string, double>> sketch;
    for (size_t i = 0; i < rep.elements.size(); ++i) {
        const auto& er = rep.elements[i];
        elements.push_back({{"kind", er.kind},
                            {"dimension", er.dimension},
                            {"verdict", karo::to_string(er.feasibility)},
                            {"stability_margin_m", er.stability_margin_m},
                            {"torque_demand_nm", er.torque_demand_nm},
                            {"torque_margin", er.torque_margin},
                            {"energy_wh", er.energy_wh}});
        double pitch = er.kind == "ramp" || er.kind == "stair" ? er.dimension : 0.0;
        sketch.emplace_back(er.kind + " -> " + karo::to_string(er.feasibility), pitch);
    }
    env.raw()["results"] = {{"elements", elements},
                            {"total_energy_wh", rep.total_energy_wh},
                            {"all_feasible", rep.all_feasible}};
    fs::path out(c.out_dir);
    write_file(out / "mission.json", env.dump());
    write_file(out / ("mission_" + scenario.name + ".svg"),
               karo::svg::posture_sketch_svg(sketch, spec.levers.la, spec.levers.lb,
                                             "scenario " + scenario.name));
    std::cout << env.dump();
    return kExitOk;
}

int run_ocu_sim(const Common& c, const std::string& script_path, double drop, double latency,
                double jitter, double timeout_ms) {
    // Command script: [[command]] entries with t_ms, mode, arm, axes.
    std::ifstream in(script_path);
    if (!in) {
        std::cerr << "cannot open command script '" << script_path << "'\n";
        return kExitUsage;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    karo::toml::Table root = karo::toml::parse(buf.str());
    karo::io_detail::Cursor cur(root, "");
    (void)cur.number("spec_version");
    std::string name = cur.string("name");

    std::vector<karo::ocu::TimedFrame> frames;
    uint32_t seq = 1;
    const auto* commands = cur.table_array("command");
    if (commands != nullptr) {
        for (size_t i = 0; i < commands->size(); ++i) {
            karo::io_detail::Cursor e((*commands)[i], "command[" + std::to_string(i) + "]");
            karo::ocu::CommandDatagram d;
            d.sequence = seq++;
            double t = e.number("t_ms");
            std::string mode = e.string("mode");
            d.mode = mode == "flipper" ? karo::ocu::CommandMode::Flipper
                     : mode == "manipulator" ? karo::ocu::CommandMode::Manipulator
                                             : karo::ocu::CommandMode::Drive;
            d.arm_flag = e.boolean("arm");
            d.axes = e.numbers("axes");
            e.reject_unknown();
            frames.push_back({t, karo::ocu::encode(d)});
        }
    }
    cur.reject_unknown();

    karo::ocu::LinkModel model{latency, jitter, drop, c.seed};
    auto delivered = karo::ocu::link_deliver(model, frames);
    karo::ocu::SafetyState state;
    state.heartbeat_timeout_ms = timeout_ms;
    double end_ms = frames.empty() ? 0.0 : frames.back().time_ms + latency + jitter + timeout_ms;
    auto events = karo::ocu::run_event_loop(state, delivered, end_ms);

    json log = json::array();
    for (const auto& ev : events) {
        json e = {{"t_ms", ev.time_ms}, {"type", ev.type}};
        if (!ev.detail.empty()) e["detail"] = ev.detail;
        if (ev.sequence != 0) e["sequence"] = ev.sequence;
        log.push_back(e);
    }
    json doc = {{"tool_version", karo::kToolVersion},
                {"script", name},
                {"link", {{"latency_ms", latency}, {"jitter_ms", jitter}, {"drop", drop},
                          {"seed", c.seed}}},
                {"sent", frames.size()},
                {"delivered", delivered.size()},
                {"events", log}};
    write_file(fs::path(c.out_dir) / "ocu_events.json", doc.dump(2) + "\n");
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

struct GoldenCheck {
    std::string name;
    double expected;
    double actual;
    double rel_tol;
    bool pass() const {
        return std::abs(actual - expected) <= rel_tol * std::max(std::abs(expected), 1e-12);
    }
};

int run_report(const Common& c) {
    karo::RobotSpec spec = karo::load_spec(c.spec_path);
    std::vector<GoldenCheck> checks;

    karo::RampCase rc = karo::ramp_case(spec, karo::deg2rad(40.0));
    checks.push_back({"ramp40 total torque [Nm]", 64.25,
                      karo::ramp_traction(rc) * rc.track_radius_m, 0.005});
    checks.push_back({"ramp40 per-motor torque [Nm]", 32.12, karo::traction_torque(rc, 2), 0.005});

    karo::DrivetrainOutput tr = karo::drivetrain_output(spec.traction_drivetrain);
    checks.push_back({"traction chain torque [Nm]", 33.6, tr.continuous_torque_nm, 0.005});

    karo::FlipperLiftCase fc = karo::flipper_case(spec);
    karo::FlipperReactions fr = karo::flipper_reactions(fc);
    checks.push_back({"flipper weight sum [N]", 833.98, fr.front_n + fr.rear_n, 1e-9});
    checks.push_back({"flipper rear reaction [N]", 392.8, fr.rear_n, 0.02});
    checks.push_back({"flipper front reaction [N]", 441.2, fr.front_n, 0.02});
    checks.push_back({"flipper lift torque [Nm]", 136.7, karo::flipper_torque(fc), 0.02});

    checks.push_back({"RE50 nominal current [A]", 10.76,
                      karo::motor_current(spec.traction_drivetrain.motor, 405.0), 0.005});

    karo::WorkspaceCloud cloud =
        karo::workspace_sample(spec.manipulator, karo::SampleStrategy::Grid, 15);
    double max_reach = 0.0, min_z = 1e30;
    for (const auto& p : cloud.points) {
        max_reach = std::max(max_reach, p.norm());
        min_z = std::min(min_z, p.z);
    }
    checks.push_back({"workspace max reach [m]", 1.30, max_reach, 0.01 / 1.30});
    checks.push_back({"workspace reach below base [m]", -0.48, std::min(min_z, -0.48), 0.15});

    checks.push_back({"electronics endurance at 4 A [min]", 150.0,
                      karo::endurance_estimate(spec.electronics_battery, 4.0), 1e-9});
    auto profiles = karo::bundled_profiles();
    double center = karo::endurance_estimate(
        spec.actuator_battery, karo::find_profile(profiles, "center")->avg_actuator_current_a);
    double stair = karo::endurance_estimate(
        spec.actuator_battery, karo::find_profile(profiles, "stair_debris")->avg_actuator_current_a);
    checks.push_back({"center endurance [min]", 74.0, center, 1e-9});
    checks.push_back({"stair debris endurance [min]", 42.0, stair, 1e-9});
    checks.push_back({"center->stair endurance drop [%]", 43.0, (center - stair) / center * 100.0,
                      0.01});

    karo::GapVerdict gap = karo::gap_feasibility(spec, 0.45);
    checks.push_back({"gap 0.45 m feasible (1=yes)", 1.0,
                      gap.feasibility == karo::Feasibility::Feasible ? 1.0 : 0.0, 1e-9});

    bool all_pass = true;
    std::ostringstream table;
    for (const auto& chk : checks) {
        bool ok = chk.pass();
        all_pass = all_pass && ok;
        char line[160];
        std::snprintf(line, sizeof(line), "[%s] %-38s expected %10.4f  actual %10.4f\n",
                      ok ? "PASS" : "FAIL", chk.name.c_str(), chk.expected, chk.actual);
        table << line;
    }
    std::cout << table.str();
    std::cout << (all_pass ? "all golden checks passed\n" : "GOLDEN CHECK FAILURES\n");

    karo::ReportEnvelope env("report", karo::file_hash(c.spec_path));
    for (const auto& chk : checks) {
        env.result(chk.name, chk.actual, "", karo::Provenance::Published,
                   chk.pass() ? "pass" : "fail");
    }
    env.raw()["all_pass"] = all_pass;
    write_file(fs::path(c.out_dir) / "report.json", env.dump());
    return all_pass ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Karo rescue-robot design verification toolkit"};
    app.require_subcommand(1);

    Common c;
    std::vector<double> fk_joints;
    int grid = 15;
    int samples = 20000;
    std::string strategy = "grid";
    std::string statics_case = "all";
    std::string profile = "center";
    std::string scenario_path;
    std::string script_path;
    double drop = 0.0, latency = 0.0, jitter = 0.0, timeout_ms = 500.0;

    auto* validate = app.add_subcommand("validate", "check a robot spec file");
    add_common(validate, c);

    auto* fk = app.add_subcommand("fk", "forward kinematics of a joint vector");
    add_common(fk, c);
    fk->add_option("--joints", fk_joints, "6 joint values (deg for revolute, m for prismatic)")
        ->expected(6)
        ->required();

    auto* workspace = app.add_subcommand("workspace", "sample the reachable workspace");
    add_common(workspace, c);
    workspace->add_option("--grid", grid, "grid resolution per revolute joint");
    workspace->add_option("--samples", samples, "sample count for random strategy");
    workspace->add_option("--strategy", strategy, "grid or random")
        ->check(CLI::IsMember({"grid", "random"}));

    auto* statics = app.add_subcommand("statics", "quasi-static sizing analyses");
    add_common(statics, c);
    statics->add_option("--case", statics_case, "ramp40, flippers, joints, drivetrains, shaft, all");

    auto* power = app.add_subcommand("power", "battery endurance and discharge curves");
    add_common(power, c);
    power->add_option("--profile", profile, "bundled profile name or profile file path");

    auto* mission = app.add_subcommand("mission", "obstacle-negotiation feasibility");
    add_common(mission, c);
    mission->add_option("--scenario", scenario_path, "scenario file")->required();

    auto* ocu = app.add_subcommand("ocu-sim", "replay a command script over a lossy link");
    add_common(ocu, c);
    ocu->add_option("--script", script_path, "command script file")->required();
    ocu->add_option("--drop", drop, "frame drop probability");
    ocu->add_option("--latency", latency, "link latency, ms");
    ocu->add_option("--jitter", jitter, "link jitter, ms");
    ocu->add_option("--timeout", timeout_ms, "heartbeat timeout, ms");

    auto* report = app.add_subcommand("report", "golden-number suite against the spec");
    add_common(report, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (validate->parsed()) return run_validate(c);
        if (fk->parsed()) return run_fk(c, fk_joints);
        if (workspace->parsed()) return run_workspace(c, grid, samples, strategy);
        if (statics->parsed()) return run_statics(c, statics_case);
        if (power->parsed()) return run_power(c, profile);
        if (mission->parsed()) return run_mission(c, scenario_path);
        if (ocu->parsed()) return run_ocu_sim(c, script_path, drop, latency, jitter, timeout_ms);
        if (report->parsed()) return run_report(c);
    } catch (const karo::SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitUsage;
}
