#pragma once

// Scenario file loader; same key/value schema family as the robot spec.

#include <fstream>
#include <sstream>

#include "karo/mission.hpp"
#include "karo/power.hpp"
#include "karo/spec_io.hpp"
#include "karo/toml.hpp"

namespace karo {

inline FlipperVariant parse_flipper_variant(const std::string& name) {
    if (name == "none") return FlipperVariant::None;
    if (name == "front-pair-regular") return FlipperVariant::FrontPairRegular;
    if (name == "front-pair-triangular") return FlipperVariant::FrontPairTriangular;
    if (name == "two-pair-two-link") return FlipperVariant::TwoPairTwoLink;
    if (name == "triangular-plus-regular") return FlipperVariant::TriangularPlusRegular;
    if (name == "two-pair-regular") return FlipperVariant::TwoPairRegular;
    throw SpecError("unknown flipper variant '" + name + "'");
}

inline std::string to_string(FlipperVariant v) {
    switch (v) {
        case FlipperVariant::None: return "none";
        case FlipperVariant::FrontPairRegular: return "front-pair-regular";
        case FlipperVariant::FrontPairTriangular: return "front-pair-triangular";
        case FlipperVariant::TwoPairTwoLink: return "two-pair-two-link";
        case FlipperVariant::TriangularPlusRegular: return "triangular-plus-regular";
        case FlipperVariant::TwoPairRegular: return "two-pair-regular";
    }
    return "?";
}

inline MissionScenario parse_scenario(const std::string& text) {
    toml::Table root = toml::parse(text);
    io_detail::Cursor c(root, "");
    MissionScenario scenario;
    int version = static_cast<int>(c.number("spec_version"));
    if (version != 1) throw SpecError("unsupported scenario spec_version");
    scenario.name = c.string("name");
    if (const auto* p = c.optional("profile"); p != nullptr) scenario.profile = p->string;

    const auto* elements = c.table_array("element");
    if (elements != nullptr) {
        for (size_t i = 0; i < elements->size(); ++i) {
            io_detail::Cursor e((*elements)[i], "element[" + std::to_string(i) + "]");
            ScenarioElement el;
            std::string kind = e.string("kind");
            if (kind == "ramp") {
                el.kind = ElementKind::Ramp;
                el.angle_rad = deg2rad(e.number("angle_deg"));
            } else if (kind == "stair") {
                el.kind = ElementKind::Stair;
                el.angle_rad = deg2rad(e.number("angle_deg"));
                el.tread_m = e.number_or("tread_m", 0.0);
                el.riser_m = e.number_or("riser_m", 0.0);
            } else if (kind == "step") {
                el.kind = ElementKind::Step;
                el.height_m = e.number("height_m");
            } else if (kind == "gap") {
                el.kind = ElementKind::Gap;
                el.width_m = e.number("width_m");
            } else {
                throw SpecError("unknown element kind '" + kind + "'");
            }
            double dim = el.kind == ElementKind::Step  ? el.height_m
                         : el.kind == ElementKind::Gap ? el.width_m
                                                       : el.angle_rad;
            if (!(dim > 0.0)) throw SpecError("scenario element dimension must be positive");
            el.duration_min = e.number_or("duration_min", 0.0);
            if (const auto* v = e.optional("flipper_variant"); v != nullptr)
                el.variant = parse_flipper_variant(v->string);
            e.reject_unknown();
            scenario.elements.push_back(el);
        }
    }
    c.reject_unknown();
    return scenario;
}

inline MissionScenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

// Profile file: [profile] with currents and duration.
inline MissionProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open profile file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    toml::Table root = toml::parse(buf.str());
    io_detail::Cursor c(root, "");
    MissionProfile p;
    p.name = c.string("name");
    p.avg_actuator_current_a = c.number("avg_actuator_current_a");
    p.avg_electronics_current_a = c.number_or("avg_electronics_current_a", 0.0);
    p.duration_requested_min = c.number_or("duration_requested_min", 0.0);
    if (const auto* prov = c.optional("provenance"); prov != nullptr) p.provenance = prov->string;
    c.reject_unknown();
    return p;
}

}  // namespace karo
