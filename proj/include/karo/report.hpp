#pragma once

// Report envelope shared by every CLI artifact: tool version, spec hash,
// echoed inputs, and results where every number carries a provenance tag
// ("published" figures, "derived" values, or "assumption").  No timestamps
// so identical inputs produce byte-identical outputs.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace karo {

inline constexpr const char* kToolVersion = "1.0.0";

inline uint64_t fnv1a64(const std::string& data) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << v;
    return os.str();
}

inline std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return hex64(fnv1a64(buf.str()));
}

enum class Provenance { Published, Derived, Assumption };

inline std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Published: return "published";
        case Provenance::Derived: return "derived";
        case Provenance::Assumption: return "assumption";
    }
    return "?";
}

class ReportEnvelope {
public:
    ReportEnvelope(std::string subcommand, std::string spec_hash) {
        json_["tool_version"] = kToolVersion;
        json_["subcommand"] = std::move(subcommand);
        json_["spec_hash"] = std::move(spec_hash);
        json_["inputs"] = nlohmann::json::object();
        json_["results"] = nlohmann::json::array();
    }

    void input(const std::string& key, const nlohmann::json& value) { json_["inputs"][key] = value; }

    void result(const std::string& name, double value, const std::string& unit, Provenance prov,
                const std::string& note = "") {
        nlohmann::json r = {{"name", name}, {"value", value}, {"unit", unit},
                            {"provenance", to_string(prov)}};
        if (!note.empty()) r["note"] = note;
        json_["results"].push_back(r);
    }

    void result_flag(const std::string& name, bool value, Provenance prov,
                     const std::string& note = "") {
        nlohmann::json r = {{"name", name}, {"value", value}, {"provenance", to_string(prov)}};
        if (!note.empty()) r["note"] = note;
        json_["results"].push_back(r);
    }

    nlohmann::json& raw() { return json_; }

    std::string dump() const { return json_.dump(2) + "\n"; }

private:
    nlohmann::json json_;
};

}  // namespace karo
