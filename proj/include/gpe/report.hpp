#pragma once

#include <json.hpp>

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace gpe {

enum class Command : std::uint8_t { Classify, VerifyProper, VerifyFrame, HMap, Equivalence };

inline std::string command_name(Command c) {
    switch (c) {
        case Command::Classify: return "classify";
        case Command::VerifyProper: return "verify-proper";
        case Command::VerifyFrame: return "verify-frame";
        case Command::HMap: return "h-map";
        case Command::Equivalence: return "equivalence";
    }
    return "?";
}

enum class OutputFormat : std::uint8_t { Text, Json };

/// One verification line: a named check, whether it passed, and the worst
/// violation observed (0 for structural checks).
struct CheckResult {
    std::string name;
    bool pass = true;
    double max_violation = 0;
};

struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config; // echoed key/value pairs
    std::vector<CheckResult> checks;
    std::vector<std::string> admissibles;      // labels, when applicable
    std::vector<std::string> emitted_files;
    std::vector<std::string> notes;
    std::string caveat;                        // set on an empty admissible list
    std::string error;                         // set on configuration errors
    nlohmann::ordered_json extra;              // command-specific payload (h-map table, ...)
    double wall_time_ms = 0;

    [[nodiscard]] bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline nlohmann::ordered_json report_to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["command"] = r.command;
    nlohmann::ordered_json cfg;
    for (const auto& [k, v] : r.config) cfg[k] = v;
    j["config"] = cfg;
    if (!r.error.empty()) j["error"] = r.error;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"max_violation", c.max_violation}});
    j["checks"] = checks;
    if (!r.admissibles.empty()) j["admissibles"] = r.admissibles;
    if (!r.caveat.empty()) j["caveat"] = r.caveat;
    if (!r.emitted_files.empty()) j["emitted_files"] = r.emitted_files;
    if (!r.notes.empty()) j["notes"] = r.notes;
    if (!r.extra.is_null()) j["extra"] = r.extra;
    j["all_pass"] = r.all_pass();
    j["wall_time_ms"] = r.wall_time_ms;
    return j;
}

inline std::string emit_report(const Report& r, OutputFormat format) {
    if (format == OutputFormat::Json) return report_to_json(r).dump(2) + "\n";
    std::ostringstream os;
    os << "command: " << r.command << "\n";
    for (const auto& [k, v] : r.config) os << "  " << k << " = " << v << "\n";
    if (!r.error.empty()) os << "error: " << r.error << "\n";
    for (const auto& c : r.checks) {
        os << "check " << c.name << ": " << (c.pass ? "PASS" : "FAIL");
        os << std::scientific << std::setprecision(3) << " (max violation " << c.max_violation
           << ")\n";
        os.unsetf(std::ios::floatfield);
    }
    for (std::size_t i = 0; i < r.admissibles.size(); ++i)
        os << "admissible " << i + 1 << ": " << r.admissibles[i] << "\n";
    if (!r.caveat.empty()) os << "caveat: " << r.caveat << "\n";
    for (const auto& f : r.emitted_files) os << "emitted: " << f << "\n";
    for (const auto& n : r.notes) os << "note: " << n << "\n";
    if (!r.extra.is_null()) {
        for (const auto& [key, val] : r.extra.items()) {
            if (val.is_array()) {
                os << key << ":\n";
                for (const auto& el : val) os << "  " << el.dump() << "\n";
            } else {
                os << key << ": " << val.dump() << "\n";
            }
        }
    }
    os << "result: " << (r.all_pass() ? "PASS" : "FAIL") << "\n";
    os << "wall_time_ms: " << r.wall_time_ms << "\n";
    return os.str();
}

} // namespace gpe
