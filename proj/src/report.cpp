#include "isochron/report.hpp"

#include <iomanip>
#include <sstream>

namespace isochron {

std::string fnv1a_digest(const std::string& data) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) h = (h ^ c) * 1099511628211ULL;
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

nlohmann::json RunReport::to_json(bool include_timings) const {
    nlohmann::json j;
    j["command"] = command;
    j["inputs_digest"] = inputs_digest;
    j["verdict"] = pass ? "pass" : "fail";
    nlohmann::json items = nlohmann::json::array();
    for (const auto& it : checks) {
        nlohmann::json e;
        e["name"] = it.name;
        e["status"] = it.status;
        if (!it.detail.empty()) e["detail"] = it.detail;
        if (include_timings && it.time_ms >= 0) e["time_ms"] = it.time_ms;
        items.push_back(e);
    }
    j["checks"] = items;
    return j;
}

std::string RunReport::to_text() const {
    std::ostringstream os;
    for (const auto& it : checks) {
        os << "  [" << it.status << "] " << it.name;
        if (!it.detail.empty()) os << "  (" << it.detail << ")";
        os << "\n";
    }
    os << "verdict: " << (pass ? "pass" : "fail") << "\n";
    return os.str();
}

} // namespace isochron
