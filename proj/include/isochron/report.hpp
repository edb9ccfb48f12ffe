#ifndef ISOCHRON_REPORT_HPP
#define ISOCHRON_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace isochron {

std::string fnv1a_digest(const std::string& data);

// Deterministically serializable run summary (nlohmann::json orders keys).
struct RunReport {
    struct Item {
        std::string name;
        std::string status;   // pass | fail | skip
        std::string detail;
        double time_ms = -1;
    };
    std::string command;
    std::string inputs_digest;
    std::vector<Item> checks;
    bool pass = true;

    void add(std::string name, std::string status, std::string detail = "", double ms = -1) {
        pass = pass && status != "fail";
        checks.push_back({std::move(name), std::move(status), std::move(detail), ms});
    }
    nlohmann::json to_json(bool include_timings = true) const;
    std::string to_text() const;
};

} // namespace isochron

#endif
