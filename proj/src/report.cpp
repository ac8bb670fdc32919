#include "eds/report.hpp"

#include <json.hpp>
#include <sstream>

namespace eds {

void Report::pass(const std::string& name, const std::string& detail) {
    verdicts.push_back({name, "pass", detail});
}
void Report::fail(const std::string& name, const std::string& detail) {
    verdicts.push_back({name, "fail", detail});
}
void Report::unknown(const std::string& name, const std::string& detail) {
    verdicts.push_back({name, "unknown", detail});
}

int Report::exit_code() const {
    int code = 0;
    for (const auto& v : verdicts) {
        if (v.status == "unknown") return 3;
        if (v.status == "fail") code = 1;
    }
    return code;
}

std::string Report::text() const {
    std::ostringstream os;
    os << "== " << command << " " << fixture << " ==\n";
    for (const auto& v : verdicts) {
        os << "[" << (v.status == "pass" ? "ok" : v.status == "fail" ? "FAIL" : "??") << "] "
           << v.name;
        if (!v.detail.empty()) os << ": " << v.detail;
        os << "\n";
    }
    for (const auto& [name, rows] : tables) {
        os << name << ":\n";
        for (const auto& [k, val] : rows) os << "  " << k << " = " << val << "\n";
    }
    for (const auto& w : witnesses) os << "witness: " << w << "\n";
    for (const auto& n : notes) os << "note: " << n << "\n";
    return os.str();
}

std::string Report::json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["fixture"] = fixture;
    j["verdicts"] = nlohmann::ordered_json::array();
    for (const auto& v : verdicts)
        j["verdicts"].push_back({{"name", v.name}, {"status", v.status}, {"detail", v.detail}});
    j["tables"] = nlohmann::ordered_json::object();
    for (const auto& [name, rows] : tables) {
        nlohmann::ordered_json t = nlohmann::ordered_json::object();
        for (const auto& [k, val] : rows) t[k] = val;
        j["tables"][name] = t;
    }
    j["witnesses"] = witnesses;
    j["notes"] = notes;
    return j.dump(2) + "\n";
}

} // namespace eds
