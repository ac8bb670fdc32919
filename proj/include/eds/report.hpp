#ifndef EDS_REPORT_HPP
#define EDS_REPORT_HPP

#include <map>
#include <string>
#include <vector>

namespace eds {

// structured analysis report: one document per command invocation,
// deterministic field order for regression diffs
struct Report {
    std::string command;
    std::string fixture;

    struct Verdict {
        std::string name;
        std::string status; // "pass" | "fail" | "unknown"
        std::string detail;
    };
    std::vector<Verdict> verdicts;
    // table name -> ordered (key, value) rows
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> tables;
    std::vector<std::string> witnesses;
    std::vector<std::string> notes;

    void pass(const std::string& name, const std::string& detail = "");
    void fail(const std::string& name, const std::string& detail = "");
    void unknown(const std::string& name, const std::string& detail = "");

    // 0 all pass, 1 verdict failure, 3 undecided verdict
    int exit_code() const;
    std::string text() const;
    std::string json() const;
};

} // namespace eds

#endif
