#pragma once

#include "aivd/json.hpp"
#include "aivd/validation.hpp"

namespace aivd {

inline Json report_to_json(const ValidationReport& report) {
    Json findings = Json::array();
    for (const auto& f : report.findings)
        findings.push_back({{"code", f.code},
                            {"path", f.path},
                            {"message", f.message},
                            {"level", f.level == FindingLevel::Error ? "Error" : "Warning"}});
    return Json{{"profile", profile_name(report.profile)},
                {"valid", report.valid()},
                {"findings", std::move(findings)}};
}

}  // namespace aivd
