#pragma once

#include <string>
#include <vector>

#include "aivd/error.hpp"

namespace aivd {

enum class ValidationProfile { Submission, Triage, Disclosure };

std::string profile_name(ValidationProfile p);
ValidationProfile profile_from_name(const std::string& name);  // throws BAD_PROFILE

enum class FindingLevel { Error, Warning };

struct Finding {
    std::string code;     // e.g. MISSING_FIELD, DANGLING_WEAKNESS_REF
    std::string path;     // dotted field path
    std::string message;
    FindingLevel level = FindingLevel::Error;

    bool operator==(const Finding&) const = default;
};

struct ValidationReport {
    ValidationProfile profile = ValidationProfile::Submission;
    std::vector<Finding> findings;

    bool valid() const {
        for (const auto& f : findings)
            if (f.level == FindingLevel::Error) return false;
        return true;
    }

    void error(std::string code, std::string path, std::string message) {
        findings.push_back({std::move(code), std::move(path), std::move(message),
                            FindingLevel::Error});
    }
    void warning(std::string code, std::string path, std::string message) {
        findings.push_back({std::move(code), std::move(path), std::move(message),
                            FindingLevel::Warning});
    }
};

// Raised by operations gated on a validation profile; carries the full
// report for error surfaces (API 422 bodies, CLI diagnostics).
class ValidationError : public Error {
public:
    explicit ValidationError(ValidationReport report)
        : Error("VALIDATION_FAILED", summarize(report)), report_(std::move(report)) {}

    const ValidationReport& report() const noexcept { return report_; }

private:
    static std::string summarize(const ValidationReport& report) {
        std::string msg = "validation failed under the " + profile_name(report.profile) +
                          " profile:";
        for (const auto& f : report.findings)
            if (f.level == FindingLevel::Error) msg += " [" + f.code + " at " + f.path + "]";
        return msg;
    }

    ValidationReport report_;
};

}  // namespace aivd
