#include "aivd/validation.hpp"

#include "aivd/error.hpp"

namespace aivd {

std::string profile_name(ValidationProfile p) {
    switch (p) {
        case ValidationProfile::Submission: return "Submission";
        case ValidationProfile::Triage: return "Triage";
        case ValidationProfile::Disclosure: return "Disclosure";
    }
    return {};
}

ValidationProfile profile_from_name(const std::string& name) {
    for (ValidationProfile p : {ValidationProfile::Submission, ValidationProfile::Triage,
                                ValidationProfile::Disclosure})
        if (profile_name(p) == name) return p;
    // Accept lowercase too; CLI flags arrive that way.
    if (name == "submission") return ValidationProfile::Submission;
    if (name == "triage") return ValidationProfile::Triage;
    if (name == "disclosure") return ValidationProfile::Disclosure;
    fail("BAD_PROFILE", "unknown validation profile '" + name + "'");
}

}  // namespace aivd
