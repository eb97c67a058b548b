#include "aivd/lifecycle.hpp"

#include <array>

#include "aivd/error.hpp"

namespace aivd {

namespace {

constexpr std::array<std::pair<const char*, LifecycleStatus>, 8> kStatuses{{
    {"Reported", LifecycleStatus::Reported},
    {"Triaged", LifecycleStatus::Triaged},
    {"Confirmed", LifecycleStatus::Confirmed},
    {"Disclosed", LifecycleStatus::Disclosed},
    {"Mitigated", LifecycleStatus::Mitigated},
    {"Resolved", LifecycleStatus::Resolved},
    {"Rejected", LifecycleStatus::Rejected},
    {"Deferred", LifecycleStatus::Deferred},
}};

}  // namespace

std::string status_name(LifecycleStatus s) {
    for (const auto& [n, v] : kStatuses)
        if (v == s) return n;
    return {};
}

LifecycleStatus status_from_name(const std::string& name) {
    for (const auto& [n, v] : kStatuses)
        if (name == n) return v;
    fail("BAD_STATUS", "unknown lifecycle status '" + name + "'");
}

bool transition_allowed(LifecycleStatus from, LifecycleStatus to) {
    using S = LifecycleStatus;
    switch (from) {
        case S::Reported: return to == S::Triaged || to == S::Rejected;
        case S::Triaged: return to == S::Confirmed || to == S::Rejected || to == S::Deferred;
        case S::Deferred: return to == S::Triaged;
        case S::Confirmed: return to == S::Disclosed || to == S::Rejected;
        case S::Disclosed: return to == S::Mitigated;
        case S::Mitigated: return to == S::Resolved;
        case S::Rejected:
        case S::Resolved: return false;
    }
    return false;
}

bool is_terminal(LifecycleStatus s) {
    return s == LifecycleStatus::Rejected || s == LifecycleStatus::Resolved;
}

}  // namespace aivd
