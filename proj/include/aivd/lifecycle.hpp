#pragma once

#include <string>
#include <vector>

#include "aivd/time.hpp"

namespace aivd {

// Disclosure-lifecycle state machine. Rejected and Resolved are terminal.
enum class LifecycleStatus {
    Reported,
    Triaged,
    Confirmed,
    Disclosed,
    Mitigated,
    Resolved,
    Rejected,
    Deferred,
};

std::string status_name(LifecycleStatus s);
LifecycleStatus status_from_name(const std::string& name);  // throws BAD_STATUS

// Allowed edges:
//   Reported  -> Triaged, Rejected
//   Triaged   -> Confirmed, Rejected, Deferred
//   Deferred  -> Triaged
//   Confirmed -> Disclosed, Rejected
//   Disclosed -> Mitigated
//   Mitigated -> Resolved
bool transition_allowed(LifecycleStatus from, LifecycleStatus to);
bool is_terminal(LifecycleStatus s);

struct StatusChange {
    LifecycleStatus from = LifecycleStatus::Reported;
    LifecycleStatus to = LifecycleStatus::Reported;
    std::string actor;
    Timestamp at;
    std::string note;

    bool operator==(const StatusChange&) const = default;
};

}  // namespace aivd
