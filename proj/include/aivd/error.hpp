#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace aivd {

// Domain failure with a stable machine-readable code (e.g. "BAD_ID",
// "ILLEGAL_TRANSITION"). Codes surface verbatim in API error bodies and
// CLI diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
    throw Error(std::move(code), message);
}

}  // namespace aivd
