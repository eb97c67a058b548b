#pragma once

#include <memory>
#include <string>

#include "aivd/registry.hpp"

namespace httplib {
class Server;
}

namespace aivd::service {

// HTTP facade over the registry. Every handler is a thin adapter around
// exactly one module operation; record payloads are the canonical
// document bytes.
class Service {
public:
    explicit Service(registry::Registry& reg);
    ~Service();

    // Blocking. Errors: BIND_FAILURE.
    void run(const std::string& host, int port);
    void stop();

    // Underlying server, for in-process tests (ephemeral ports).
    httplib::Server& server();

private:
    void setup_routes();

    registry::Registry& registry_;
    std::unique_ptr<httplib::Server> server_;
};

// Parses "host:port" (default port 8640).
std::pair<std::string, int> parse_bind_address(const std::string& addr);

}  // namespace aivd::service
