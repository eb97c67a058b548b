#include "aivd/service.hpp"

#include <httplib.h>

#include "aivd/error.hpp"
#include "aivd/report_json.hpp"
#include "json_field.hpp"

namespace aivd::service {

using record::AiCveId;

namespace {

int status_for(const std::string& code) {
    if (code == "VALIDATION_FAILED") return 422;
    if (code == "NOT_FOUND") return 404;
    if (code == "ILLEGAL_TRANSITION") return 409;
    static const char* kBadRequest[] = {"BAD_", "MALFORMED_", "MISSING_", "DUPLICATE_",
                                        "UNKNOWN_", "YEAR_", "OUT_OF_RANGE", "PROTECTED_",
                                        "GAP_", "CORRUPT_", "CLOCK_", "EMPTY_", "FUTURE_"};
    for (const char* prefix : kBadRequest)
        if (code.rfind(prefix, 0) == 0) return 400;
    return 500;
}

void write_error(httplib::Response& res, const std::string& code, const std::string& message,
                 Json details = nullptr) {
    Json body = Json::object();
    body["code"] = code;
    body["message"] = message;
    if (!details.is_null()) body["details"] = std::move(details);
    res.status = status_for(code);
    res.set_content(dump_canonical(body), "application/json");
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
    try {
        fn();
    } catch (const ValidationError& e) {
        write_error(res, e.code(), e.what(), report_to_json(e.report()));
    } catch (const Error& e) {
        write_error(res, e.code(), e.what());
    } catch (const std::exception& e) {
        write_error(res, "INTERNAL", e.what());
    }
}

void write_json(httplib::Response& res, const Json& body, int status = 200) {
    res.status = status;
    res.set_content(dump_canonical(body), "application/json");
}

Json page_to_json(const registry::QueryPage& page) {
    Json records = Json::array();
    for (const auto& r : page.records) records.push_back(record::serialize_record(r));
    return Json{{"records", std::move(records)},
                {"total", page.total},
                {"page", page.page},
                {"page_size", page.page_size}};
}

registry::QueryFilter filter_from_request(const httplib::Request& req) {
    registry::QueryFilter f;
    if (req.has_param("weakness")) f.weakness = req.get_param_value("weakness");
    if (req.has_param("product"))
        f.product = record::ProductIdentifier::parse(req.get_param_value("product"));
    if (req.has_param("vendor")) f.vendor = req.get_param_value("vendor");
    if (req.has_param("status")) f.status.insert(status_from_name(req.get_param_value("status")));
    if (req.has_param("min_score")) f.min_score = std::stod(req.get_param_value("min_score"));
    if (req.has_param("max_score")) f.max_score = std::stod(req.get_param_value("max_score"));
    if (req.has_param("from")) f.from = Date::parse(req.get_param_value("from"));
    if (req.has_param("to")) f.to = Date::parse(req.get_param_value("to"));
    if (req.has_param("q")) f.text = req.get_param_value("q");
    if (req.has_param("page")) f.page = std::stoi(req.get_param_value("page"));
    if (req.has_param("page_size")) f.page_size = std::stoi(req.get_param_value("page_size"));
    return f;
}

constexpr char kIdPattern[] = R"(/api/v1/records/(AI-CVE-\d{4}-\d+))";

}  // namespace

Service::Service(registry::Registry& reg)
    : registry_(reg), server_(std::make_unique<httplib::Server>()) {
    setup_routes();
}

Service::~Service() = default;

httplib::Server& Service::server() { return *server_; }

void Service::setup_routes() {
    auto& svr = *server_;

    svr.Post("/api/v1/records", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            if (!req.has_header("X-CNA-ID"))
                fail("MISSING_CNA_HEADER", "X-CNA-ID header is required");
            auto draft = record::parse_record_text(req.body);
            auto stored = registry_.submit(std::move(draft), req.get_header_value("X-CNA-ID"));
            res.status = 201;
            res.set_content(record::serialize_record_text(stored), "application/json");
        });
    });

    svr.Get("/api/v1/records", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { write_json(res, page_to_json(registry_.query(filter_from_request(req)))); });
    });

    svr.Get(std::string(kIdPattern) + "/aibom",
            [this](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                    auto rec = registry_.get(AiCveId::parse(req.matches[1]));
                    if (rec.ai_system.aibom) {
                        write_json(res, aibom::serialize_aibom(*rec.ai_system.aibom));
                        return;
                    }
                    if (!rec.ai_system.aibom_ref.empty()) {
                        if (auto doc = registry_.find_aibom(rec.ai_system.aibom_ref)) {
                            write_json(res, aibom::serialize_aibom(*doc));
                            return;
                        }
                    }
                    fail("NOT_FOUND", "record has no AIBOM attached");
                });
            });

    svr.Post(std::string(kIdPattern) + "/status",
             [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                     Json body = detail::parse_json_text(req.body, "status request");
                     auto rec = registry_.transition_status(
                         AiCveId::parse(req.matches[1]),
                         status_from_name(detail::get_string(body, "to", "to")),
                         detail::get_string(body, "actor", "actor"),
                         detail::get_string(body, "note", "note"));
                     res.set_content(record::serialize_record_text(rec), "application/json");
                 });
             });

    svr.Post(std::string(kIdPattern) + "/rescore",
             [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                     Json body = detail::parse_json_text(req.body, "rescore request");
                     auto rec = registry_.rescore(
                         AiCveId::parse(req.matches[1]),
                         severity::parse_vector(detail::get_string(body, "vector", "vector")),
                         severity::trigger_from_name(
                             detail::get_string(body, "trigger", "trigger")),
                         detail::get_string(body, "actor", "actor"),
                         detail::get_string(body, "note", "note"));
                     res.set_content(record::serialize_record_text(rec), "application/json");
                 });
             });

    svr.Get(kIdPattern, [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto rec = registry_.get(AiCveId::parse(req.matches[1]));
            res.set_content(record::serialize_record_text(rec), "application/json");
        });
    });

    svr.Patch(kIdPattern, [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            Json fields = detail::parse_json_text(req.body, "field update");
            std::string actor = req.has_header("X-Actor") ? req.get_header_value("X-Actor")
                                                          : "api";
            auto rec = registry_.update_fields(AiCveId::parse(req.matches[1]), fields, actor);
            res.set_content(record::serialize_record_text(rec), "application/json");
        });
    });

    svr.Get("/api/v1/catalog/weaknesses",
            [this](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                    Json out = Json::array();
                    if (req.has_param("class")) {
                        auto cls =
                            catalog::weakness_class_from_name(req.get_param_value("class"));
                        for (const auto& w : catalog::list_by_class(registry_.cat(), cls))
                            out.push_back(catalog::serialize_weakness(w));
                    } else {
                        for (const auto& [id, w] : registry_.cat().weaknesses) {
                            (void)id;
                            out.push_back(catalog::serialize_weakness(w));
                        }
                    }
                    write_json(res, out);
                });
            });

    svr.Get(R"(/api/v1/catalog/weaknesses/(AI-CWE-\d+)/mitigations)",
            [this](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                    Json out = Json::array();
                    for (const auto& m :
                         catalog::get_mitigations_for(registry_.cat(), req.matches[1]))
                        out.push_back(catalog::serialize_mitigation(m));
                    write_json(res, out);
                });
            });

    svr.Get(R"(/api/v1/catalog/weaknesses/(AI-CWE-\d+))",
            [this](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                    write_json(res, catalog::serialize_weakness(
                                        catalog::get_weakness(registry_.cat(), req.matches[1])));
                });
            });

    svr.Get(R"(/api/v1/catalog/mitigations/(MIT-\d+))",
            [this](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                    write_json(res, catalog::serialize_mitigation(catalog::get_mitigation(
                                        registry_.cat(), req.matches[1])));
                });
            });

    svr.Post("/api/v1/score", [](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            Json body = detail::parse_json_text(req.body, "score request");
            auto vector = severity::parse_vector(detail::get_string(body, "vector", "vector"));
            auto score = severity::compute_score(vector);
            write_json(res, Json{{"value", score.value},
                                 {"band", severity::band_name(score.band)},
                                 {"vector", severity::render_vector(score.vector)}});
        });
    });

    svr.Post("/api/v1/aibom/validate", [](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto doc = aibom::parse_aibom_text(req.body);
            write_json(res, report_to_json(aibom::validate_aibom(doc)));
        });
    });
}

void Service::run(const std::string& host, int port) {
    if (!server_->listen(host, port))
        fail("BIND_FAILURE", "cannot bind " + host + ":" + std::to_string(port));
}

void Service::stop() { server_->stop(); }

std::pair<std::string, int> parse_bind_address(const std::string& addr) {
    auto colon = addr.rfind(':');
    if (colon == std::string::npos) return {addr, 8640};
    return {addr.substr(0, colon), std::stoi(addr.substr(colon + 1))};
}

}  // namespace aivd::service
