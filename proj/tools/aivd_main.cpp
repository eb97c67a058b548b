#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "aivd/error.hpp"
#include "aivd/registry.hpp"
#include "aivd/report_json.hpp"
#include "aivd/service.hpp"

namespace fs = std::filesystem;
using namespace aivd;

namespace {

// Exit codes: 0 success, 1 validation/domain failure, 2 usage error,
// 3 I/O or store error.
constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsageError = 2;
constexpr int kStoreError = 3;

bool store_error_code(const std::string& code) {
    return code == "CORRUPT_STORE" || code == "BIND_FAILURE" || code == "CORRUPT_EVENT" ||
           code == "GAP_IN_SEQUENCE" || code == "IO_ERROR";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IO_ERROR", "cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct GlobalOptions {
    std::string data_dir;

    std::string resolve_data_dir() const {
        if (!data_dir.empty()) return data_dir;
        if (const char* env = std::getenv("AIVD_DATA_DIR")) return env;
        return "./aivd-data";
    }

    std::unique_ptr<registry::Registry> open() const {
        return registry::open_store(resolve_data_dir());
    }

    catalog::Catalog load_catalog_only() const {
        const fs::path dir = fs::path(resolve_data_dir()) / "catalog";
        if (fs::is_directory(dir)) return catalog::load_catalog_dir(dir.string());
        return {};
    }
};

severity::EnvironmentalContext parse_env_file(const std::string& path) {
    Json j = Json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) fail("MALFORMED_DOCUMENT", "environment file is not valid JSON");
    severity::EnvironmentalContext env;
    auto req = [&](const char* key, severity::Requirement& out) {
        if (!j.contains(key)) return;
        std::string v = j[key].get<std::string>();
        if (v == "Low") out = severity::Requirement::Low;
        else if (v == "Medium") out = severity::Requirement::Medium;
        else if (v == "High") out = severity::Requirement::High;
        else fail("BAD_METRIC_VALUE", std::string("requirement ") + key + " must be Low/Medium/High");
    };
    req("cr", env.cr);
    req("ir", env.ir);
    req("ar", env.ar);
    req("air", env.air);
    if (j.contains("overrides")) {
        // Overrides reuse the vector grammar: fill a template vector with
        // the overridden metrics and copy the mentioned ones out.
        severity::SeverityVector base;
        std::string text = "AIVSS:1.0/AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:N/DP:N/MI:N/AE:N/DS:N";
        for (const auto& [metric, value] : j["overrides"].items()) {
            std::string pair = "/" + metric + ":" + value.get<std::string>();
            size_t pos = text.find("/" + metric + ":");
            size_t end = text.find('/', pos + 1);
            text = text.substr(0, pos) + pair +
                   (end == std::string::npos ? "" : text.substr(end));
            auto parsed = severity::parse_vector(text);
            if (metric == "AV") env.av = parsed.av;
            else if (metric == "AC") env.ac = parsed.ac;
            else if (metric == "PR") env.pr = parsed.pr;
            else if (metric == "UI") env.ui = parsed.ui;
            else if (metric == "S") env.scope = parsed.scope;
            else if (metric == "C") env.confidentiality = parsed.confidentiality;
            else if (metric == "I") env.integrity = parsed.integrity;
            else if (metric == "A") env.availability = parsed.availability;
            else if (metric == "DP") env.data_poisoning = parsed.data_poisoning;
            else if (metric == "MI") env.model_inversion = parsed.model_inversion;
            else if (metric == "AE") env.adversarial_example = parsed.adversarial_example;
            else if (metric == "DS") env.distribution_shift = parsed.distribution_shift;
            else fail("BAD_METRIC_VALUE", "unknown override metric '" + metric + "'");
        }
    }
    return env;
}

std::string fmt_score(double value) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.1f", value);
    return buf;
}

void print_findings(const ValidationReport& report) {
    for (const auto& f : report.findings)
        std::cout << (f.level == FindingLevel::Error ? "ERROR " : "WARNING ") << f.code << " at "
                  << f.path << ": " << f.message << "\n";
}

void print_record_summary(const record::VulnerabilityRecord& r) {
    std::cout << (r.id ? r.id->to_string() : std::string("(unassigned)")) << "\n";
    if (!r.description.empty()) std::cout << "  description: " << r.description << "\n";
    if (r.report_date) std::cout << "  reported: " << r.report_date->to_string() << "\n";
    if (!r.reported_by.empty()) std::cout << "  reported by: " << r.reported_by << "\n";
    std::cout << "  status: " << status_name(r.status) << "\n";
    if (!r.severity.entries.empty()) {
        const auto& s = r.severity.current().score;
        std::cout << "  severity: " << fmt_score(s.value) << " " << severity::band_name(s.band) << " ("
                  << severity::render_vector(s.vector) << ")\n";
    }
    for (const auto& w : r.weaknesses) std::cout << "  weakness: " << w << "\n";
    for (const auto& v : r.vendors) std::cout << "  vendor: " << v << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"AI vulnerability database toolkit"};
    app.require_subcommand(1);
    GlobalOptions global;
    app.add_option("--data-dir", global.data_dir, "Store root (default $AIVD_DATA_DIR)");

    // validate
    std::string validate_file, validate_profile = "submission";
    auto* cmd_validate = app.add_subcommand("validate", "Validate a record document");
    cmd_validate->add_option("file", validate_file)->required();
    cmd_validate->add_option("--profile", validate_profile,
                             "submission | triage | disclosure");

    // score
    std::string score_vector, score_env;
    auto* cmd_score = app.add_subcommand("score", "Compute a severity score");
    cmd_score->add_option("--vector", score_vector)->required();
    cmd_score->add_option("--env", score_env, "Environmental context JSON file");
    bool score_json = false;
    cmd_score->add_flag("--json", score_json);

    // submit
    std::string submit_file, submit_cna;
    auto* cmd_submit = app.add_subcommand("submit", "Submit a draft record");
    cmd_submit->add_option("file", submit_file)->required();
    cmd_submit->add_option("--cna", submit_cna)->required();
    bool submit_json = false;
    cmd_submit->add_flag("--json", submit_json);

    // show
    std::string show_id;
    bool show_json = false;
    auto* cmd_show = app.add_subcommand("show", "Show a stored record");
    cmd_show->add_option("id", show_id)->required();
    cmd_show->add_flag("--json", show_json);

    // search
    auto* cmd_search = app.add_subcommand("search", "Query stored records");
    std::string s_weakness, s_product, s_vendor, s_status, s_from, s_to, s_text;
    double s_min = -1, s_max = -1;
    int s_page = 1, s_page_size = 50;
    bool search_json = false;
    cmd_search->add_option("--weakness", s_weakness);
    cmd_search->add_option("--product", s_product);
    cmd_search->add_option("--vendor", s_vendor);
    cmd_search->add_option("--status", s_status);
    cmd_search->add_option("--min-score", s_min);
    cmd_search->add_option("--max-score", s_max);
    cmd_search->add_option("--from", s_from);
    cmd_search->add_option("--to", s_to);
    cmd_search->add_option("--q", s_text);
    cmd_search->add_option("--page", s_page);
    cmd_search->add_option("--page-size", s_page_size);
    cmd_search->add_flag("--json", search_json);

    // status
    std::string st_id, st_to, st_actor, st_note;
    auto* cmd_status = app.add_subcommand("status", "Transition a record's lifecycle status");
    cmd_status->add_option("id", st_id)->required();
    cmd_status->add_option("to", st_to)->required();
    cmd_status->add_option("--actor", st_actor)->required();
    cmd_status->add_option("--note", st_note);

    // rescore
    std::string rs_id, rs_vector, rs_trigger, rs_actor = "cli", rs_note;
    auto* cmd_rescore = app.add_subcommand("rescore", "Reassess a record's severity");
    cmd_rescore->add_option("id", rs_id)->required();
    cmd_rescore->add_option("--vector", rs_vector)->required();
    cmd_rescore->add_option("--trigger", rs_trigger)->required();
    cmd_rescore->add_option("--actor", rs_actor);
    cmd_rescore->add_option("--note", rs_note);

    // catalog
    auto* cmd_catalog = app.add_subcommand("catalog", "Inspect the weakness catalog");
    cmd_catalog->require_subcommand(1);
    std::string cat_class, cat_show_id;
    bool cat_json = false;
    auto* cmd_cat_list = cmd_catalog->add_subcommand("list", "List weaknesses");
    cmd_cat_list->add_option("--class", cat_class);
    cmd_cat_list->add_flag("--json", cat_json);
    auto* cmd_cat_show = cmd_catalog->add_subcommand("show", "Show one catalog entry");
    cmd_cat_show->add_option("id", cat_show_id)->required();
    cmd_cat_show->add_flag("--json", cat_json);

    // aibom
    auto* cmd_aibom = app.add_subcommand("aibom", "AIBOM tooling");
    cmd_aibom->require_subcommand(1);
    std::string ab_file, ab_left, ab_right;
    bool ab_json = false;
    auto* cmd_ab_validate = cmd_aibom->add_subcommand("validate", "Validate an AIBOM document");
    cmd_ab_validate->add_option("file", ab_file)->required();
    cmd_ab_validate->add_flag("--json", ab_json);
    auto* cmd_ab_diff = cmd_aibom->add_subcommand("diff", "Diff two AIBOM documents");
    cmd_ab_diff->add_option("a", ab_left)->required();
    cmd_ab_diff->add_option("b", ab_right)->required();
    cmd_ab_diff->add_flag("--json", ab_json);

    // export / import
    std::string export_dir, import_dir;
    auto* cmd_export = app.add_subcommand("export", "Export the store");
    cmd_export->add_option("dir", export_dir)->required();
    auto* cmd_import = app.add_subcommand("import", "Import an exported store");
    cmd_import->add_option("dir", import_dir)->required();

    // serve
    std::string serve_addr;
    auto* cmd_serve = app.add_subcommand("serve", "Run the HTTP API");
    cmd_serve->add_option("--addr", serve_addr, "host:port (default $AIVD_ADDR)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return kUsageError;
    }

    try {
        if (*cmd_validate) {
            auto rec = record::parse_record_text(read_file(validate_file));
            auto report = record::validate_record(rec, profile_from_name(validate_profile),
                                                  global.load_catalog_only());
            print_findings(report);
            if (!report.valid()) return kDomainFailure;
            std::cout << "valid\n";
        } else if (*cmd_score) {
            auto vector = severity::parse_vector(score_vector);
            auto score = score_env.empty()
                             ? severity::compute_score(vector)
                             : severity::apply_environmental(vector, parse_env_file(score_env));
            if (score_json)
                std::cout << dump_canonical(
                    Json{{"value", score.value},
                         {"band", severity::band_name(score.band)},
                         {"vector", severity::render_vector(score.vector)}});
            else
                std::cout << fmt_score(score.value) << " " << severity::band_name(score.band) << "\n";
        } else if (*cmd_submit) {
            auto reg = global.open();
            auto stored = reg->submit(record::parse_record_text(read_file(submit_file)),
                                      submit_cna);
            if (submit_json)
                std::cout << record::serialize_record_text(stored);
            else
                std::cout << stored.id->to_string() << "\n";
        } else if (*cmd_show) {
            auto reg = global.open();
            auto rec = reg->get(record::AiCveId::parse(show_id));
            if (show_json)
                std::cout << record::serialize_record_text(rec);
            else
                print_record_summary(rec);
        } else if (*cmd_search) {
            auto reg = global.open();
            registry::QueryFilter f;
            if (!s_weakness.empty()) f.weakness = s_weakness;
            if (!s_product.empty()) f.product = record::ProductIdentifier::parse(s_product);
            if (!s_vendor.empty()) f.vendor = s_vendor;
            if (!s_status.empty()) f.status.insert(status_from_name(s_status));
            if (s_min >= 0) f.min_score = s_min;
            if (s_max >= 0) f.max_score = s_max;
            if (!s_from.empty()) f.from = Date::parse(s_from);
            if (!s_to.empty()) f.to = Date::parse(s_to);
            if (!s_text.empty()) f.text = s_text;
            f.page = s_page;
            f.page_size = s_page_size;
            auto page = reg->query(f);
            if (search_json) {
                Json arr = Json::array();
                for (const auto& r : page.records) arr.push_back(record::serialize_record(r));
                std::cout << dump_canonical(arr);
            } else {
                for (const auto& r : page.records) {
                    std::cout << r.id->to_string();
                    if (r.report_date) std::cout << "  " << r.report_date->to_string();
                    if (!r.severity.entries.empty()) {
                        const auto& s = r.severity.current().score;
                        std::cout << "  " << fmt_score(s.value) << " " << severity::band_name(s.band);
                    }
                    std::cout << "  " << status_name(r.status) << "\n";
                }
                std::cout << page.total << " match(es)\n";
            }
        } else if (*cmd_status) {
            auto reg = global.open();
            auto rec = reg->transition_status(record::AiCveId::parse(st_id),
                                              status_from_name(st_to), st_actor, st_note);
            std::cout << rec.id->to_string() << " -> " << status_name(rec.status) << "\n";
        } else if (*cmd_rescore) {
            auto reg = global.open();
            auto rec = reg->rescore(record::AiCveId::parse(rs_id),
                                    severity::parse_vector(rs_vector),
                                    severity::trigger_from_name(rs_trigger), rs_actor, rs_note);
            const auto& s = rec.severity.current().score;
            std::cout << fmt_score(s.value) << " " << severity::band_name(s.band) << "\n";
        } else if (*cmd_cat_list) {
            auto cat = global.load_catalog_only();
            std::vector<catalog::AiCweEntry> entries;
            if (!cat_class.empty()) {
                entries = catalog::list_by_class(cat, catalog::weakness_class_from_name(cat_class));
            } else {
                for (const auto& [id, w] : cat.weaknesses) {
                    (void)id;
                    entries.push_back(w);
                }
            }
            if (cat_json) {
                Json arr = Json::array();
                for (const auto& w : entries) arr.push_back(catalog::serialize_weakness(w));
                std::cout << dump_canonical(arr);
            } else {
                for (const auto& w : entries)
                    std::cout << w.id << "  " << catalog::weakness_class_name(w.weakness_class)
                              << "  " << w.name << "\n";
            }
        } else if (*cmd_cat_show) {
            auto cat = global.load_catalog_only();
            Json j = catalog::is_mitigation_id(cat_show_id)
                         ? catalog::serialize_mitigation(catalog::get_mitigation(cat, cat_show_id))
                         : catalog::serialize_weakness(catalog::get_weakness(cat, cat_show_id));
            if (cat_json) {
                std::cout << dump_canonical(j);
            } else {
                for (const auto& [key, value] : j.items())
                    std::cout << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
                              << "\n";
            }
        } else if (*cmd_ab_validate) {
            auto doc = aibom::parse_aibom_text(read_file(ab_file));
            auto report = aibom::validate_aibom(doc);
            if (ab_json) {
                std::cout << dump_canonical(report_to_json(report));
            } else {
                print_findings(report);
                if (report.valid()) std::cout << "valid\n";
            }
            if (!report.valid()) return kDomainFailure;
        } else if (*cmd_ab_diff) {
            auto a = aibom::parse_aibom_text(read_file(ab_left));
            auto b = aibom::parse_aibom_text(read_file(ab_right));
            auto diff = aibom::diff_aibom(a, b);
            if (ab_json) {
                auto entries = [](const std::vector<aibom::DiffEntry>& es) {
                    Json arr = Json::array();
                    for (const auto& e : es) {
                        Json j = Json{{"path", e.path}};
                        if (e.before) j["before"] = *e.before;
                        if (e.after) j["after"] = *e.after;
                        arr.push_back(std::move(j));
                    }
                    return arr;
                };
                std::cout << dump_canonical(Json{{"added", entries(diff.added)},
                                                 {"removed", entries(diff.removed)},
                                                 {"modified", entries(diff.modified)}});
            } else {
                for (const auto& e : diff.removed)
                    std::cout << "removed " << e.path << ": " << e.before->dump() << "\n";
                for (const auto& e : diff.added)
                    std::cout << "added " << e.path << ": " << e.after->dump() << "\n";
                for (const auto& e : diff.modified)
                    std::cout << "modified " << e.path << ": " << e.before->dump() << " -> "
                              << e.after->dump() << "\n";
                if (diff.empty()) std::cout << "identical\n";
            }
        } else if (*cmd_export) {
            auto reg = global.open();
            registry::export_store(*reg, export_dir);
            std::cout << "exported " << reg->ids().size() << " record(s) to " << export_dir
                      << "\n";
        } else if (*cmd_import) {
            const std::string data_dir = global.resolve_data_dir();
            {
                auto current = registry::open_store(data_dir);
                if (!current->events().empty())
                    fail("CORRUPT_STORE", "import target store is not empty");
            }
            // Verify the export replays cleanly before adopting its files.
            auto imported = registry::open_store(import_dir);
            registry::export_store(*imported, data_dir);
            std::cout << "imported " << imported->ids().size() << " record(s)\n";
        } else if (*cmd_serve) {
            std::string addr = serve_addr;
            if (addr.empty()) {
                if (const char* env = std::getenv("AIVD_ADDR")) addr = env;
                else addr = "127.0.0.1:8640";
            }
            auto reg = global.open();
            service::Service svc(*reg);
            auto [host, port] = service::parse_bind_address(addr);
            std::cout << "listening on " << host << ":" << port << "\n";
            svc.run(host, port);
        }
        return kOk;
    } catch (const ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kDomainFailure;
    } catch (const Error& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return store_error_code(e.code()) ? kStoreError : kDomainFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kStoreError;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
