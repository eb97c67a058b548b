#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "aivd/catalog.hpp"
#include "aivd/record.hpp"

namespace aivd::registry {

struct CnaRegistration {
    std::string cna_id;  // unique slug
    std::string name;
    int year_min = 1999;
    int year_max = 9999;
};

enum class EventKind { Submitted, FieldsUpdated, StatusChanged, Rescored };

std::string event_kind_name(EventKind k);
EventKind event_kind_from_name(const std::string& name);  // throws CORRUPT_EVENT

// Append-only audit record; registry state is fully replayable from the
// event sequence.
struct RegistryEvent {
    std::uint64_t sequence = 0;  // strictly increasing from 1
    EventKind kind = EventKind::Submitted;
    record::AiCveId record_id;
    std::string actor;
    Timestamp timestamp;
    Json payload = Json::object();
};

Json serialize_event(const RegistryEvent& e);
RegistryEvent parse_event(const Json& j);          // throws CORRUPT_EVENT
RegistryEvent parse_event_line(const std::string& line);

struct QueryFilter {
    std::optional<std::string> weakness;  // AI-CWE id
    std::optional<record::ProductIdentifier> product;  // prefix match
    std::optional<std::string> vendor;
    std::set<LifecycleStatus> status;  // empty = any
    std::optional<double> min_score;
    std::optional<double> max_score;
    std::optional<Date> from;
    std::optional<Date> to;
    std::optional<std::string> text;  // substring over description+impact
    int page = 1;
    int page_size = 50;
};

struct QueryPage {
    std::vector<record::VulnerabilityRecord> records;
    std::size_t total = 0;
    int page = 1;
    int page_size = 50;
};

using Clock = std::function<Timestamp()>;

// Single-writer in-memory registry over an append-only event log.
// Mutations are serialized; reads observe a consistent snapshot.
class Registry {
public:
    explicit Registry(catalog::Catalog cat, Clock clock = [] { return Timestamp::now(); });

    void register_cna(CnaRegistration cna);
    std::vector<CnaRegistration> cnas() const;

    // Serial is one past the highest serial seen for the year; unique
    // under concurrency. Errors: UNKNOWN_CNA, YEAR_OUT_OF_RANGE.
    record::AiCveId assign_id(const std::string& cna_id, int year);

    // Errors: UNKNOWN_CNA, VALIDATION_FAILED (Submission profile).
    record::VulnerabilityRecord submit(record::VulnerabilityRecord draft,
                                       const std::string& cna_id);

    // Inserts a record that already carries an id (seed/import path);
    // reserves its serial for future assignment.
    record::VulnerabilityRecord import_record(record::VulnerabilityRecord rec,
                                              const std::string& actor);

    record::VulnerabilityRecord get(const record::AiCveId& id) const;  // NOT_FOUND
    bool contains(const record::AiCveId& id) const;
    std::vector<record::AiCveId> ids() const;

    // Merges top-level document fields; id/status/status_history/severity
    // are managed by dedicated operations and rejected here. Revalidates
    // at the profile implied by the current status.
    record::VulnerabilityRecord update_fields(const record::AiCveId& id, const Json& fields,
                                              const std::string& actor);

    // Errors: NOT_FOUND, ILLEGAL_TRANSITION, VALIDATION_FAILED.
    record::VulnerabilityRecord transition_status(const record::AiCveId& id, LifecycleStatus to,
                                                  const std::string& actor,
                                                  const std::string& note = "");

    // Errors: NOT_FOUND, CLOCK_REGRESSION.
    record::VulnerabilityRecord rescore(const record::AiCveId& id,
                                        const severity::SeverityVector& vector,
                                        severity::RescoreTrigger trigger,
                                        const std::string& actor, const std::string& note = "");

    QueryPage query(const QueryFilter& filter) const;  // BAD_FILTER

    std::vector<RegistryEvent> events() const;
    const catalog::Catalog& cat() const { return catalog_; }

    // Named AIBOM documents (aibom_ref targets).
    void add_aibom(const std::string& name, aibom::AibomDocument doc);
    std::optional<aibom::AibomDocument> find_aibom(const std::string& name) const;
    std::map<std::string, aibom::AibomDocument> aiboms() const;

    // Every appended event is also handed to the sink (log persistence).
    void set_event_sink(std::function<void(const RegistryEvent&)> sink);

private:
    record::VulnerabilityRecord get_locked(const record::AiCveId& id) const;
    void append_event(EventKind kind, const record::AiCveId& id, const std::string& actor,
                      Timestamp at, Json payload);
    void apply_event(const RegistryEvent& e);  // replay path
    void store(record::VulnerabilityRecord rec);
    ValidationProfile profile_for(LifecycleStatus status) const;

    friend std::unique_ptr<Registry> replay(catalog::Catalog cat,
                                            const std::vector<RegistryEvent>& log, Clock clock);

    mutable std::shared_mutex mutex_;
    catalog::Catalog catalog_;
    Clock clock_;
    std::map<std::string, CnaRegistration> cnas_;
    std::map<record::AiCveId, record::VulnerabilityRecord> records_;
    std::map<int, int> year_high_water_;  // year -> highest serial seen
    std::map<std::string, std::set<record::AiCveId>> weakness_index_;
    std::vector<RegistryEvent> events_;
    std::map<std::string, aibom::AibomDocument> aiboms_;
    std::function<void(const RegistryEvent&)> sink_;
};

// Reconstructs state from an ordered log. Errors: GAP_IN_SEQUENCE,
// CORRUPT_EVENT.
std::unique_ptr<Registry> replay(catalog::Catalog cat, const std::vector<RegistryEvent>& log,
                                 Clock clock = [] { return Timestamp::now(); });

// Store layout: <dir>/catalog/*.json, <dir>/aibom/*.json, <dir>/cnas.json,
// <dir>/events.ndjson, and (written by export) <AI-CVE-ID>.json record
// documents at the top level.
std::unique_ptr<Registry> open_store(const std::string& dir, Clock clock = [] {
    return Timestamp::now();
});
void export_store(const Registry& reg, const std::string& dir);

}  // namespace aivd::registry
