#include "aivd/registry.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>

#include "aivd/error.hpp"
#include "json_field.hpp"

namespace aivd::registry {

namespace fs = std::filesystem;
using detail::find;
using detail::get_string;
using record::AiCveId;
using record::VulnerabilityRecord;

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool contains_ci(const std::string& haystack, const std::string& needle) {
    return lower(haystack).find(lower(needle)) != std::string::npos;
}

// Top-level keys owned by dedicated registry operations.
bool protected_field(const std::string& key) {
    return key == "id" || key == "status" || key == "status_history" || key == "severity";
}

VulnerabilityRecord merge_fields(const VulnerabilityRecord& rec, const Json& fields) {
    Json doc = record::serialize_record(rec);
    for (const auto& [key, value] : fields.items()) {
        if (value.is_null())
            doc.erase(key);
        else
            doc[key] = value;
    }
    return record::parse_record(doc);
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    if (!in) fail("CORRUPT_STORE", "cannot read " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::trunc);
    if (!out) fail("CORRUPT_STORE", "cannot write " + p.string());
    out << text;
}

}  // namespace

std::string event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Submitted: return "Submitted";
        case EventKind::FieldsUpdated: return "FieldsUpdated";
        case EventKind::StatusChanged: return "StatusChanged";
        case EventKind::Rescored: return "Rescored";
    }
    return {};
}

EventKind event_kind_from_name(const std::string& name) {
    for (EventKind k : {EventKind::Submitted, EventKind::FieldsUpdated, EventKind::StatusChanged,
                        EventKind::Rescored})
        if (event_kind_name(k) == name) return k;
    fail("CORRUPT_EVENT", "unknown event kind '" + name + "'");
}

Json serialize_event(const RegistryEvent& e) {
    Json j = Json::object();
    j["sequence"] = e.sequence;
    j["kind"] = event_kind_name(e.kind);
    j["record_id"] = e.record_id.to_string();
    j["actor"] = e.actor;
    j["timestamp"] = e.timestamp.to_string();
    j["payload"] = e.payload;
    return j;
}

RegistryEvent parse_event(const Json& j) {
    if (!j.is_object()) fail("CORRUPT_EVENT", "event must be a JSON object");
    try {
        RegistryEvent e;
        const Json* seq = find(j, "sequence");
        if (!seq || !seq->is_number_unsigned()) fail("CORRUPT_EVENT", "bad sequence number");
        e.sequence = seq->get<std::uint64_t>();
        e.kind = event_kind_from_name(get_string(j, "kind", "event.kind"));
        e.record_id = AiCveId::parse(get_string(j, "record_id", "event.record_id"));
        e.actor = get_string(j, "actor", "event.actor");
        e.timestamp = Timestamp::parse(get_string(j, "timestamp", "event.timestamp"));
        const Json* payload = find(j, "payload");
        if (!payload || !payload->is_object()) fail("CORRUPT_EVENT", "missing payload");
        e.payload = *payload;
        return e;
    } catch (const Error& err) {
        if (err.code() == "CORRUPT_EVENT") throw;
        fail("CORRUPT_EVENT", std::string("undecodable event: ") + err.what());
    }
}

RegistryEvent parse_event_line(const std::string& line) {
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) fail("CORRUPT_EVENT", "event line is not valid JSON");
    return parse_event(j);
}

Registry::Registry(catalog::Catalog cat, Clock clock)
    : catalog_(std::move(cat)), clock_(std::move(clock)) {}

void Registry::register_cna(CnaRegistration cna) {
    std::unique_lock lock(mutex_);
    if (!cnas_.emplace(cna.cna_id, cna).second)
        fail("DUPLICATE_ID", "CNA '" + cna.cna_id + "' already registered");
}

std::vector<CnaRegistration> Registry::cnas() const {
    std::shared_lock lock(mutex_);
    std::vector<CnaRegistration> out;
    for (const auto& [id, c] : cnas_) {
        (void)id;
        out.push_back(c);
    }
    return out;
}

AiCveId Registry::assign_id(const std::string& cna_id, int year) {
    std::unique_lock lock(mutex_);
    auto it = cnas_.find(cna_id);
    if (it == cnas_.end()) fail("UNKNOWN_CNA", "CNA '" + cna_id + "' is not registered");
    if (year < it->second.year_min || year > it->second.year_max)
        fail("YEAR_OUT_OF_RANGE", "CNA '" + cna_id + "' may not assign ids for " +
                                      std::to_string(year));
    int serial = year_high_water_[year] + 1;
    year_high_water_[year] = serial;
    return AiCveId{year, serial};
}

void Registry::store(VulnerabilityRecord rec) {
    const AiCveId id = *rec.id;
    auto& high = year_high_water_[id.year];
    high = std::max(high, id.serial);
    auto existing = records_.find(id);
    if (existing != records_.end())
        for (const auto& w : existing->second.weaknesses) weakness_index_[w].erase(id);
    for (const auto& w : rec.weaknesses) weakness_index_[w].insert(id);
    records_[id] = std::move(rec);
}

void Registry::append_event(EventKind kind, const AiCveId& id, const std::string& actor,
                            Timestamp at, Json payload) {
    RegistryEvent e;
    e.sequence = events_.size() + 1;
    e.kind = kind;
    e.record_id = id;
    e.actor = actor;
    e.timestamp = at;
    e.payload = std::move(payload);
    events_.push_back(e);
    if (sink_) sink_(events_.back());
}

ValidationProfile Registry::profile_for(LifecycleStatus status) const {
    switch (status) {
        case LifecycleStatus::Reported:
        case LifecycleStatus::Rejected: return ValidationProfile::Submission;
        case LifecycleStatus::Triaged:
        case LifecycleStatus::Confirmed:
        case LifecycleStatus::Deferred: return ValidationProfile::Triage;
        case LifecycleStatus::Disclosed:
        case LifecycleStatus::Mitigated:
        case LifecycleStatus::Resolved: return ValidationProfile::Disclosure;
    }
    return ValidationProfile::Submission;
}

VulnerabilityRecord Registry::submit(VulnerabilityRecord draft, const std::string& cna_id) {
    std::unique_lock lock(mutex_);
    auto it = cnas_.find(cna_id);
    if (it == cnas_.end()) fail("UNKNOWN_CNA", "CNA '" + cna_id + "' is not registered");
    const Timestamp at = clock_();
    auto report =
        record::validate_record(draft, ValidationProfile::Submission, catalog_, at.date_utc());
    if (!report.valid()) throw ValidationError(std::move(report));

    int year = draft.report_date ? draft.report_date->year : at.date_utc().year;
    if (year < it->second.year_min || year > it->second.year_max)
        fail("YEAR_OUT_OF_RANGE", "CNA '" + cna_id + "' may not assign ids for " +
                                      std::to_string(year));
    int serial = year_high_water_[year] + 1;
    year_high_water_[year] = serial;

    draft.id = AiCveId{year, serial};
    draft.status = LifecycleStatus::Reported;
    draft.status_history.clear();
    store(draft);
    append_event(EventKind::Submitted, *draft.id, cna_id, at,
                 Json{{"cna", cna_id}, {"record", record::serialize_record(draft)}});
    return draft;
}

VulnerabilityRecord Registry::import_record(VulnerabilityRecord rec, const std::string& actor) {
    std::unique_lock lock(mutex_);
    if (!rec.id) fail("BAD_ID", "imported record must carry an id");
    if (records_.count(*rec.id))
        fail("DUPLICATE_ID", "record " + rec.id->to_string() + " already exists");
    store(rec);
    append_event(EventKind::Submitted, *rec.id, actor, clock_(),
                 Json{{"record", record::serialize_record(rec)}});
    return rec;
}

VulnerabilityRecord Registry::get_locked(const AiCveId& id) const {
    auto it = records_.find(id);
    if (it == records_.end()) fail("NOT_FOUND", "no record " + id.to_string());
    return it->second;
}

VulnerabilityRecord Registry::get(const AiCveId& id) const {
    std::shared_lock lock(mutex_);
    return get_locked(id);
}

bool Registry::contains(const AiCveId& id) const {
    std::shared_lock lock(mutex_);
    return records_.count(id) > 0;
}

std::vector<AiCveId> Registry::ids() const {
    std::shared_lock lock(mutex_);
    std::vector<AiCveId> out;
    for (const auto& [id, rec] : records_) {
        (void)rec;
        out.push_back(id);
    }
    return out;
}

VulnerabilityRecord Registry::update_fields(const AiCveId& id, const Json& fields,
                                            const std::string& actor) {
    std::unique_lock lock(mutex_);
    VulnerabilityRecord rec = get_locked(id);
    if (!fields.is_object()) fail("BAD_FIELD_TYPE", "field update must be a JSON object");
    for (const auto& [key, value] : fields.items()) {
        (void)value;
        if (protected_field(key))
            fail("PROTECTED_FIELD", "field '" + key + "' is managed by the registry");
    }
    const Timestamp at = clock_();
    VulnerabilityRecord updated = merge_fields(rec, fields);
    auto report =
        record::validate_record(updated, profile_for(rec.status), catalog_, at.date_utc());
    if (!report.valid()) throw ValidationError(std::move(report));
    store(updated);
    append_event(EventKind::FieldsUpdated, id, actor, at, Json{{"fields", fields}});
    return updated;
}

VulnerabilityRecord Registry::transition_status(const AiCveId& id, LifecycleStatus to,
                                                const std::string& actor,
                                                const std::string& note) {
    std::unique_lock lock(mutex_);
    VulnerabilityRecord rec = get_locked(id);
    if (!transition_allowed(rec.status, to))
        fail("ILLEGAL_TRANSITION", "no transition " + status_name(rec.status) + " -> " +
                                       status_name(to) + " for " + id.to_string());
    const Timestamp at = clock_();
    if (to == LifecycleStatus::Triaged || to == LifecycleStatus::Disclosed) {
        auto profile = to == LifecycleStatus::Triaged ? ValidationProfile::Triage
                                                      : ValidationProfile::Disclosure;
        auto report = record::validate_record(rec, profile, catalog_, at.date_utc());
        if (!report.valid()) throw ValidationError(std::move(report));
    }
    StatusChange change{rec.status, to, actor, at, note};
    rec.status_history.push_back(change);
    rec.status = to;
    store(rec);
    append_event(EventKind::StatusChanged, id, actor, at,
                 Json{{"from", status_name(change.from)},
                      {"to", status_name(change.to)},
                      {"note", note}});
    return rec;
}

VulnerabilityRecord Registry::rescore(const AiCveId& id, const severity::SeverityVector& vector,
                                      severity::RescoreTrigger trigger, const std::string& actor,
                                      const std::string& note) {
    std::unique_lock lock(mutex_);
    VulnerabilityRecord rec = get_locked(id);
    const Timestamp at = clock_();
    rec.severity = severity::reassess(rec.severity, vector, trigger, note, at);
    store(rec);
    append_event(EventKind::Rescored, id, actor, at,
                 Json{{"vector", severity::render_vector(vector)},
                      {"trigger", severity::trigger_name(trigger)},
                      {"note", note}});
    return rec;
}

QueryPage Registry::query(const QueryFilter& filter) const {
    if (filter.min_score && filter.max_score && *filter.min_score > *filter.max_score)
        fail("BAD_FILTER", "min_score above max_score");
    if (filter.from && filter.to && *filter.to < *filter.from)
        fail("BAD_FILTER", "from date after to date");
    if (filter.page < 1 || filter.page_size < 1)
        fail("BAD_FILTER", "page and page_size must be positive");

    std::shared_lock lock(mutex_);

    auto matches = [&](const VulnerabilityRecord& r) {
        if (filter.weakness &&
            std::find(r.weaknesses.begin(), r.weaknesses.end(), *filter.weakness) ==
                r.weaknesses.end())
            return false;
        if (filter.product) {
            bool any = false;
            for (const auto& p : r.affected_products)
                if (p.identifier.matches_prefix(*filter.product)) any = true;
            if (!any) return false;
        }
        if (filter.vendor) {
            bool any = false;
            for (const auto& v : r.vendors)
                if (contains_ci(v, *filter.vendor)) any = true;
            if (!any) return false;
        }
        if (!filter.status.empty() && !filter.status.count(r.status)) return false;
        if (filter.min_score || filter.max_score) {
            if (r.severity.entries.empty()) return false;
            const double score = r.severity.current().score.value;
            if (filter.min_score && score < *filter.min_score) return false;
            if (filter.max_score && score > *filter.max_score) return false;
        }
        if (filter.from || filter.to) {
            if (!r.report_date) return false;
            if (filter.from && *r.report_date < *filter.from) return false;
            if (filter.to && *filter.to < *r.report_date) return false;
        }
        if (filter.text && !contains_ci(r.description, *filter.text) &&
            !contains_ci(r.impact, *filter.text))
            return false;
        return true;
    };

    std::vector<const VulnerabilityRecord*> hits;
    if (filter.weakness) {
        auto idx = weakness_index_.find(*filter.weakness);
        if (idx != weakness_index_.end())
            for (const auto& id : idx->second) {
                const auto& r = records_.at(id);
                if (matches(r)) hits.push_back(&r);
            }
    } else {
        for (const auto& [id, r] : records_) {
            (void)id;
            if (matches(r)) hits.push_back(&r);
        }
    }

    // report_date descending, id ascending; undated records sort last.
    std::sort(hits.begin(), hits.end(),
              [](const VulnerabilityRecord* a, const VulnerabilityRecord* b) {
                  Date da = a->report_date.value_or(Date{});
                  Date db = b->report_date.value_or(Date{});
                  if (da != db) return db < da;
                  return *a->id < *b->id;
              });

    QueryPage page;
    page.total = hits.size();
    page.page = filter.page;
    page.page_size = filter.page_size;
    const std::size_t begin =
        static_cast<std::size_t>(filter.page - 1) * static_cast<std::size_t>(filter.page_size);
    for (std::size_t i = begin;
         i < hits.size() && i < begin + static_cast<std::size_t>(filter.page_size); ++i)
        page.records.push_back(*hits[i]);
    return page;
}

std::vector<RegistryEvent> Registry::events() const {
    std::shared_lock lock(mutex_);
    return events_;
}

void Registry::add_aibom(const std::string& name, aibom::AibomDocument doc) {
    std::unique_lock lock(mutex_);
    aiboms_[name] = std::move(doc);
}

std::optional<aibom::AibomDocument> Registry::find_aibom(const std::string& name) const {
    std::shared_lock lock(mutex_);
    auto it = aiboms_.find(name);
    if (it == aiboms_.end()) return std::nullopt;
    return it->second;
}

std::map<std::string, aibom::AibomDocument> Registry::aiboms() const {
    std::shared_lock lock(mutex_);
    return aiboms_;
}

void Registry::set_event_sink(std::function<void(const RegistryEvent&)> sink) {
    std::unique_lock lock(mutex_);
    sink_ = std::move(sink);
}

void Registry::apply_event(const RegistryEvent& e) {
    switch (e.kind) {
        case EventKind::Submitted: {
            const Json* rec = find(e.payload, "record");
            if (!rec) fail("CORRUPT_EVENT", "Submitted event lacks record payload");
            VulnerabilityRecord r = record::parse_record(*rec);
            if (!r.id) fail("CORRUPT_EVENT", "Submitted record lacks an id");
            store(std::move(r));
            break;
        }
        case EventKind::FieldsUpdated: {
            const Json* fields = find(e.payload, "fields");
            if (!fields) fail("CORRUPT_EVENT", "FieldsUpdated event lacks fields payload");
            store(merge_fields(get_locked(e.record_id), *fields));
            break;
        }
        case EventKind::StatusChanged: {
            VulnerabilityRecord rec = get_locked(e.record_id);
            StatusChange change{status_from_name(get_string(e.payload, "from", "payload.from")),
                                status_from_name(get_string(e.payload, "to", "payload.to")),
                                e.actor, e.timestamp,
                                get_string(e.payload, "note", "payload.note")};
            rec.status_history.push_back(change);
            rec.status = change.to;
            store(std::move(rec));
            break;
        }
        case EventKind::Rescored: {
            VulnerabilityRecord rec = get_locked(e.record_id);
            auto vector =
                severity::parse_vector(get_string(e.payload, "vector", "payload.vector"));
            auto trigger = severity::trigger_from_name(
                get_string(e.payload, "trigger", "payload.trigger"));
            rec.severity = severity::reassess(rec.severity, vector, trigger,
                                              get_string(e.payload, "note", "payload.note"),
                                              e.timestamp);
            store(std::move(rec));
            break;
        }
    }
    events_.push_back(e);
}

std::unique_ptr<Registry> replay(catalog::Catalog cat, const std::vector<RegistryEvent>& log,
                                 Clock clock) {
    auto reg = std::make_unique<Registry>(std::move(cat), std::move(clock));
    std::uint64_t expected = 1;
    for (const auto& e : log) {
        if (e.sequence != expected)
            fail("GAP_IN_SEQUENCE", "expected event sequence " + std::to_string(expected) +
                                        ", found " + std::to_string(e.sequence));
        try {
            reg->apply_event(e);
        } catch (const Error& err) {
            if (err.code() == "CORRUPT_EVENT" || err.code() == "GAP_IN_SEQUENCE") throw;
            fail("CORRUPT_EVENT",
                 "event " + std::to_string(e.sequence) + " unreplayable: " + err.what());
        }
        ++expected;
    }
    return reg;
}

std::unique_ptr<Registry> open_store(const std::string& dir, Clock clock) {
    fs::create_directories(dir);
    catalog::Catalog cat;
    if (fs::is_directory(fs::path(dir) / "catalog"))
        cat = catalog::load_catalog_dir((fs::path(dir) / "catalog").string());

    std::vector<RegistryEvent> log;
    const fs::path events_path = fs::path(dir) / "events.ndjson";
    if (fs::exists(events_path)) {
        std::ifstream in(events_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            log.push_back(parse_event_line(line));
        }
    }
    auto reg = replay(std::move(cat), log, std::move(clock));

    const fs::path cnas_path = fs::path(dir) / "cnas.json";
    if (fs::exists(cnas_path)) {
        Json j = detail::parse_json_text(read_file(cnas_path), "cnas.json");
        if (!j.is_array()) fail("CORRUPT_STORE", "cnas.json must be an array");
        for (const auto& c : j) {
            CnaRegistration cna;
            cna.cna_id = get_string(c, "cna_id", "cnas.cna_id");
            cna.name = get_string(c, "name", "cnas.name");
            if (const Json* range = find(c, "allowed_years")) {
                cna.year_min = (*range)[0].get<int>();
                cna.year_max = (*range)[1].get<int>();
            }
            reg->register_cna(std::move(cna));
        }
    }

    const fs::path aibom_dir = fs::path(dir) / "aibom";
    if (fs::is_directory(aibom_dir)) {
        std::vector<fs::path> paths;
        for (const auto& e : fs::directory_iterator(aibom_dir))
            if (e.is_regular_file() && e.path().extension() == ".json") paths.push_back(e.path());
        std::sort(paths.begin(), paths.end());
        for (const auto& p : paths)
            reg->add_aibom(p.stem().string(), aibom::parse_aibom_text(read_file(p)));
    }

    auto out = std::make_shared<std::ofstream>(events_path, std::ios::app);
    if (!*out) fail("CORRUPT_STORE", "cannot open event log " + events_path.string());
    reg->set_event_sink([out](const RegistryEvent& e) {
        *out << serialize_event(e).dump() << "\n";
        out->flush();
    });
    return reg;
}

void export_store(const Registry& reg, const std::string& dir) {
    fs::create_directories(dir);
    fs::create_directories(fs::path(dir) / "catalog");
    fs::create_directories(fs::path(dir) / "aibom");

    for (const auto& id : reg.ids()) {
        auto rec = reg.get(id);
        write_file(fs::path(dir) / (id.to_string() + ".json"),
                   record::serialize_record_text(rec));
        if (rec.ai_system.aibom)
            write_file(fs::path(dir) / "aibom" / (id.to_string() + ".json"),
                       dump_canonical(aibom::serialize_aibom(*rec.ai_system.aibom)));
    }

    Json weaknesses = Json::array();
    for (const auto& [id, w] : reg.cat().weaknesses) {
        (void)id;
        weaknesses.push_back(catalog::serialize_weakness(w));
    }
    write_file(fs::path(dir) / "catalog" / "weaknesses.json", dump_canonical(weaknesses));
    Json mitigations = Json::array();
    for (const auto& [id, m] : reg.cat().mitigations) {
        (void)id;
        mitigations.push_back(catalog::serialize_mitigation(m));
    }
    write_file(fs::path(dir) / "catalog" / "mitigations.json", dump_canonical(mitigations));

    for (const auto& [name, doc] : reg.aiboms())
        write_file(fs::path(dir) / "aibom" / (name + ".json"),
                   dump_canonical(aibom::serialize_aibom(doc)));

    Json cnas = Json::array();
    for (const auto& c : reg.cnas())
        cnas.push_back(Json{{"cna_id", c.cna_id},
                            {"name", c.name},
                            {"allowed_years", Json::array({c.year_min, c.year_max})}});
    write_file(fs::path(dir) / "cnas.json", dump_canonical(cnas));

    std::string log;
    for (const auto& e : reg.events()) log += serialize_event(e).dump() + "\n";
    write_file(fs::path(dir) / "events.ndjson", log);
}

}  // namespace aivd::registry
