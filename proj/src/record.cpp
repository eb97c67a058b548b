#include "aivd/record.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "aivd/error.hpp"
#include "json_field.hpp"

namespace aivd::record {

using detail::find;
using detail::get_string;
using detail::get_string_list;

namespace {

const std::vector<std::string>& canonical_keys() {
    static const std::vector<std::string> keys = {
        "id",           "ai_system",  "weaknesses",        "root_causes",
        "impact",       "severity",   "affected_products", "exploitability",
        "description",  "mitigations", "references",       "report_date",
        "reported_by",  "vendors",    "status",            "status_history",
        "extensions"};
    return keys;
}

bool digits(const std::string& s, size_t begin, size_t end) {
    if (begin >= end || end > s.size()) return false;
    for (size_t i = begin; i < end; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

severity::ScoreEntry parse_score_entry(const Json& j) {
    severity::ScoreEntry e;
    e.score.vector = severity::parse_vector(get_string(j, "vector", "severity.history.vector"));
    const Json* value = find(j, "value");
    if (!value || !value->is_number())
        fail("BAD_FIELD_TYPE", "severity.history.value must be a number");
    e.score.value = value->get<double>();
    e.score.band = severity::band_from_name(get_string(j, "band", "severity.history.band"));
    e.score.computed_at =
        Timestamp::parse(get_string(j, "computed_at", "severity.history.computed_at"));
    e.trigger = severity::trigger_from_name(get_string(j, "trigger", "severity.history.trigger"));
    e.note = get_string(j, "note", "severity.history.note");
    return e;
}

Json serialize_score_entry(const severity::ScoreEntry& e) {
    Json j = Json::object();
    j["vector"] = severity::render_vector(e.score.vector);
    j["value"] = e.score.value;
    j["band"] = severity::band_name(e.score.band);
    j["computed_at"] = e.score.computed_at.to_string();
    j["trigger"] = severity::trigger_name(e.trigger);
    if (!e.note.empty()) j["note"] = e.note;
    return j;
}

}  // namespace

std::string AiCveId::to_string() const {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "AI-CVE-%04d-%04d", year, serial);
    return buf;
}

AiCveId AiCveId::parse(const std::string& text) {
    constexpr char prefix[] = "AI-CVE-";
    constexpr size_t plen = sizeof(prefix) - 1;
    if (text.compare(0, plen, prefix) != 0)
        fail("BAD_ID", "id must start with AI-CVE-: '" + text + "'");
    if (text.size() < plen + 9 || text[plen + 4] != '-' || !digits(text, plen, plen + 4) ||
        !digits(text, plen + 5, text.size()))
        fail("BAD_ID", "id must be AI-CVE-YYYY-NNNN: '" + text + "'");
    int year = std::stoi(text.substr(plen, 4));
    const std::string serial_text = text.substr(plen + 5);
    if (serial_text.size() > 9) fail("BAD_ID", "serial too long: '" + text + "'");
    int serial = std::stoi(serial_text);
    if (year < 1999 || serial < 1)
        fail("BAD_ID", "year must be >= 1999 and serial >= 1: '" + text + "'");
    // Canonical zero-padding: exactly four digits below 10000, no excess
    // padding above.
    if (serial_text.size() > 4 && serial_text[0] == '0')
        fail("BAD_ID", "serial must be zero-padded to exactly four digits: '" + text + "'");
    return AiCveId{year, serial};
}

bool AiCveId::looks_valid(const std::string& text) {
    try {
        parse(text);
        return true;
    } catch (const Error&) {
        return false;
    }
}

std::string ProductIdentifier::rendered() const {
    std::string out;
    for (size_t i = 0; i < segments.size(); ++i) {
        if (i) out += '/';
        out += segments[i];
    }
    return out;
}

ProductIdentifier ProductIdentifier::parse(const std::string& text) {
    ProductIdentifier p;
    p.original = text;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t slash = text.find('/', pos);
        if (slash == std::string::npos) slash = text.size();
        std::string seg = text.substr(pos, slash - pos);
        if (seg.empty()) fail("BAD_PRODUCT_ID", "empty segment in '" + text + "'");
        p.segments.push_back(std::move(seg));
        pos = slash + 1;
    }
    if (p.segments.size() < 3 || p.segments.size() > 5)
        fail("BAD_PRODUCT_ID", "identifier must have 3-5 segments: '" + text + "'");
    if (p.segments[0].size() != 4 || !digits(p.segments[0], 0, 4))
        fail("BAD_PRODUCT_ID", "first segment must be a 4-digit year: '" + text + "'");
    return p;
}

bool ProductIdentifier::matches_prefix(const ProductIdentifier& prefix) const {
    if (prefix.segments.size() > segments.size()) return false;
    for (size_t i = 0; i < prefix.segments.size(); ++i)
        if (lower(prefix.segments[i]) != lower(segments[i])) return false;
    return true;
}

std::string technical_complexity_name(TechnicalComplexity t) {
    switch (t) {
        case TechnicalComplexity::Low: return "Low";
        case TechnicalComplexity::Medium: return "Medium";
        case TechnicalComplexity::High: return "High";
    }
    return {};
}

TechnicalComplexity technical_complexity_from_name(const std::string& name) {
    if (name == "Low") return TechnicalComplexity::Low;
    if (name == "Medium") return TechnicalComplexity::Medium;
    if (name == "High") return TechnicalComplexity::High;
    fail("BAD_FIELD_TYPE", "unknown technical complexity '" + name + "'");
}

std::string privilege_level_name(PrivilegeLevel p) {
    switch (p) {
        case PrivilegeLevel::None: return "None";
        case PrivilegeLevel::User: return "User";
        case PrivilegeLevel::ModelQueryAccess: return "ModelQueryAccess";
        case PrivilegeLevel::TrainingDataAccess: return "TrainingDataAccess";
        case PrivilegeLevel::Administrative: return "Administrative";
    }
    return {};
}

PrivilegeLevel privilege_level_from_name(const std::string& name) {
    for (PrivilegeLevel p :
         {PrivilegeLevel::None, PrivilegeLevel::User, PrivilegeLevel::ModelQueryAccess,
          PrivilegeLevel::TrainingDataAccess, PrivilegeLevel::Administrative})
        if (privilege_level_name(p) == name) return p;
    fail("BAD_FIELD_TYPE", "unknown privilege level '" + name + "'");
}

VulnerabilityRecord parse_record(const Json& document) {
    detail::require_object(document, "record document");
    VulnerabilityRecord r;

    if (const Json* id = find(document, "id")) {
        if (!id->is_string()) fail("BAD_ID", "id must be a string");
        r.id = AiCveId::parse(id->get<std::string>());
    }
    if (const Json* sys = find(document, "ai_system")) {
        detail::require_object(*sys, "ai_system");
        r.ai_system.name = get_string(*sys, "name", "ai_system.name");
        r.ai_system.type = get_string(*sys, "type", "ai_system.type");
        r.ai_system.aibom_ref = get_string(*sys, "aibom_ref", "ai_system.aibom_ref");
        if (const Json* doc = find(*sys, "aibom")) r.ai_system.aibom = aibom::parse_aibom(*doc);
    }
    r.weaknesses = get_string_list(document, "weaknesses", "weaknesses");
    r.root_causes = get_string_list(document, "root_causes", "root_causes");
    r.impact = get_string(document, "impact", "impact");
    if (const Json* sev = find(document, "severity")) {
        detail::require_object(*sev, "severity");
        if (const Json* hist = find(*sev, "history")) {
            if (!hist->is_array()) fail("BAD_FIELD_TYPE", "severity.history must be an array");
            for (const auto& e : *hist)
                r.severity.entries.push_back(parse_score_entry(e));
        }
    }
    if (const Json* prods = find(document, "affected_products")) {
        if (!prods->is_array()) fail("BAD_FIELD_TYPE", "affected_products must be an array");
        for (const auto& p : *prods)
            r.affected_products.push_back(
                {get_string(p, "display_name", "affected_products.display_name"),
                 ProductIdentifier::parse(
                     get_string(p, "identifier", "affected_products.identifier"))});
    }
    if (const Json* ex = find(document, "exploitability")) {
        detail::require_object(*ex, "exploitability");
        ExploitabilityProfile prof;
        prof.technical_complexity = technical_complexity_from_name(
            get_string(*ex, "technical_complexity", "exploitability.technical_complexity"));
        prof.privilege_level = privilege_level_from_name(
            get_string(*ex, "privilege_level", "exploitability.privilege_level"));
        prof.required_actions =
            get_string_list(*ex, "required_actions", "exploitability.required_actions");
        prof.access_requirements =
            get_string(*ex, "access_requirements", "exploitability.access_requirements");
        r.exploitability = std::move(prof);
    }
    r.description = get_string(document, "description", "description");
    if (const Json* mits = find(document, "mitigations")) {
        if (!mits->is_array()) fail("BAD_FIELD_TYPE", "mitigations must be an array");
        for (const auto& m : *mits)
            r.mitigations.push_back({get_string(m, "catalog_ref", "mitigations.catalog_ref"),
                                     get_string(m, "narrative", "mitigations.narrative")});
    }
    if (const Json* refs = find(document, "references")) {
        if (!refs->is_array()) fail("BAD_FIELD_TYPE", "references must be an array");
        for (const auto& ref : *refs)
            r.references.push_back({get_string(ref, "title", "references.title"),
                                    get_string(ref, "url", "references.url")});
    }
    std::string date = get_string(document, "report_date", "report_date");
    if (!date.empty()) r.report_date = Date::parse(date);
    r.reported_by = get_string(document, "reported_by", "reported_by");
    r.vendors = get_string_list(document, "vendors", "vendors");
    std::string status = get_string(document, "status", "status");
    if (!status.empty()) r.status = status_from_name(status);
    if (const Json* hist = find(document, "status_history")) {
        if (!hist->is_array()) fail("BAD_FIELD_TYPE", "status_history must be an array");
        for (const auto& h : *hist)
            r.status_history.push_back(
                {status_from_name(get_string(h, "from", "status_history.from")),
                 status_from_name(get_string(h, "to", "status_history.to")),
                 get_string(h, "actor", "status_history.actor"),
                 Timestamp::parse(get_string(h, "at", "status_history.at")),
                 get_string(h, "note", "status_history.note")});
    }
    if (const Json* ext = find(document, "extensions")) {
        detail::require_object(*ext, "extensions");
        r.extensions = *ext;
    }
    // Unknown top-level fields survive in the extensions map.
    for (const auto& [key, value] : document.items())
        if (std::find(canonical_keys().begin(), canonical_keys().end(), key) ==
            canonical_keys().end())
            r.extensions[key] = value;
    return r;
}

VulnerabilityRecord parse_record_text(const std::string& text) {
    return parse_record(detail::parse_json_text(text, "record document"));
}

Json serialize_record(const VulnerabilityRecord& r) {
    Json j = Json::object();
    if (r.id) j["id"] = r.id->to_string();
    if (!r.ai_system.name.empty() || !r.ai_system.type.empty() ||
        !r.ai_system.aibom_ref.empty() || r.ai_system.aibom) {
        Json sys = Json::object();
        if (!r.ai_system.name.empty()) sys["name"] = r.ai_system.name;
        if (!r.ai_system.type.empty()) sys["type"] = r.ai_system.type;
        if (!r.ai_system.aibom_ref.empty()) sys["aibom_ref"] = r.ai_system.aibom_ref;
        if (r.ai_system.aibom) sys["aibom"] = aibom::serialize_aibom(*r.ai_system.aibom);
        j["ai_system"] = std::move(sys);
    }
    if (!r.weaknesses.empty()) j["weaknesses"] = r.weaknesses;
    if (!r.root_causes.empty()) j["root_causes"] = r.root_causes;
    if (!r.impact.empty()) j["impact"] = r.impact;
    if (!r.severity.entries.empty()) {
        Json hist = Json::array();
        for (const auto& e : r.severity.entries) hist.push_back(serialize_score_entry(e));
        j["severity"] = Json{{"history", std::move(hist)}};
    }
    if (!r.affected_products.empty()) {
        Json prods = Json::array();
        for (const auto& p : r.affected_products)
            prods.push_back(
                {{"display_name", p.display_name}, {"identifier", p.identifier.original}});
        j["affected_products"] = std::move(prods);
    }
    if (r.exploitability) {
        Json ex = Json::object();
        ex["technical_complexity"] =
            technical_complexity_name(r.exploitability->technical_complexity);
        ex["privilege_level"] = privilege_level_name(r.exploitability->privilege_level);
        if (!r.exploitability->required_actions.empty())
            ex["required_actions"] = r.exploitability->required_actions;
        if (!r.exploitability->access_requirements.empty())
            ex["access_requirements"] = r.exploitability->access_requirements;
        j["exploitability"] = std::move(ex);
    }
    if (!r.description.empty()) j["description"] = r.description;
    if (!r.mitigations.empty()) {
        Json mits = Json::array();
        for (const auto& m : r.mitigations) {
            Json e = Json::object();
            if (!m.catalog_ref.empty()) e["catalog_ref"] = m.catalog_ref;
            if (!m.narrative.empty()) e["narrative"] = m.narrative;
            mits.push_back(std::move(e));
        }
        j["mitigations"] = std::move(mits);
    }
    if (!r.references.empty()) {
        Json refs = Json::array();
        for (const auto& ref : r.references) {
            Json e = Json::object();
            e["title"] = ref.title;
            if (!ref.url.empty()) e["url"] = ref.url;
            refs.push_back(std::move(e));
        }
        j["references"] = std::move(refs);
    }
    if (r.report_date) j["report_date"] = r.report_date->to_string();
    if (!r.reported_by.empty()) j["reported_by"] = r.reported_by;
    if (!r.vendors.empty()) j["vendors"] = r.vendors;
    if (r.status != LifecycleStatus::Reported || !r.status_history.empty())
        j["status"] = status_name(r.status);
    if (!r.status_history.empty()) {
        Json hist = Json::array();
        for (const auto& h : r.status_history) {
            Json e = Json::object();
            e["from"] = status_name(h.from);
            e["to"] = status_name(h.to);
            e["actor"] = h.actor;
            e["at"] = h.at.to_string();
            if (!h.note.empty()) e["note"] = h.note;
            hist.push_back(std::move(e));
        }
        j["status_history"] = std::move(hist);
    }
    if (!r.extensions.empty()) j["extensions"] = r.extensions;
    return j;
}

std::string serialize_record_text(const VulnerabilityRecord& r) {
    return dump_canonical(serialize_record(r));
}

namespace {

void check_submission(const VulnerabilityRecord& r, ValidationReport& rep) {
    if (!r.ai_system.populated()) {
        if (r.ai_system.name.empty())
            rep.error("MISSING_FIELD", "ai_system.name", "AI system name is required");
        if (r.ai_system.type.empty())
            rep.error("MISSING_FIELD", "ai_system.type", "AI system type is required");
    }
    if (r.description.empty())
        rep.error("MISSING_FIELD", "description", "description is required");
    if (!r.report_date)
        rep.error("MISSING_FIELD", "report_date", "report date is required");
    if (r.reported_by.empty())
        rep.error("MISSING_FIELD", "reported_by", "reporter is required");
}

void check_triage(const VulnerabilityRecord& r, ValidationReport& rep) {
    if (r.weaknesses.empty())
        rep.error("MISSING_FIELD", "weaknesses", "at least one weakness reference is required");
    if (r.root_causes.empty())
        rep.error("MISSING_FIELD", "root_causes", "at least one root cause is required");
    if (r.impact.empty()) rep.error("MISSING_FIELD", "impact", "impact statement is required");
    if (r.affected_products.empty())
        rep.error("MISSING_FIELD", "affected_products", "affected products are required");
    if (!r.exploitability)
        rep.error("MISSING_FIELD", "exploitability", "exploitability profile is required");
    if (r.vendors.empty()) rep.error("MISSING_FIELD", "vendors", "vendor list is required");
}

bool none_known_marker(const VulnerabilityRecord& r) {
    auto it = r.extensions.find("mitigations_none_known");
    return it != r.extensions.end() && it->is_boolean() && it->get<bool>();
}

void check_disclosure(const VulnerabilityRecord& r, ValidationReport& rep) {
    if (r.severity.entries.empty())
        rep.error("MISSING_FIELD", "severity", "severity assessment is required");
    if (r.mitigations.empty() && !none_known_marker(r))
        rep.error("MISSING_FIELD", "mitigations",
                  "mitigations (or the explicit none-known marker) are required");
    if (r.references.empty())
        rep.error("MISSING_FIELD", "references", "at least one reference is required");
    if (r.exploitability && r.exploitability->required_actions.empty())
        rep.error("MISSING_FIELD", "exploitability.required_actions",
                  "required actions must be listed before disclosure");
    if (r.ai_system.aibom)
        for (const auto& f : aibom::validate_aibom(*r.ai_system.aibom).findings)
            if (f.level == FindingLevel::Error)
                rep.error(f.code, "ai_system.aibom." + f.path, f.message);
}

}  // namespace

ValidationReport validate_record(const VulnerabilityRecord& r, ValidationProfile profile,
                                 const catalog::Catalog& cat, Date today) {
    ValidationReport rep;
    rep.profile = profile;

    // Structural rules, enforced at every profile.
    if (r.report_date && today < *r.report_date)
        rep.error("FUTURE_REPORT_DATE", "report_date", "report date lies in the future");
    for (size_t i = 0; i < r.weaknesses.size(); ++i) {
        const std::string& w = r.weaknesses[i];
        if (!catalog::is_weakness_id(w) || !cat.weaknesses.count(w))
            rep.error("DANGLING_WEAKNESS_REF", "weaknesses." + std::to_string(i),
                      "weakness '" + w + "' does not resolve in the catalog");
    }
    for (size_t i = 0; i < r.mitigations.size(); ++i) {
        const auto& m = r.mitigations[i];
        const std::string path = "mitigations." + std::to_string(i);
        if (m.catalog_ref.empty() && m.narrative.empty())
            rep.error("EMPTY_MITIGATION", path,
                      "mitigation entry needs a catalog reference or a narrative");
        else if (!m.catalog_ref.empty() && !cat.mitigations.count(m.catalog_ref))
            rep.error("DANGLING_MITIGATION_REF", path + ".catalog_ref",
                      "mitigation '" + m.catalog_ref + "' does not resolve in the catalog");
    }

    check_submission(r, rep);
    if (profile == ValidationProfile::Triage || profile == ValidationProfile::Disclosure)
        check_triage(r, rep);
    if (profile == ValidationProfile::Disclosure) check_disclosure(r, rep);
    return rep;
}

std::vector<std::string> profile_required_fields(ValidationProfile profile) {
    std::vector<std::string> fields = {"ai_system", "description", "report_date", "reported_by"};
    if (profile == ValidationProfile::Triage || profile == ValidationProfile::Disclosure) {
        fields.insert(fields.end(), {"weaknesses", "root_causes", "impact", "affected_products",
                                     "exploitability", "vendors"});
    }
    if (profile == ValidationProfile::Disclosure)
        fields.insert(fields.end(), {"severity", "mitigations", "references"});
    return fields;
}

}  // namespace aivd::record
