#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aivd/aibom.hpp"
#include "aivd/catalog.hpp"
#include "aivd/json.hpp"
#include "aivd/lifecycle.hpp"
#include "aivd/severity.hpp"
#include "aivd/time.hpp"
#include "aivd/validation.hpp"

namespace aivd::record {

// Canonical text form "AI-CVE-<year>-<serial>", serial zero-padded to at
// least four digits.
struct AiCveId {
    int year = 0;
    int serial = 0;

    auto operator<=>(const AiCveId&) const = default;

    std::string to_string() const;
    static AiCveId parse(const std::string& text);  // throws BAD_ID
    static bool looks_valid(const std::string& text);
};

// Slash-separated identifier, 3-5 segments, 4-digit-year head. Matching
// is case-insensitive; `original` keeps the reported casing.
struct ProductIdentifier {
    std::vector<std::string> segments;
    std::string original;

    bool operator==(const ProductIdentifier& o) const { return original == o.original; }

    std::string rendered() const;  // segments joined by "/"
    static ProductIdentifier parse(const std::string& text);  // throws BAD_PRODUCT_ID
    // True iff `prefix`'s segments are a case-insensitive prefix of ours.
    bool matches_prefix(const ProductIdentifier& prefix) const;
};

enum class TechnicalComplexity { Low, Medium, High };
enum class PrivilegeLevel { None, User, ModelQueryAccess, TrainingDataAccess, Administrative };

std::string technical_complexity_name(TechnicalComplexity t);
TechnicalComplexity technical_complexity_from_name(const std::string& name);
std::string privilege_level_name(PrivilegeLevel p);
PrivilegeLevel privilege_level_from_name(const std::string& name);

struct ExploitabilityProfile {
    TechnicalComplexity technical_complexity = TechnicalComplexity::Low;
    PrivilegeLevel privilege_level = PrivilegeLevel::None;
    std::vector<std::string> required_actions;
    std::string access_requirements;

    bool operator==(const ExploitabilityProfile&) const = default;
};

// ME 2: either a reference to an externally stored AIBOM or an embedded
// document; name and type identify the system in both forms.
struct AiSystem {
    std::string name;
    std::string type;
    std::string aibom_ref;
    std::optional<aibom::AibomDocument> aibom;

    bool operator==(const AiSystem&) const = default;
    bool populated() const { return !name.empty() && !type.empty(); }
};

struct AffectedProduct {
    std::string display_name;
    ProductIdentifier identifier;

    bool operator==(const AffectedProduct&) const = default;
};

struct MitigationRef {
    std::string catalog_ref;  // MIT id, may be empty
    std::string narrative;

    bool operator==(const MitigationRef&) const = default;
};

struct RecordReference {
    std::string title;
    std::string url;

    bool operator==(const RecordReference&) const = default;
};

// One AI-CVE entry; one field per Minimum Element.
struct VulnerabilityRecord {
    std::optional<AiCveId> id;                       // ME 1, registry-assigned
    AiSystem ai_system;                              // ME 2
    std::vector<std::string> weaknesses;             // ME 3, AI-CWE ids
    std::vector<std::string> root_causes;            // ME 4
    std::string impact;                              // ME 5
    severity::ScoreHistory severity;                 // ME 6
    std::vector<AffectedProduct> affected_products;  // ME 7
    std::optional<ExploitabilityProfile> exploitability;  // ME 8
    std::string description;                         // ME 9
    std::vector<MitigationRef> mitigations;          // ME 10
    std::vector<RecordReference> references;         // ME 11
    std::optional<Date> report_date;                 // ME 12
    std::string reported_by;                         // ME 13
    std::vector<std::string> vendors;                // ME 14
    LifecycleStatus status = LifecycleStatus::Reported;  // ME 15
    std::vector<StatusChange> status_history;
    Json extensions = Json::object();  // unknown intake fields, preserved verbatim

    bool operator==(const VulnerabilityRecord&) const = default;
};

// Errors: MALFORMED_DOCUMENT, BAD_FIELD_TYPE, BAD_ID.
VulnerabilityRecord parse_record(const Json& document);
VulnerabilityRecord parse_record_text(const std::string& text);

// Deterministic canonical form: fixed key order, two-space indent,
// trailing newline; only populated fields emitted.
Json serialize_record(const VulnerabilityRecord& r);
std::string serialize_record_text(const VulnerabilityRecord& r);

ValidationReport validate_record(const VulnerabilityRecord& r, ValidationProfile profile,
                                 const catalog::Catalog& cat,
                                 Date today = Timestamp::now().date_utc());

// Field names required non-empty by the given profile (documentation and
// coverage-test hook; id/status are registry-assigned and excluded).
std::vector<std::string> profile_required_fields(ValidationProfile profile);

}  // namespace aivd::record
