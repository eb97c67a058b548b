#pragma once

#include <map>
#include <string>
#include <vector>

#include "aivd/json.hpp"
#include "aivd/severity.hpp"

namespace aivd::catalog {

// The four weakness classes of the AI-CWE taxonomy.
enum class WeaknessClass { ValidationMechanism, DataHandling, LearningAlgorithm, PrivacySafeguard };

std::string weakness_class_name(WeaknessClass c);
WeaknessClass weakness_class_from_name(const std::string& name);  // throws BAD_CLASS
// Full class description sentence, kept alongside the condensed identifier.
std::string weakness_class_description(WeaknessClass c);

enum class RelationshipKind { ParentOf, ChildOf, RelatedTo };

std::string relationship_kind_name(RelationshipKind k);
RelationshipKind relationship_kind_from_name(const std::string& name);

enum class IntroductionMode { DataCollection, Training, FineTuning, Inference, Deployment };

std::string introduction_mode_name(IntroductionMode m);
IntroductionMode introduction_mode_from_name(const std::string& name);

struct Reference {
    std::string title;
    std::string url;

    bool operator==(const Reference&) const = default;
};

struct Relationship {
    std::string target;  // AI-CWE id
    RelationshipKind kind = RelationshipKind::RelatedTo;

    bool operator==(const Relationship&) const = default;
};

// Typical instance-score range, e.g. "High to Critical".
struct SeverityBandRange {
    severity::Band low = severity::Band::None;
    severity::Band high = severity::Band::None;

    bool operator==(const SeverityBandRange&) const = default;
};

struct AiCweEntry {
    std::string id;  // "AI-CWE-" + positive integer
    std::string name;
    WeaknessClass weakness_class = WeaknessClass::ValidationMechanism;
    std::string description;
    std::vector<std::string> examples;
    SeverityBandRange severity_band;
    std::string common_consequence;
    std::vector<Relationship> relationships;
    std::vector<IntroductionMode> modes_of_introduction;
    std::vector<std::string> potential_mitigations;  // MIT ids
    std::vector<Reference> references;
    bool seed = false;

    bool operator==(const AiCweEntry&) const = default;
};

enum class MitigationType { Proactive, Reactive };
enum class MitigationOrientation { Data, Model, System };

std::string mitigation_type_name(MitigationType t);
MitigationType mitigation_type_from_name(const std::string& name);
std::string mitigation_orientation_name(MitigationOrientation o);
MitigationOrientation mitigation_orientation_from_name(const std::string& name);

struct MitigationEntry {
    std::string id;  // "MIT-" + positive integer
    std::string name;
    std::string description;
    std::string effect;
    MitigationType type = MitigationType::Proactive;
    std::string tactic;
    MitigationOrientation orientation = MitigationOrientation::Data;
    std::vector<std::string> target_weaknesses;  // AI-CWE ids
    std::vector<std::string> target_attacks;
    std::vector<std::string> pros;
    std::vector<std::string> cons;
    std::vector<Reference> references;
    bool seed = false;

    bool operator==(const MitigationEntry&) const = default;
};

// Immutable after load; closed under cross-references.
struct Catalog {
    std::map<std::string, AiCweEntry> weaknesses;
    std::map<std::string, MitigationEntry> mitigations;
    std::string version;
};

bool is_weakness_id(const std::string& id);    // AI-CWE-<n>
bool is_mitigation_id(const std::string& id);  // MIT-<n>

// Accepts one array document or several entry/array documents; entries
// carrying a "mitigation" marker or MIT id load as mitigations. Load is
// atomic: any integrity violation throws and yields no catalog.
// Errors: DUPLICATE_ID, DANGLING_REF, RELATIONSHIP_CYCLE, MALFORMED_DOCUMENT.
Catalog load_catalog(const std::vector<Json>& documents, const std::string& version = "");
Catalog load_catalog_dir(const std::string& dir);

Json serialize_weakness(const AiCweEntry& e);
Json serialize_mitigation(const MitigationEntry& e);

const AiCweEntry& get_weakness(const Catalog& c, const std::string& id);  // NOT_FOUND
const MitigationEntry& get_mitigation(const Catalog& c, const std::string& id);

std::vector<AiCweEntry> list_by_class(const Catalog& c, WeaknessClass cls);

// Mitigations whose target_weaknesses contain the id, ordered by id.
std::vector<MitigationEntry> get_mitigations_for(const Catalog& c, const std::string& weakness_id);

// Transitive closure over ParentOf/ChildOf from the given entry, the
// entry itself excluded; RelatedTo neighbours appear but are not
// traversed. Deterministic (sorted) order.
std::vector<std::string> resolve_relationships(const Catalog& c, const std::string& id);

}  // namespace aivd::catalog
