#include "aivd/catalog.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <set>

#include "aivd/error.hpp"
#include "json_field.hpp"

namespace aivd::catalog {

namespace fs = std::filesystem;
using detail::find;
using detail::get_string;
using detail::get_string_list;

namespace {

template <typename Enum, size_t N>
Enum from_name(const std::array<std::pair<const char*, Enum>, N>& table,
               const std::string& name, const char* code, const char* what) {
    for (const auto& [n, v] : table)
        if (name == n) return v;
    fail(code, std::string("unknown ") + what + " '" + name + "'");
}

constexpr std::array<std::pair<const char*, WeaknessClass>, 4> kClasses{{
    {"ValidationMechanism", WeaknessClass::ValidationMechanism},
    {"DataHandling", WeaknessClass::DataHandling},
    {"LearningAlgorithm", WeaknessClass::LearningAlgorithm},
    {"PrivacySafeguard", WeaknessClass::PrivacySafeguard},
}};

constexpr std::array<std::pair<const char*, RelationshipKind>, 3> kKinds{{
    {"ParentOf", RelationshipKind::ParentOf},
    {"ChildOf", RelationshipKind::ChildOf},
    {"RelatedTo", RelationshipKind::RelatedTo},
}};

constexpr std::array<std::pair<const char*, IntroductionMode>, 5> kModes{{
    {"DataCollection", IntroductionMode::DataCollection},
    {"Training", IntroductionMode::Training},
    {"FineTuning", IntroductionMode::FineTuning},
    {"Inference", IntroductionMode::Inference},
    {"Deployment", IntroductionMode::Deployment},
}};

bool id_with_prefix(const std::string& id, const std::string& prefix) {
    if (id.size() <= prefix.size() || id.compare(0, prefix.size(), prefix) != 0) return false;
    const std::string digits = id.substr(prefix.size());
    if (!std::all_of(digits.begin(), digits.end(),
                     [](char c) { return c >= '0' && c <= '9'; }))
        return false;
    return digits.find_first_not_of('0') != std::string::npos;  // positive integer
}

std::vector<Reference> parse_references(const Json& obj, const std::string& path) {
    const Json* f = find(obj, "references");
    if (!f) return {};
    if (!f->is_array()) fail("MALFORMED_DOCUMENT", path + ".references must be an array");
    std::vector<Reference> out;
    for (const auto& r : *f)
        out.push_back({get_string(r, "title", path + ".references.title"),
                       get_string(r, "url", path + ".references.url")});
    return out;
}

Json serialize_references(const std::vector<Reference>& refs) {
    Json arr = Json::array();
    for (const auto& r : refs) {
        Json e = Json::object();
        e["title"] = r.title;
        if (!r.url.empty()) e["url"] = r.url;
        arr.push_back(std::move(e));
    }
    return arr;
}

AiCweEntry parse_weakness(const Json& j) {
    AiCweEntry e;
    e.id = get_string(j, "id", "weakness.id");
    if (!is_weakness_id(e.id))
        fail("MALFORMED_DOCUMENT", "invalid AI-CWE id '" + e.id + "'");
    e.name = get_string(j, "name", e.id + ".name");
    e.weakness_class = from_name(kClasses, get_string(j, "weakness_class", e.id),
                                 "MALFORMED_DOCUMENT", "weakness class");
    e.description = get_string(j, "description", e.id + ".description");
    e.examples = get_string_list(j, "examples", e.id + ".examples");
    if (const Json* band = find(j, "severity_band")) {
        e.severity_band.low =
            severity::band_from_name(get_string(*band, "low", e.id + ".severity_band.low"));
        e.severity_band.high =
            severity::band_from_name(get_string(*band, "high", e.id + ".severity_band.high"));
        if (e.severity_band.high < e.severity_band.low)
            fail("MALFORMED_DOCUMENT", e.id + ": severity band low bound above high bound");
    }
    e.common_consequence = get_string(j, "common_consequence", e.id + ".common_consequence");
    if (const Json* rels = find(j, "relationships")) {
        if (!rels->is_array())
            fail("MALFORMED_DOCUMENT", e.id + ".relationships must be an array");
        for (const auto& r : *rels)
            e.relationships.push_back(
                {get_string(r, "target", e.id + ".relationships.target"),
                 from_name(kKinds, get_string(r, "kind", e.id), "MALFORMED_DOCUMENT",
                           "relationship kind")});
    }
    for (const auto& m : get_string_list(j, "modes_of_introduction", e.id + ".modes"))
        e.modes_of_introduction.push_back(
            from_name(kModes, m, "MALFORMED_DOCUMENT", "mode of introduction"));
    e.potential_mitigations =
        get_string_list(j, "potential_mitigations", e.id + ".potential_mitigations");
    e.references = parse_references(j, e.id);
    if (const Json* s = find(j, "seed")) e.seed = s->is_boolean() && s->get<bool>();
    return e;
}

MitigationEntry parse_mitigation(const Json& j) {
    MitigationEntry e;
    e.id = get_string(j, "id", "mitigation.id");
    if (!is_mitigation_id(e.id))
        fail("MALFORMED_DOCUMENT", "invalid mitigation id '" + e.id + "'");
    e.name = get_string(j, "name", e.id + ".name");
    e.description = get_string(j, "description", e.id + ".description");
    e.effect = get_string(j, "effect", e.id + ".effect");
    e.type = mitigation_type_from_name(get_string(j, "type", e.id + ".type"));
    e.tactic = get_string(j, "tactic", e.id + ".tactic");
    e.orientation =
        mitigation_orientation_from_name(get_string(j, "orientation", e.id + ".orientation"));
    e.target_weaknesses = get_string_list(j, "target_weaknesses", e.id + ".target_weaknesses");
    e.target_attacks = get_string_list(j, "target_attacks", e.id + ".target_attacks");
    e.pros = get_string_list(j, "pros", e.id + ".pros");
    e.cons = get_string_list(j, "cons", e.id + ".cons");
    e.references = parse_references(j, e.id);
    if (const Json* s = find(j, "seed")) e.seed = s->is_boolean() && s->get<bool>();
    return e;
}

void check_integrity(const Catalog& c) {
    for (const auto& [id, w] : c.weaknesses) {
        for (const auto& rel : w.relationships)
            if (!c.weaknesses.count(rel.target))
                fail("DANGLING_REF", id + " references unknown weakness " + rel.target);
        for (const auto& mid : w.potential_mitigations)
            if (!c.mitigations.count(mid))
                fail("DANGLING_REF", id + " references unknown mitigation " + mid);
    }
    for (const auto& [id, m] : c.mitigations)
        for (const auto& wid : m.target_weaknesses)
            if (!c.weaknesses.count(wid))
                fail("DANGLING_REF", id + " targets unknown weakness " + wid);

    // Cycle check over the hierarchy edges. ChildOf is the reverse of
    // ParentOf, so both map onto the same directed edge set.
    std::map<std::string, std::vector<std::string>> children;
    for (const auto& [id, w] : c.weaknesses)
        for (const auto& rel : w.relationships) {
            if (rel.kind == RelationshipKind::ParentOf) children[id].push_back(rel.target);
            if (rel.kind == RelationshipKind::ChildOf) children[rel.target].push_back(id);
        }
    std::map<std::string, int> state;  // 0 unseen, 1 in stack, 2 done
    std::function<void(const std::string&)> visit = [&](const std::string& n) {
        state[n] = 1;
        for (const auto& next : children[n]) {
            if (state[next] == 1)
                fail("RELATIONSHIP_CYCLE", "hierarchy cycle through " + n + " and " + next);
            if (state[next] == 0) visit(next);
        }
        state[n] = 2;
    };
    for (const auto& [id, w] : c.weaknesses) {
        (void)w;
        if (state[id] == 0) visit(id);
    }
}

void add_entry(Catalog& c, const Json& j) {
    detail::require_object(j, "catalog entry");
    const std::string id = get_string(j, "id", "entry.id");
    if (is_mitigation_id(id)) {
        MitigationEntry e = parse_mitigation(j);
        if (!c.mitigations.emplace(e.id, e).second)
            fail("DUPLICATE_ID", "duplicate catalog id " + e.id);
    } else {
        AiCweEntry e = parse_weakness(j);
        if (!c.weaknesses.emplace(e.id, e).second)
            fail("DUPLICATE_ID", "duplicate catalog id " + e.id);
    }
}

}  // namespace

std::string weakness_class_name(WeaknessClass c) {
    for (const auto& [n, v] : kClasses)
        if (v == c) return n;
    return {};
}

WeaknessClass weakness_class_from_name(const std::string& name) {
    return from_name(kClasses, name, "BAD_CLASS", "weakness class");
}

std::string weakness_class_description(WeaknessClass c) {
    switch (c) {
        case WeaknessClass::ValidationMechanism:
            return "Insufficient validation mechanisms that allow malicious samples to bypass "
                   "security checks and infiltrate the system.";
        case WeaknessClass::DataHandling:
            return "Data handling processes lack robust filtering and normalization "
                   "capabilities, leading to susceptibility to noise and perturbations that "
                   "compromise data integrity.";
        case WeaknessClass::LearningAlgorithm:
            return "The learning algorithms are vulnerable to perturbations due to inadequate "
                   "resilience and adaptability in handling crafted inputs designed to mislead "
                   "or corrupt the learning process.";
        case WeaknessClass::PrivacySafeguard:
            return "Privacy safeguards are deficient or absent, exposing the data to "
                   "unauthorized access and manipulation due to inadequate encryption, "
                   "anonymization, or access control configurations.";
    }
    return {};
}

std::string relationship_kind_name(RelationshipKind k) {
    for (const auto& [n, v] : kKinds)
        if (v == k) return n;
    return {};
}

RelationshipKind relationship_kind_from_name(const std::string& name) {
    return from_name(kKinds, name, "BAD_RELATIONSHIP", "relationship kind");
}

std::string introduction_mode_name(IntroductionMode m) {
    for (const auto& [n, v] : kModes)
        if (v == m) return n;
    return {};
}

IntroductionMode introduction_mode_from_name(const std::string& name) {
    return from_name(kModes, name, "BAD_MODE", "mode of introduction");
}

std::string mitigation_type_name(MitigationType t) {
    return t == MitigationType::Proactive ? "Proactive" : "Reactive";
}

MitigationType mitigation_type_from_name(const std::string& name) {
    if (name == "Proactive") return MitigationType::Proactive;
    if (name == "Reactive") return MitigationType::Reactive;
    fail("MALFORMED_DOCUMENT", "unknown mitigation type '" + name + "'");
}

std::string mitigation_orientation_name(MitigationOrientation o) {
    switch (o) {
        case MitigationOrientation::Data: return "Data";
        case MitigationOrientation::Model: return "Model";
        case MitigationOrientation::System: return "System";
    }
    return {};
}

MitigationOrientation mitigation_orientation_from_name(const std::string& name) {
    if (name == "Data") return MitigationOrientation::Data;
    if (name == "Model") return MitigationOrientation::Model;
    if (name == "System") return MitigationOrientation::System;
    fail("MALFORMED_DOCUMENT", "unknown mitigation orientation '" + name + "'");
}

bool is_weakness_id(const std::string& id) { return id_with_prefix(id, "AI-CWE-"); }
bool is_mitigation_id(const std::string& id) { return id_with_prefix(id, "MIT-"); }

Catalog load_catalog(const std::vector<Json>& documents, const std::string& version) {
    Catalog c;
    c.version = version;
    for (const Json& doc : documents) {
        if (doc.is_array())
            for (const Json& entry : doc) add_entry(c, entry);
        else
            add_entry(c, doc);
    }
    check_integrity(c);
    return c;
}

Catalog load_catalog_dir(const std::string& dir) {
    if (!fs::is_directory(dir)) fail("MALFORMED_DOCUMENT", "catalog directory missing: " + dir);
    std::vector<fs::path> paths;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    std::vector<Json> docs;
    for (const auto& p : paths) {
        std::ifstream in(p);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        docs.push_back(detail::parse_json_text(text, p.string()));
    }
    return load_catalog(docs);
}

Json serialize_weakness(const AiCweEntry& e) {
    Json j = Json::object();
    j["id"] = e.id;
    j["name"] = e.name;
    j["weakness_class"] = weakness_class_name(e.weakness_class);
    j["description"] = e.description;
    if (!e.examples.empty()) j["examples"] = e.examples;
    j["severity_band"] = {{"low", severity::band_name(e.severity_band.low)},
                          {"high", severity::band_name(e.severity_band.high)}};
    if (!e.common_consequence.empty()) j["common_consequence"] = e.common_consequence;
    Json rels = Json::array();
    for (const auto& r : e.relationships)
        rels.push_back({{"target", r.target}, {"kind", relationship_kind_name(r.kind)}});
    j["relationships"] = std::move(rels);
    Json modes = Json::array();
    for (auto m : e.modes_of_introduction) modes.push_back(introduction_mode_name(m));
    j["modes_of_introduction"] = std::move(modes);
    if (!e.potential_mitigations.empty()) j["potential_mitigations"] = e.potential_mitigations;
    if (!e.references.empty()) j["references"] = serialize_references(e.references);
    if (e.seed) j["seed"] = true;
    return j;
}

Json serialize_mitigation(const MitigationEntry& e) {
    Json j = Json::object();
    j["id"] = e.id;
    j["name"] = e.name;
    j["description"] = e.description;
    if (!e.effect.empty()) j["effect"] = e.effect;
    j["type"] = mitigation_type_name(e.type);
    if (!e.tactic.empty()) j["tactic"] = e.tactic;
    j["orientation"] = mitigation_orientation_name(e.orientation);
    if (!e.target_weaknesses.empty()) j["target_weaknesses"] = e.target_weaknesses;
    if (!e.target_attacks.empty()) j["target_attacks"] = e.target_attacks;
    if (!e.pros.empty()) j["pros"] = e.pros;
    if (!e.cons.empty()) j["cons"] = e.cons;
    if (!e.references.empty()) j["references"] = serialize_references(e.references);
    if (e.seed) j["seed"] = true;
    return j;
}

const AiCweEntry& get_weakness(const Catalog& c, const std::string& id) {
    auto it = c.weaknesses.find(id);
    if (it == c.weaknesses.end()) fail("NOT_FOUND", "no weakness " + id + " in catalog");
    return it->second;
}

const MitigationEntry& get_mitigation(const Catalog& c, const std::string& id) {
    auto it = c.mitigations.find(id);
    if (it == c.mitigations.end()) fail("NOT_FOUND", "no mitigation " + id + " in catalog");
    return it->second;
}

std::vector<AiCweEntry> list_by_class(const Catalog& c, WeaknessClass cls) {
    std::vector<AiCweEntry> out;
    for (const auto& [id, w] : c.weaknesses) {
        (void)id;
        if (w.weakness_class == cls) out.push_back(w);
    }
    // std::map iteration is already id-ordered lexicographically; order by
    // numeric serial for stable human-facing listings.
    std::sort(out.begin(), out.end(), [](const AiCweEntry& a, const AiCweEntry& b) {
        return std::stol(a.id.substr(7)) < std::stol(b.id.substr(7));
    });
    return out;
}

std::vector<MitigationEntry> get_mitigations_for(const Catalog& c,
                                                 const std::string& weakness_id) {
    get_weakness(c, weakness_id);  // NOT_FOUND on unknown weakness
    std::vector<MitigationEntry> out;
    for (const auto& [id, m] : c.mitigations) {
        (void)id;
        if (std::find(m.target_weaknesses.begin(), m.target_weaknesses.end(), weakness_id) !=
            m.target_weaknesses.end())
            out.push_back(m);
    }
    std::sort(out.begin(), out.end(), [](const MitigationEntry& a, const MitigationEntry& b) {
        return std::stol(a.id.substr(4)) < std::stol(b.id.substr(4));
    });
    return out;
}

std::vector<std::string> resolve_relationships(const Catalog& c, const std::string& id) {
    get_weakness(c, id);
    std::set<std::string> closure;
    std::set<std::string> visited{id};
    std::deque<std::string> queue{id};
    while (!queue.empty()) {
        std::string cur = queue.front();
        queue.pop_front();
        for (const auto& rel : get_weakness(c, cur).relationships) {
            if (rel.kind == RelationshipKind::RelatedTo) {
                if (rel.target != id) closure.insert(rel.target);
                continue;  // related entries are listed, never traversed
            }
            if (visited.insert(rel.target).second) {
                closure.insert(rel.target);
                queue.push_back(rel.target);
            }
        }
    }
    closure.erase(id);
    return {closure.begin(), closure.end()};
}

}  // namespace aivd::catalog
