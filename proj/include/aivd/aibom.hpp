#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aivd/json.hpp"
#include "aivd/time.hpp"
#include "aivd/validation.hpp"

namespace aivd::aibom {

enum class ModelAvailability { Public, Restricted };
enum class DataAvailability { Public, Private };

struct Dependency {
    std::string name;
    std::string version;

    bool operator==(const Dependency&) const = default;
};

// Identity, origin, and authorization of the documented system.
struct MetaSection {
    std::string generation_tool;
    std::string creator;
    std::vector<std::string> certification;
    std::optional<Date> release_date;
    std::string license;

    bool operator==(const MetaSection&) const = default;
};

struct ModelSection {
    std::string source;
    std::optional<ModelAvailability> availability;
    std::string foundation_model;
    std::vector<std::string> additional_models;
    std::string weights_ref;
    std::vector<std::string> scripts;
    std::map<std::string, std::string> hyperparameters;
    std::map<std::string, std::string> configurations;
    std::string domain;
    std::string training_process;
    std::vector<std::string> software_requirements;
    std::vector<std::string> hardware_requirements;
    std::string evaluation_process;
    std::vector<Dependency> dependencies;

    bool operator==(const ModelSection&) const = default;
};

struct DataSection {
    std::string source;
    std::optional<DataAvailability> availability;
    std::string collection_method;
    std::vector<std::string> preprocessing;
    std::string input_output_format;
    std::map<std::string, double> quantitative_measures;
    std::vector<std::string> qualitative_measures;
    std::string governance;
    std::string annotation;

    bool operator==(const DataSection&) const = default;
};

struct ConsiderationSection {
    std::string ethical;
    std::string environmental;
    std::string energy_usage;
    std::string carbon_footprint;
    std::vector<std::string> risk;
    std::vector<std::string> mitigation;
    std::vector<std::string> recommendation;

    bool operator==(const ConsiderationSection&) const = default;
};

struct UsageSection {
    std::vector<std::string> intended;
    std::vector<std::string> out_of_scope;
    std::vector<std::string> malicious;

    bool operator==(const UsageSection&) const = default;
};

struct AibomDocument {
    MetaSection meta;
    ModelSection model;
    DataSection data;
    ConsiderationSection consideration;
    UsageSection usage;

    bool operator==(const AibomDocument&) const = default;
};

// Path-wise structural diff over the canonical representation. Paths are
// dotted, with numeric segments for array indices
// (e.g. "model.dependencies.0.name").
struct DiffEntry {
    std::string path;
    std::optional<Json> before;
    std::optional<Json> after;

    bool operator==(const DiffEntry&) const = default;
};

struct AibomDiff {
    std::vector<DiffEntry> added;
    std::vector<DiffEntry> removed;
    std::vector<DiffEntry> modified;

    bool empty() const { return added.empty() && removed.empty() && modified.empty(); }
};

AibomDocument parse_aibom(const Json& document);          // throws MALFORMED_DOCUMENT
AibomDocument parse_aibom_text(const std::string& text);  // throws MALFORMED_DOCUMENT
Json serialize_aibom(const AibomDocument& doc);

ValidationReport validate_aibom(const AibomDocument& doc);

AibomDiff diff_aibom(const AibomDocument& a, const AibomDocument& b);
AibomDocument patch_aibom(const AibomDocument& a, const AibomDiff& diff);

// True iff the dotted path resolves to a populated field of the document.
bool path_exists(const AibomDocument& doc, const std::string& path);

// Section/field names of the document model, in canonical order. Used by
// the schema self-test and by path validation.
const std::vector<std::pair<std::string, std::vector<std::string>>>& schema_fields();

}  // namespace aivd::aibom
