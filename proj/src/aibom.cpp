#include "aivd/aibom.hpp"

#include <algorithm>
#include <map>

#include "aivd/error.hpp"
#include "json_field.hpp"

namespace aivd::aibom {

using detail::find;
using detail::get_number_map;
using detail::get_string;
using detail::get_string_list;
using detail::get_string_map;

namespace {

std::optional<ModelAvailability> parse_model_availability(const Json& section) {
    std::string s = get_string(section, "availability", "model.availability");
    if (s.empty()) return std::nullopt;
    if (s == "Public") return ModelAvailability::Public;
    if (s == "Restricted") return ModelAvailability::Restricted;
    fail("BAD_FIELD_TYPE", "model.availability must be Public or Restricted");
}

std::optional<DataAvailability> parse_data_availability(const Json& section) {
    std::string s = get_string(section, "availability", "data.availability");
    if (s.empty()) return std::nullopt;
    if (s == "Public") return DataAvailability::Public;
    if (s == "Private") return DataAvailability::Private;
    fail("BAD_FIELD_TYPE", "data.availability must be Public or Private");
}

void put(Json& obj, const char* key, const std::string& v) {
    if (!v.empty()) obj[key] = v;
}

void put(Json& obj, const char* key, const std::vector<std::string>& v) {
    if (!v.empty()) obj[key] = v;
}

void put(Json& obj, const char* key, const std::map<std::string, std::string>& v) {
    if (!v.empty()) obj[key] = v;
}

// ---- flatten / unflatten over canonical JSON ----

bool is_index(const std::string& seg) {
    return !seg.empty() &&
           std::all_of(seg.begin(), seg.end(), [](char c) { return c >= '0' && c <= '9'; });
}

void flatten_into(const Json& j, const std::string& prefix, std::map<std::string, Json>& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            flatten_into(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); ++i)
            flatten_into(j[i], prefix + "." + std::to_string(i), out);
    } else {
        out[prefix] = j;
    }
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> segs;
    size_t pos = 0;
    while (pos <= path.size()) {
        size_t dot = path.find('.', pos);
        if (dot == std::string::npos) dot = path.size();
        segs.push_back(path.substr(pos, dot - pos));
        pos = dot + 1;
    }
    return segs;
}

Json unflatten(const std::map<std::string, Json>& leaves) {
    Json root = Json::object();
    for (const auto& [path, value] : leaves) {
        auto segs = split_path(path);
        Json* cur = &root;
        for (size_t i = 0; i < segs.size(); ++i) {
            const bool last = i + 1 == segs.size();
            if (is_index(segs[i])) {
                size_t idx = std::stoul(segs[i]);
                if (!cur->is_array()) *cur = Json::array();
                while (cur->size() <= idx) cur->push_back(nullptr);
                if (last)
                    (*cur)[idx] = value;
                else
                    cur = &(*cur)[idx];
            } else {
                if (!cur->is_object()) *cur = Json::object();
                if (last)
                    (*cur)[segs[i]] = value;
                else
                    cur = &(*cur)[segs[i]];
            }
        }
    }
    return root;
}

}  // namespace

AibomDocument parse_aibom(const Json& document) {
    detail::require_object(document, "AIBOM document");
    for (const char* section : {"meta", "model", "data", "consideration", "usage"})
        if (const Json* s = find(document, section))
            detail::require_object(*s, std::string("AIBOM section ") + section);
    AibomDocument doc;

    if (const Json* meta = find(document, "meta")) {
        doc.meta.generation_tool = get_string(*meta, "generation_tool", "meta.generation_tool");
        doc.meta.creator = get_string(*meta, "creator", "meta.creator");
        doc.meta.certification = get_string_list(*meta, "certification", "meta.certification");
        std::string rd = get_string(*meta, "release_date", "meta.release_date");
        if (!rd.empty()) doc.meta.release_date = Date::parse(rd);
        doc.meta.license = get_string(*meta, "license", "meta.license");
    }
    if (const Json* model = find(document, "model")) {
        auto& m = doc.model;
        m.source = get_string(*model, "source", "model.source");
        m.availability = parse_model_availability(*model);
        m.foundation_model = get_string(*model, "foundation_model", "model.foundation_model");
        m.additional_models =
            get_string_list(*model, "additional_models", "model.additional_models");
        m.weights_ref = get_string(*model, "weights_ref", "model.weights_ref");
        m.scripts = get_string_list(*model, "scripts", "model.scripts");
        m.hyperparameters = get_string_map(*model, "hyperparameters", "model.hyperparameters");
        m.configurations = get_string_map(*model, "configurations", "model.configurations");
        m.domain = get_string(*model, "domain", "model.domain");
        m.training_process = get_string(*model, "training_process", "model.training_process");
        m.software_requirements =
            get_string_list(*model, "software_requirements", "model.software_requirements");
        m.hardware_requirements =
            get_string_list(*model, "hardware_requirements", "model.hardware_requirements");
        m.evaluation_process =
            get_string(*model, "evaluation_process", "model.evaluation_process");
        if (const Json* deps = find(*model, "dependencies")) {
            if (!deps->is_array())
                fail("BAD_FIELD_TYPE", "model.dependencies must be an array");
            for (const auto& d : *deps) {
                detail::require_object(d, "model.dependencies entry");
                m.dependencies.push_back({get_string(d, "name", "model.dependencies.name"),
                                          get_string(d, "version", "model.dependencies.version")});
            }
        }
    }
    if (const Json* data = find(document, "data")) {
        auto& d = doc.data;
        d.source = get_string(*data, "source", "data.source");
        d.availability = parse_data_availability(*data);
        d.collection_method = get_string(*data, "collection_method", "data.collection_method");
        d.preprocessing = get_string_list(*data, "preprocessing", "data.preprocessing");
        d.input_output_format =
            get_string(*data, "input_output_format", "data.input_output_format");
        d.quantitative_measures =
            get_number_map(*data, "quantitative_measures", "data.quantitative_measures");
        d.qualitative_measures =
            get_string_list(*data, "qualitative_measures", "data.qualitative_measures");
        d.governance = get_string(*data, "governance", "data.governance");
        d.annotation = get_string(*data, "annotation", "data.annotation");
    }
    if (const Json* cons = find(document, "consideration")) {
        auto& c = doc.consideration;
        c.ethical = get_string(*cons, "ethical", "consideration.ethical");
        c.environmental = get_string(*cons, "environmental", "consideration.environmental");
        c.energy_usage = get_string(*cons, "energy_usage", "consideration.energy_usage");
        c.carbon_footprint =
            get_string(*cons, "carbon_footprint", "consideration.carbon_footprint");
        c.risk = get_string_list(*cons, "risk", "consideration.risk");
        c.mitigation = get_string_list(*cons, "mitigation", "consideration.mitigation");
        c.recommendation = get_string_list(*cons, "recommendation", "consideration.recommendation");
    }
    if (const Json* usage = find(document, "usage")) {
        auto& u = doc.usage;
        u.intended = get_string_list(*usage, "intended", "usage.intended");
        u.out_of_scope = get_string_list(*usage, "out_of_scope", "usage.out_of_scope");
        u.malicious = get_string_list(*usage, "malicious", "usage.malicious");
    }
    return doc;
}

AibomDocument parse_aibom_text(const std::string& text) {
    return parse_aibom(detail::parse_json_text(text, "AIBOM document"));
}

Json serialize_aibom(const AibomDocument& doc) {
    Json meta = Json::object();
    put(meta, "generation_tool", doc.meta.generation_tool);
    put(meta, "creator", doc.meta.creator);
    put(meta, "certification", doc.meta.certification);
    if (doc.meta.release_date) meta["release_date"] = doc.meta.release_date->to_string();
    put(meta, "license", doc.meta.license);

    Json model = Json::object();
    put(model, "source", doc.model.source);
    if (doc.model.availability)
        model["availability"] =
            *doc.model.availability == ModelAvailability::Public ? "Public" : "Restricted";
    put(model, "foundation_model", doc.model.foundation_model);
    put(model, "additional_models", doc.model.additional_models);
    put(model, "weights_ref", doc.model.weights_ref);
    put(model, "scripts", doc.model.scripts);
    put(model, "hyperparameters", doc.model.hyperparameters);
    put(model, "configurations", doc.model.configurations);
    put(model, "domain", doc.model.domain);
    put(model, "training_process", doc.model.training_process);
    put(model, "software_requirements", doc.model.software_requirements);
    put(model, "hardware_requirements", doc.model.hardware_requirements);
    put(model, "evaluation_process", doc.model.evaluation_process);
    if (!doc.model.dependencies.empty()) {
        Json deps = Json::array();
        for (const auto& d : doc.model.dependencies) {
            Json e = Json::object();
            put(e, "name", d.name);
            put(e, "version", d.version);
            deps.push_back(std::move(e));
        }
        model["dependencies"] = std::move(deps);
    }

    Json data = Json::object();
    put(data, "source", doc.data.source);
    if (doc.data.availability)
        data["availability"] =
            *doc.data.availability == DataAvailability::Public ? "Public" : "Private";
    put(data, "collection_method", doc.data.collection_method);
    put(data, "preprocessing", doc.data.preprocessing);
    put(data, "input_output_format", doc.data.input_output_format);
    if (!doc.data.quantitative_measures.empty()) data["quantitative_measures"] = doc.data.quantitative_measures;
    put(data, "qualitative_measures", doc.data.qualitative_measures);
    put(data, "governance", doc.data.governance);
    put(data, "annotation", doc.data.annotation);

    Json cons = Json::object();
    put(cons, "ethical", doc.consideration.ethical);
    put(cons, "environmental", doc.consideration.environmental);
    put(cons, "energy_usage", doc.consideration.energy_usage);
    put(cons, "carbon_footprint", doc.consideration.carbon_footprint);
    put(cons, "risk", doc.consideration.risk);
    put(cons, "mitigation", doc.consideration.mitigation);
    put(cons, "recommendation", doc.consideration.recommendation);

    Json usage = Json::object();
    put(usage, "intended", doc.usage.intended);
    put(usage, "out_of_scope", doc.usage.out_of_scope);
    put(usage, "malicious", doc.usage.malicious);

    Json out = Json::object();
    out["meta"] = std::move(meta);
    out["model"] = std::move(model);
    out["data"] = std::move(data);
    out["consideration"] = std::move(cons);
    out["usage"] = std::move(usage);
    return out;
}

ValidationReport validate_aibom(const AibomDocument& doc) {
    ValidationReport report;
    report.profile = ValidationProfile::Submission;
    if (doc.meta.creator.empty())
        report.error("MISSING_FIELD", "meta.creator", "creator is required");
    if (!doc.meta.release_date)
        report.error("MISSING_FIELD", "meta.release_date", "release date is required");
    if (doc.model.foundation_model.empty() && doc.model.source.empty())
        report.error("MISSING_FIELD", "model.foundation_model",
                     "either foundation_model or source is required");
    if (doc.data.source.empty())
        report.error("MISSING_FIELD", "data.source", "data source is required");
    for (size_t i = 0; i < doc.model.dependencies.size(); ++i)
        if (doc.model.dependencies[i].name.empty())
            report.error("MISSING_FIELD",
                         "model.dependencies." + std::to_string(i) + ".name",
                         "dependency name must be nonempty");
    if (doc.usage.intended.empty())
        report.warning("EMPTY_SECTION", "usage.intended", "intended usage is recommended");
    if (doc.consideration.risk.empty())
        report.warning("EMPTY_SECTION", "consideration.risk", "risk assessment is recommended");
    return report;
}

AibomDiff diff_aibom(const AibomDocument& a, const AibomDocument& b) {
    std::map<std::string, Json> fa, fb;
    flatten_into(serialize_aibom(a), "", fa);
    flatten_into(serialize_aibom(b), "", fb);
    AibomDiff diff;
    for (const auto& [path, value] : fa) {
        auto it = fb.find(path);
        if (it == fb.end())
            diff.removed.push_back({path, value, std::nullopt});
        else if (it->second != value)
            diff.modified.push_back({path, value, it->second});
    }
    for (const auto& [path, value] : fb)
        if (!fa.count(path)) diff.added.push_back({path, std::nullopt, value});
    return diff;
}

AibomDocument patch_aibom(const AibomDocument& a, const AibomDiff& diff) {
    std::map<std::string, Json> leaves;
    flatten_into(serialize_aibom(a), "", leaves);
    for (const auto& e : diff.removed) leaves.erase(e.path);
    for (const auto& e : diff.modified) leaves[e.path] = *e.after;
    for (const auto& e : diff.added) leaves[e.path] = *e.after;
    return parse_aibom(unflatten(leaves));
}

bool path_exists(const AibomDocument& doc, const std::string& path) {
    Json j = serialize_aibom(doc);
    const Json* cur = &j;
    for (const auto& seg : split_path(path)) {
        if (cur->is_object()) {
            auto it = cur->find(seg);
            if (it == cur->end()) return false;
            cur = &*it;
        } else if (cur->is_array() && is_index(seg)) {
            size_t idx = std::stoul(seg);
            if (idx >= cur->size()) return false;
            cur = &(*cur)[idx];
        } else {
            return false;
        }
    }
    return true;
}

const std::vector<std::pair<std::string, std::vector<std::string>>>& schema_fields() {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> fields = {
        {"meta", {"generation_tool", "creator", "certification", "release_date", "license"}},
        {"model",
         {"source", "availability", "foundation_model", "additional_models", "weights_ref",
          "scripts", "hyperparameters", "configurations", "domain", "training_process",
          "software_requirements", "hardware_requirements", "evaluation_process",
          "dependencies"}},
        {"data",
         {"source", "availability", "collection_method", "preprocessing", "input_output_format",
          "quantitative_measures", "qualitative_measures", "governance", "annotation"}},
        {"consideration",
         {"ethical", "environmental", "energy_usage", "carbon_footprint", "risk", "mitigation",
          "recommendation"}},
        {"usage", {"intended", "out_of_scope", "malicious"}},
    };
    return fields;
}

}  // namespace aivd::aibom
