#include "aivd/severity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "aivd/error.hpp"

namespace aivd::severity {

namespace {

constexpr char kPrefix[] = "AIVSS:1.0";

double weight_av(AttackVector v) {
    switch (v) {
        case AttackVector::Network: return 0.85;
        case AttackVector::Adjacent: return 0.62;
        case AttackVector::Local: return 0.55;
        case AttackVector::Physical: return 0.20;
    }
    return 0;
}

double weight_ac(AttackComplexity v) {
    return v == AttackComplexity::Low ? 0.77 : 0.44;
}

double weight_pr(PrivilegesRequired v, Scope s) {
    switch (v) {
        case PrivilegesRequired::None: return 0.85;
        case PrivilegesRequired::Low: return s == Scope::Changed ? 0.68 : 0.62;
        case PrivilegesRequired::High: return s == Scope::Changed ? 0.50 : 0.27;
    }
    return 0;
}

double weight_ui(UserInteraction v) {
    return v == UserInteraction::None ? 0.85 : 0.62;
}

double weight_impact(ImpactLevel v) {
    switch (v) {
        case ImpactLevel::High: return 0.56;
        case ImpactLevel::Low: return 0.22;
        case ImpactLevel::None: return 0.0;
    }
    return 0;
}

double requirement_multiplier(Requirement r) {
    switch (r) {
        case Requirement::Low: return 0.5;
        case Requirement::Medium: return 1.0;
        case Requirement::High: return 1.5;
    }
    return 1.0;
}

struct ScoreInputs {
    double av, ac, pr, ui;
    Scope scope;
    double isc_base;  // 1-(1-C)(1-I)(1-A), possibly environment-adjusted
    double isc_ai;    // same product form over DP/MI/AE/DS
};

SeverityScore score_from_inputs(const ScoreInputs& in, const SeverityVector& snapshot,
                                Timestamp at, const ScoringParams& params) {
    const double exploitability = 8.22 * in.av * in.ac * in.pr * in.ui;
    const double isc = 1.0 - (1.0 - in.isc_base) * (1.0 - params.ai_coupling * in.isc_ai);
    double impact;
    if (in.scope == Scope::Unchanged) {
        impact = 6.42 * isc;
    } else {
        impact = 7.52 * (isc - 0.029) - 3.25 * std::pow(isc - 0.02, 15.0);
    }
    double value;
    if (impact <= 0.0) {
        value = 0.0;
    } else if (in.scope == Scope::Unchanged) {
        value = round_up_decimal(std::min(impact + exploitability, 10.0));
    } else {
        value = round_up_decimal(std::min(1.08 * (impact + exploitability), 10.0));
    }
    return SeverityScore{value, rating(value), snapshot, at};
}

double cia_product(double c, double i, double a) {
    return 1.0 - (1.0 - c) * (1.0 - i) * (1.0 - a);
}

double ai_product(double dp, double mi, double ae, double ds) {
    return 1.0 - (1.0 - dp) * (1.0 - mi) * (1.0 - ae) * (1.0 - ds);
}

const std::map<std::string, ImpactLevel> kImpactValues = {
    {"H", ImpactLevel::High}, {"L", ImpactLevel::Low}, {"N", ImpactLevel::None}};

template <typename Enum>
Enum decode(const std::map<std::string, Enum>& table, const std::string& metric,
            const std::string& value) {
    auto it = table.find(value);
    if (it == table.end())
        fail("BAD_METRIC_VALUE", "invalid value '" + value + "' for metric " + metric);
    return it->second;
}

}  // namespace

std::string band_name(Band b) {
    switch (b) {
        case Band::None: return "None";
        case Band::Low: return "Low";
        case Band::Medium: return "Medium";
        case Band::High: return "High";
        case Band::Critical: return "Critical";
    }
    return "None";
}

Band band_from_name(const std::string& name) {
    for (Band b : {Band::None, Band::Low, Band::Medium, Band::High, Band::Critical})
        if (band_name(b) == name) return b;
    fail("BAD_BAND", "unknown rating band '" + name + "'");
}

std::string trigger_name(RescoreTrigger t) {
    switch (t) {
        case RescoreTrigger::Initial: return "Initial";
        case RescoreTrigger::ModelUpdate: return "ModelUpdate";
        case RescoreTrigger::DataDrift: return "DataDrift";
        case RescoreTrigger::Scheduled: return "Scheduled";
        case RescoreTrigger::Manual: return "Manual";
    }
    return "Manual";
}

RescoreTrigger trigger_from_name(const std::string& name) {
    for (RescoreTrigger t : {RescoreTrigger::Initial, RescoreTrigger::ModelUpdate,
                             RescoreTrigger::DataDrift, RescoreTrigger::Scheduled,
                             RescoreTrigger::Manual})
        if (trigger_name(t) == name) return t;
    fail("BAD_TRIGGER", "unknown rescore trigger '" + name + "'");
}

SeverityVector parse_vector(const std::string& text) {
    std::vector<std::string> parts;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t slash = text.find('/', pos);
        if (slash == std::string::npos) slash = text.size();
        parts.push_back(text.substr(pos, slash - pos));
        pos = slash + 1;
    }
    if (parts.empty() || parts[0] != kPrefix)
        fail("BAD_PREFIX", "vector must start with \"" + std::string(kPrefix) + "\"");

    std::map<std::string, std::string> seen;
    for (size_t i = 1; i < parts.size(); ++i) {
        const std::string& p = parts[i];
        size_t colon = p.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 >= p.size())
            fail("BAD_METRIC_VALUE", "malformed metric pair '" + p + "'");
        std::string metric = p.substr(0, colon);
        std::string value = p.substr(colon + 1);
        if (!seen.emplace(metric, value).second)
            fail("DUPLICATE_METRIC", "metric " + metric + " given more than once");
    }

    static const char* kRequired[] = {"AV", "AC", "PR", "UI", "S",  "C",
                                      "I",  "A",  "DP", "MI", "AE", "DS"};
    for (const char* m : kRequired)
        if (!seen.count(m)) fail("MISSING_METRIC", std::string("metric ") + m + " is required");

    static const char* kKnown[] = {"AV", "AC", "PR", "UI", "S",  "C",  "I",  "A",
                                   "DP", "MI", "AE", "DS", "SF", "AU", "RE", "VD"};
    for (const auto& [metric, value] : seen) {
        (void)value;
        if (std::none_of(std::begin(kKnown), std::end(kKnown),
                         [&](const char* k) { return metric == k; }))
            fail("BAD_METRIC_VALUE", "unknown metric '" + metric + "'");
    }

    SeverityVector v;
    v.av = decode<AttackVector>({{"N", AttackVector::Network},
                                 {"A", AttackVector::Adjacent},
                                 {"L", AttackVector::Local},
                                 {"P", AttackVector::Physical}},
                                "AV", seen["AV"]);
    v.ac = decode<AttackComplexity>(
        {{"L", AttackComplexity::Low}, {"H", AttackComplexity::High}}, "AC", seen["AC"]);
    v.pr = decode<PrivilegesRequired>({{"N", PrivilegesRequired::None},
                                       {"L", PrivilegesRequired::Low},
                                       {"H", PrivilegesRequired::High}},
                                      "PR", seen["PR"]);
    v.ui = decode<UserInteraction>(
        {{"N", UserInteraction::None}, {"R", UserInteraction::Required}}, "UI", seen["UI"]);
    v.scope = decode<Scope>({{"U", Scope::Unchanged}, {"C", Scope::Changed}}, "S", seen["S"]);
    v.confidentiality = decode(kImpactValues, "C", seen["C"]);
    v.integrity = decode(kImpactValues, "I", seen["I"]);
    v.availability = decode(kImpactValues, "A", seen["A"]);
    v.data_poisoning = decode(kImpactValues, "DP", seen["DP"]);
    v.model_inversion = decode(kImpactValues, "MI", seen["MI"]);
    v.adversarial_example = decode(kImpactValues, "AE", seen["AE"]);
    v.distribution_shift = decode(kImpactValues, "DS", seen["DS"]);

    if (seen.count("SF"))
        v.supplemental.safety = decode<SafetyLabel>(
            {{"P", SafetyLabel::Present}, {"N", SafetyLabel::Negligible}}, "SF", seen["SF"]);
    if (seen.count("AU"))
        v.supplemental.automatable = decode<AutomatableLabel>(
            {{"Y", AutomatableLabel::Yes}, {"N", AutomatableLabel::No}}, "AU", seen["AU"]);
    if (seen.count("RE"))
        v.supplemental.recovery = decode<RecoveryLabel>({{"A", RecoveryLabel::Automatic},
                                                         {"U", RecoveryLabel::User},
                                                         {"I", RecoveryLabel::Irrecoverable}},
                                                        "RE", seen["RE"]);
    if (seen.count("VD"))
        v.supplemental.value_density = decode<ValueDensityLabel>(
            {{"D", ValueDensityLabel::Diffuse}, {"C", ValueDensityLabel::Concentrated}}, "VD",
            seen["VD"]);
    return v;
}

std::string render_vector(const SeverityVector& v) {
    auto impact_letter = [](ImpactLevel l) {
        switch (l) {
            case ImpactLevel::High: return "H";
            case ImpactLevel::Low: return "L";
            case ImpactLevel::None: return "N";
        }
        return "N";
    };
    std::string out = kPrefix;
    auto add = [&out](const char* metric, const char* value) {
        out += '/';
        out += metric;
        out += ':';
        out += value;
    };
    switch (v.av) {
        case AttackVector::Network: add("AV", "N"); break;
        case AttackVector::Adjacent: add("AV", "A"); break;
        case AttackVector::Local: add("AV", "L"); break;
        case AttackVector::Physical: add("AV", "P"); break;
    }
    add("AC", v.ac == AttackComplexity::Low ? "L" : "H");
    switch (v.pr) {
        case PrivilegesRequired::None: add("PR", "N"); break;
        case PrivilegesRequired::Low: add("PR", "L"); break;
        case PrivilegesRequired::High: add("PR", "H"); break;
    }
    add("UI", v.ui == UserInteraction::None ? "N" : "R");
    add("S", v.scope == Scope::Unchanged ? "U" : "C");
    add("C", impact_letter(v.confidentiality));
    add("I", impact_letter(v.integrity));
    add("A", impact_letter(v.availability));
    add("DP", impact_letter(v.data_poisoning));
    add("MI", impact_letter(v.model_inversion));
    add("AE", impact_letter(v.adversarial_example));
    add("DS", impact_letter(v.distribution_shift));
    if (v.supplemental.safety)
        add("SF", *v.supplemental.safety == SafetyLabel::Present ? "P" : "N");
    if (v.supplemental.automatable)
        add("AU", *v.supplemental.automatable == AutomatableLabel::Yes ? "Y" : "N");
    if (v.supplemental.recovery) {
        switch (*v.supplemental.recovery) {
            case RecoveryLabel::Automatic: add("RE", "A"); break;
            case RecoveryLabel::User: add("RE", "U"); break;
            case RecoveryLabel::Irrecoverable: add("RE", "I"); break;
        }
    }
    if (v.supplemental.value_density)
        add("VD", *v.supplemental.value_density == ValueDensityLabel::Diffuse ? "D" : "C");
    return out;
}

double round_up_decimal(double x) {
    // Scaled-integer guard against binary representation drift, same trick
    // the published v3.1 pseudocode uses.
    const std::int64_t scaled = std::llround(x * 100000.0);
    if (scaled % 10000 == 0) return static_cast<double>(scaled) / 100000.0;
    return static_cast<double>(scaled / 10000 + 1) / 10.0;
}

Band rating(double value) {
    const std::int64_t tenths = std::llround(value * 10.0);
    if (tenths < 0 || tenths > 100 || std::abs(value * 10.0 - tenths) > 1e-9)
        fail("OUT_OF_RANGE", "score must be in [0.0, 10.0] with one fractional digit");
    if (tenths == 0) return Band::None;
    if (tenths <= 39) return Band::Low;
    if (tenths <= 69) return Band::Medium;
    if (tenths <= 89) return Band::High;
    return Band::Critical;
}

SeverityScore compute_score(const SeverityVector& v, Timestamp at, ScoringParams params) {
    ScoreInputs in{weight_av(v.av),
                   weight_ac(v.ac),
                   weight_pr(v.pr, v.scope),
                   weight_ui(v.ui),
                   v.scope,
                   cia_product(weight_impact(v.confidentiality), weight_impact(v.integrity),
                               weight_impact(v.availability)),
                   ai_product(weight_impact(v.data_poisoning), weight_impact(v.model_inversion),
                              weight_impact(v.adversarial_example),
                              weight_impact(v.distribution_shift))};
    return score_from_inputs(in, v, at, params);
}

SeverityScore apply_environmental(const SeverityVector& v, const EnvironmentalContext& env,
                                  Timestamp at, ScoringParams params) {
    SeverityVector m = v;
    if (env.av) m.av = *env.av;
    if (env.ac) m.ac = *env.ac;
    if (env.pr) m.pr = *env.pr;
    if (env.ui) m.ui = *env.ui;
    if (env.scope) m.scope = *env.scope;
    if (env.confidentiality) m.confidentiality = *env.confidentiality;
    if (env.integrity) m.integrity = *env.integrity;
    if (env.availability) m.availability = *env.availability;
    if (env.data_poisoning) m.data_poisoning = *env.data_poisoning;
    if (env.model_inversion) m.model_inversion = *env.model_inversion;
    if (env.adversarial_example) m.adversarial_example = *env.adversarial_example;
    if (env.distribution_shift) m.distribution_shift = *env.distribution_shift;

    const double cr = requirement_multiplier(env.cr);
    const double ir = requirement_multiplier(env.ir);
    const double ar = requirement_multiplier(env.ar);
    const double air = requirement_multiplier(env.air);
    const double isc_base =
        std::min(cia_product(cr * weight_impact(m.confidentiality),
                             ir * weight_impact(m.integrity), ar * weight_impact(m.availability)),
                 0.915);
    const double isc_ai = std::min(
        ai_product(air * weight_impact(m.data_poisoning), air * weight_impact(m.model_inversion),
                   air * weight_impact(m.adversarial_example),
                   air * weight_impact(m.distribution_shift)),
        0.915);

    ScoreInputs in{weight_av(m.av), weight_ac(m.ac),     weight_pr(m.pr, m.scope),
                   weight_ui(m.ui), m.scope,             isc_base,
                   isc_ai};
    return score_from_inputs(in, m, at, params);
}

ScoreHistory reassess(const ScoreHistory& history, const SeverityVector& v,
                      RescoreTrigger trigger, const std::string& note, Timestamp at) {
    if (!history.entries.empty() && at < history.entries.back().score.computed_at)
        fail("CLOCK_REGRESSION", "reassessment timestamp precedes the latest score");
    ScoreHistory next = history;
    next.entries.push_back(ScoreEntry{compute_score(v, at), trigger, note});
    return next;
}

}  // namespace aivd::severity
