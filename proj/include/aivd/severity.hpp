#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aivd/time.hpp"

namespace aivd::severity {

enum class AttackVector { Network, Adjacent, Local, Physical };
enum class AttackComplexity { Low, High };
enum class PrivilegesRequired { None, Low, High };
enum class UserInteraction { None, Required };
enum class Scope { Unchanged, Changed };

// Shared three-step ladder for the CIA impact metrics and the AI impact
// metrics (data-poisoning susceptibility, model-inversion exposure,
// adversarial-example sensitivity, distribution-shift fragility).
enum class ImpactLevel { None, Low, High };

enum class SafetyLabel { Present, Negligible };
enum class AutomatableLabel { Yes, No };
enum class RecoveryLabel { Automatic, User, Irrecoverable };
enum class ValueDensityLabel { Diffuse, Concentrated };

// Non-scoring contextual labels. Never enter the numeric formula.
struct SupplementalLabels {
    std::optional<SafetyLabel> safety;
    std::optional<AutomatableLabel> automatable;
    std::optional<RecoveryLabel> recovery;
    std::optional<ValueDensityLabel> value_density;

    bool operator==(const SupplementalLabels&) const = default;
};

struct SeverityVector {
    AttackVector av = AttackVector::Network;
    AttackComplexity ac = AttackComplexity::Low;
    PrivilegesRequired pr = PrivilegesRequired::None;
    UserInteraction ui = UserInteraction::None;
    Scope scope = Scope::Unchanged;
    ImpactLevel confidentiality = ImpactLevel::None;
    ImpactLevel integrity = ImpactLevel::None;
    ImpactLevel availability = ImpactLevel::None;
    ImpactLevel data_poisoning = ImpactLevel::None;
    ImpactLevel model_inversion = ImpactLevel::None;
    ImpactLevel adversarial_example = ImpactLevel::None;
    ImpactLevel distribution_shift = ImpactLevel::None;
    SupplementalLabels supplemental;

    bool operator==(const SeverityVector&) const = default;
};

enum class Band { None, Low, Medium, High, Critical };

std::string band_name(Band b);
Band band_from_name(const std::string& name);  // throws BAD_BAND

struct SeverityScore {
    double value = 0.0;  // one fractional digit, in [0.0, 10.0]
    Band band = Band::None;
    SeverityVector vector;
    Timestamp computed_at;

    bool operator==(const SeverityScore&) const = default;
};

enum class RescoreTrigger { Initial, ModelUpdate, DataDrift, Scheduled, Manual };

std::string trigger_name(RescoreTrigger t);
RescoreTrigger trigger_from_name(const std::string& name);  // throws BAD_TRIGGER

// Append-only reassessment trail; the current score is the last entry.
struct ScoreEntry {
    SeverityScore score;
    RescoreTrigger trigger = RescoreTrigger::Initial;
    std::string note;

    bool operator==(const ScoreEntry&) const = default;
};

struct ScoreHistory {
    std::vector<ScoreEntry> entries;

    bool empty() const { return entries.empty(); }
    const ScoreEntry& current() const { return entries.back(); }

    bool operator==(const ScoreHistory&) const = default;
};

enum class Requirement { Low, Medium, High };  // multipliers 0.5 / 1.0 / 1.5

// Environmental adjustment: per-metric overrides plus requirement
// multipliers. `air` applies uniformly to all four AI metrics.
struct EnvironmentalContext {
    std::optional<AttackVector> av;
    std::optional<AttackComplexity> ac;
    std::optional<PrivilegesRequired> pr;
    std::optional<UserInteraction> ui;
    std::optional<Scope> scope;
    std::optional<ImpactLevel> confidentiality;
    std::optional<ImpactLevel> integrity;
    std::optional<ImpactLevel> availability;
    std::optional<ImpactLevel> data_poisoning;
    std::optional<ImpactLevel> model_inversion;
    std::optional<ImpactLevel> adversarial_example;
    std::optional<ImpactLevel> distribution_shift;
    Requirement cr = Requirement::Medium;
    Requirement ir = Requirement::Medium;
    Requirement ar = Requirement::Medium;
    Requirement air = Requirement::Medium;
};

struct ScoringParams {
    // Coupling between the CIA impact sub-score and the AI impact
    // sub-score. At 0 the AI group is inert and scores coincide with the
    // classic base formula.
    double ai_coupling = 0.95;
};

// Vector string grammar: "AIVSS:1.0" prefix, then /-separated
// METRIC:VALUE pairs. All 12 scoring metrics required exactly once,
// supplemental metrics optional, order-insensitive after the prefix.
SeverityVector parse_vector(const std::string& text);
// Canonical rendering: AV AC PR UI S C I A DP MI AE DS then any
// supplemental labels in SF AU RE VD order.
std::string render_vector(const SeverityVector& v);

// Smallest one-decimal value >= x, computed on scaled integers.
double round_up_decimal(double x);

Band rating(double value);  // throws OUT_OF_RANGE

SeverityScore compute_score(const SeverityVector& v, Timestamp at = Timestamp::now(),
                            ScoringParams params = {});

SeverityScore apply_environmental(const SeverityVector& v, const EnvironmentalContext& env,
                                  Timestamp at = Timestamp::now(), ScoringParams params = {});

ScoreHistory reassess(const ScoreHistory& history, const SeverityVector& v,
                      RescoreTrigger trigger, const std::string& note,
                      Timestamp at = Timestamp::now());

}  // namespace aivd::severity
