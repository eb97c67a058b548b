// Regenerates the checked-in seed corpus under data/seed/. Run from the
// repository root after changing any seed content below; output files are
// written in canonical form so byte-level golden tests stay stable.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "aivd/catalog.hpp"
#include "aivd/record.hpp"
#include "aivd/registry.hpp"

namespace fs = std::filesystem;
using namespace aivd;

namespace {

void write(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::trunc);
    out << text;
    if (!out) {
        std::cerr << "cannot write " << p << "\n";
        std::exit(1);
    }
}

catalog::Catalog build_catalog() {
    using namespace catalog;
    Catalog c;

    AiCweEntry filtering;
    filtering.id = "AI-CWE-100";
    filtering.name = "Inadequate Input Filtering";
    filtering.weakness_class = WeaknessClass::DataHandling;
    filtering.description =
        "The data handling processes lack robust filtering and normalization capabilities, "
        "leading to susceptibility to noise and perturbations which compromise data integrity.";
    filtering.examples = {
        "A malicious actor can add carefully designed perturbation to the input data to "
        "mislead the AI system"};
    filtering.severity_band = {severity::Band::High, severity::Band::Critical};
    filtering.common_consequence =
        "Affects the integrity of the model's output without manipulating the model itself.";
    filtering.modes_of_introduction = {IntroductionMode::Inference};
    filtering.potential_mitigations = {"MIT-0001"};
    filtering.references = {
        {"Adversarial examples: attacks and defenses for deep learning",
         "https://ieeexplore.ieee.org/document/9010939"},
        {"Countering adversarial images using input transformations",
         "https://openreview.net/pdf?id=SyJ7ClWCb"}};
    c.weaknesses[filtering.id] = filtering;

    AiCweEntry validation;
    validation.id = "AI-CWE-200";
    validation.name = "Insufficient Validation Mechanism";
    validation.weakness_class = WeaknessClass::ValidationMechanism;
    validation.description =
        "Insufficient validation mechanisms allow malicious samples to bypass security checks "
        "and infiltrate the system.";
    validation.examples = {
        "A poisoned training sample passes ingestion checks and enters the training corpus"};
    validation.severity_band = {severity::Band::Medium, severity::Band::Critical};
    validation.common_consequence =
        "Malicious inputs reach components that assume pre-screened data.";
    validation.modes_of_introduction = {IntroductionMode::DataCollection,
                                        IntroductionMode::Training};
    validation.seed = true;
    c.weaknesses[validation.id] = validation;

    AiCweEntry learning;
    learning.id = "AI-CWE-300";
    learning.name = "Non-Resilient Learning Algorithm";
    learning.weakness_class = WeaknessClass::LearningAlgorithm;
    learning.description =
        "The learning algorithms are vulnerable to perturbations due to inadequate resilience "
        "and adaptability in handling crafted inputs designed to mislead or corrupt the "
        "learning process.";
    learning.examples = {
        "Gradient-aligned perturbations steer the optimizer toward an attacker-chosen decision "
        "boundary"};
    learning.severity_band = {severity::Band::Medium, severity::Band::High};
    learning.common_consequence =
        "Degraded or attacker-influenced model behavior after training on crafted inputs.";
    learning.modes_of_introduction = {IntroductionMode::Training, IntroductionMode::FineTuning};
    learning.seed = true;
    c.weaknesses[learning.id] = learning;

    AiCweEntry privacy;
    privacy.id = "AI-CWE-400";
    privacy.name = "Lack of Appropriate Privacy Safeguard";
    privacy.weakness_class = WeaknessClass::PrivacySafeguard;
    privacy.description =
        "Privacy safeguards are deficient or absent, exposing the data to unauthorized access "
        "and manipulation due to inadequate encryption, anonymization, or access control "
        "configurations.";
    privacy.examples = {
        "Full prediction vectors let an attacker infer whether a data point was part of the "
        "training set"};
    privacy.severity_band = {severity::Band::High, severity::Band::Critical};
    privacy.common_consequence =
        "Exposure of individual training-data entries and other confidential information.";
    privacy.modes_of_introduction = {IntroductionMode::Inference, IntroductionMode::Deployment};
    privacy.seed = true;
    c.weaknesses[privacy.id] = privacy;

    MitigationEntry detect;
    detect.id = "MIT-0001";
    detect.name = "Adversarial Example Detection";
    detect.description =
        "The technique employs distance-based anomaly detection to identify adversarial "
        "examples using a subset of trusted data points. It divides these data points into two "
        "groups and trains a distance-based outlier detector for each group. In training, it "
        "establishes a pair of thresholds that are used to detect outliers. This approach "
        "helps in distinguishing between legitimate and adversarial inputs by analyzing the "
        "distances from these trusted points.";
    detect.effect = "Removes adversarial examples";
    detect.type = MitigationType::Proactive;
    detect.tactic = "Adversarial Detection";
    detect.orientation = MitigationOrientation::Data;
    detect.target_weaknesses = {"AI-CWE-100"};
    detect.target_attacks = {"Poisoning Attack"};
    detect.pros = {
        "Computationally efficient for large datasets and data with a large number of "
        "features"};
    detect.cons = {"Not effective against label flipping poisoning attacks"};
    detect.references = {
        {"Detection of adversarial training examples in poisoning attacks through anomaly "
         "detection",
         "https://arxiv.org/pdf/1802.03041"}};
    c.mitigations[detect.id] = detect;

    return c;
}

aibom::AibomDocument build_aibom() {
    aibom::AibomDocument d;
    d.meta.creator = "Facebook (Meta)";
    d.meta.certification = {"Google Cloud Certification", "AWS Certification"};
    d.meta.release_date = Date{2017, 5, 22};
    d.model.availability = aibom::ModelAvailability::Restricted;
    d.model.foundation_model = "CNN";
    d.model.software_requirements = {"Python3"};
    d.model.dependencies = {{"Torch7", ""}};
    d.data.source = "NIST (MNIST)";
    d.data.collection_method = "Handwritten digits collected from high school students";
    d.data.preprocessing = {"Normalization", "Similarizing training and test set"};
    d.data.governance = "Following 2007 Free Software Foundation, Inc. guidelines";
    d.data.annotation = "High school students & United States Census Bureau";
    d.consideration.ethical = "Adheres to AWS and Google Cloud Code of Conduct";
    d.consideration.environmental = "Influenced by cloud machines in use";
    d.usage.intended = {"Classification of handwritten digit images"};
    return d;
}

record::VulnerabilityRecord build_record() {
    using namespace record;
    VulnerabilityRecord r;
    r.id = AiCveId{2024, 1234};
    r.ai_system.name = "Google Prediction API & Amazon ML";
    r.ai_system.type = "Neural Networks (CNN)";
    r.ai_system.aibom = build_aibom();
    r.weaknesses = {"AI-CWE-400"};
    r.root_causes = {"Revealing entire prediction vector score",
                     "Insufficient coarsening of the prediction vector"};
    r.impact =
        "Expose individual data entries used in training, leading to privacy violations and "
        "the risk of leaking confidential information.";
    r.severity = severity::reassess(
        {},
        severity::parse_vector(
            "AIVSS:1.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:N/A:N/DP:N/MI:H/AE:N/DS:N"),
        severity::RescoreTrigger::Initial, "initial assessment",
        Timestamp::parse("2024-03-25T09:00:00Z"));
    r.affected_products = {
        {"Google Cloud", ProductIdentifier::parse("2024/google/cloud/ModelV01")},
        {"Amazon Web Services", ProductIdentifier::parse("2024/AWS/ModelV01")}};
    ExploitabilityProfile x;
    x.technical_complexity = TechnicalComplexity::Medium;
    x.privilege_level = PrivilegeLevel::ModelQueryAccess;
    x.required_actions = {
        "Collect data similar to the target model's training data and train shadow models "
        "that mimic its behavior",
        "Train an attack model on the shadow models' in/out classifications",
        "Apply the attack model to the target's prediction outputs to infer membership"};
    x.access_requirements =
        "(Partial) access to the training data distribution and repeated query access to the "
        "target model; the model must expose full prediction vectors.";
    r.exploitability = x;
    r.description =
        "The malicious actor collects data similar to the target model's training data to "
        "train multiple shadow models that mimic the target's behavior. These models classify "
        "points as \"in\" (used) or \"out\" based on outputs. An attack model is trained on "
        "these classifications to distinguish membership, then applied to the target's "
        "outputs to infer whether specific data points were in its training set, potentially "
        "exposing sensitive information.";
    r.mitigations = {
        {"", "Restricting the prediction vector to top-K classes: limits outputs to the top-K "
             "most probable classes, reducing information and making it harder to infer "
             "whether a data point was in the training set."},
        {"", "Coarsening prediction precision: lowers output granularity (e.g., via rounding "
             "or binning), obscuring how closely a data point matches the model and reducing "
             "inference accuracy."},
        {"", "Differential privacy: adds controlled noise to data or parameters during "
             "training so outputs remain nearly unchanged with or without any individual "
             "record, protecting against membership inference."}};
    r.references = {
        {"Membership inference attack and coarsening precision of the prediction scores",
         "https://ieeexplore.ieee.org/document/7958568"},
        {"Gaussian differential privacy",
         "https://arxiv.org/abs/2403.00278"},
        {"Restricting prediction to top-k classes",
         "https://arxiv.org/abs/2307.01610"}};
    r.report_date = Date{2024, 3, 25};
    r.reported_by = "R. Shokri et al.";
    r.vendors = {"Google Cloud (Alphabet)", "AWS (Amazon)"};

    r.status = LifecycleStatus::Disclosed;
    auto stamp = [](const char* t) { return Timestamp::parse(t); };
    r.status_history = {
        {LifecycleStatus::Reported, LifecycleStatus::Triaged, "seed-cna",
         stamp("2024-03-26T10:00:00Z"), "triage complete"},
        {LifecycleStatus::Triaged, LifecycleStatus::Confirmed, "seed-cna",
         stamp("2024-03-28T10:00:00Z"), "reproduced against shadow models"},
        {LifecycleStatus::Confirmed, LifecycleStatus::Disclosed, "seed-cna",
         stamp("2024-04-02T10:00:00Z"), "coordinated disclosure"}};
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path out = argc > 1 ? argv[1] : "data/seed";

    auto cat = build_catalog();
    Json weaknesses = Json::array();
    for (const auto& [id, w] : cat.weaknesses) {
        (void)id;
        weaknesses.push_back(catalog::serialize_weakness(w));
    }
    write(out / "catalog" / "weaknesses.json", dump_canonical(weaknesses));
    Json mitigations = Json::array();
    for (const auto& [id, m] : cat.mitigations) {
        (void)id;
        mitigations.push_back(catalog::serialize_mitigation(m));
    }
    write(out / "catalog" / "mitigations.json", dump_canonical(mitigations));

    auto rec = build_record();
    write(out / (rec.id->to_string() + ".json"), record::serialize_record_text(rec));
    write(out / "aibom" / "seed-model.json",
          dump_canonical(aibom::serialize_aibom(*rec.ai_system.aibom)));

    Json cnas = Json::array(
        {Json{{"cna_id", "seed-cna"},
              {"name", "Seed Naming Authority"},
              {"allowed_years", Json::array({1999, 9999})}},
         Json{{"cna_id", "test-cna"},
              {"name", "Test Naming Authority"},
              {"allowed_years", Json::array({1999, 9999})}}});
    write(out / "cnas.json", dump_canonical(cnas));

    registry::RegistryEvent e;
    e.sequence = 1;
    e.kind = registry::EventKind::Submitted;
    e.record_id = *rec.id;
    e.actor = "seed-cna";
    e.timestamp = Timestamp::parse("2024-04-02T10:00:00Z");
    e.payload = Json{{"record", record::serialize_record(rec)}};
    write(out / "events.ndjson", registry::serialize_event(e).dump() + "\n");

    std::cout << "seed corpus written to " << out << "\n";
    return 0;
}
