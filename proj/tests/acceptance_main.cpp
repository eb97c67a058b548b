// Acceptance harness: one pass/fail line per criterion, nonzero exit on
// any failure. Runs against the checked-in seed corpus and the installed
// CLI binary.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include <httplib.h>
#undef roundup  // sys/param.h macro leaks through httplib

#include "aivd/registry.hpp"
#include "aivd/service.hpp"
#include "cvss31_reference.hpp"
#include "generators.hpp"

namespace fs = std::filesystem;
using namespace aivd;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    expect(in.good(), "cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

catalog::Catalog seed_catalog() { return catalog::load_catalog_dir(AIVD_SEED_DIR "/catalog"); }

record::VulnerabilityRecord seed_record() {
    return record::parse_record_text(read_file(AIVD_SEED_DIR "/AI-CVE-2024-1234.json"));
}

const char* kSeedVector =
    "AIVSS:1.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:N/A:N/DP:N/MI:H/AE:N/DS:N";

// --- criterion 1 -----------------------------------------------------------

void criterion_table_iv() {
    auto rec = seed_record();
    auto cat = seed_catalog();
    auto report =
        record::validate_record(rec, ValidationProfile::Disclosure, cat, Date{2025, 1, 1});
    expect(report.valid(), "seed record fails the Disclosure profile");

    auto score = severity::compute_score(severity::parse_vector(kSeedVector));
    expect(score.value == 9.0, "canonical vector does not score exactly 9.0");
    expect(score.band == severity::Band::Critical, "canonical vector is not Critical");
    expect(rec.severity.current().score.value == 9.0, "stored seed score is not 9.0");
    expect(severity::render_vector(rec.severity.current().score.vector) == kSeedVector,
           "stored seed vector differs from the canonical vector");
}

// --- criterion 2 -----------------------------------------------------------

void criterion_cvss_compat() {
    const auto started = std::chrono::steady_clock::now();
    const char avs[] = {'N', 'A', 'L', 'P'}, acs[] = {'L', 'H'}, prs[] = {'N', 'L', 'H'},
               uis[] = {'N', 'R'}, ss[] = {'U', 'C'}, cias[] = {'H', 'L', 'N'};
    int checked = 0;
    for (char av : avs)
        for (char ac : acs)
            for (char pr : prs)
                for (char ui : uis)
                    for (char s : ss)
                        for (char c : cias)
                            for (char i : cias)
                                for (char a : cias) {
                                    cvss31::BaseVector ref{av, ac, pr, ui, s, c, i, a};
                                    auto ours = severity::compute_score(severity::parse_vector(
                                        std::string("AIVSS:1.0/") + cvss31::to_string(ref) +
                                        "/DP:N/MI:N/AE:N/DS:N"));
                                    expect(std::abs(ours.value - cvss31::base_score(ref)) <
                                               1e-12,
                                           "mismatch at " + cvss31::to_string(ref));
                                    ++checked;
                                }
    expect(checked == 2592, "expected 2592 vectors");
    auto spot = severity::compute_score(severity::parse_vector(
        "AIVSS:1.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H/DP:N/MI:N/AE:N/DS:N"));
    expect(spot.value == 9.8, "spot anchor is not 9.8");
    auto elapsed = std::chrono::steady_clock::now() - started;
    expect(elapsed < std::chrono::seconds(1), "enumeration exceeded one second");
}

// --- criterion 3 -----------------------------------------------------------

void criterion_scoring_properties() {
    gen::Rng rng(101);
    using severity::ImpactLevel;
    auto bump = [](ImpactLevel l) {
        return l == ImpactLevel::None ? ImpactLevel::Low : ImpactLevel::High;
    };

    int impact_pairs = 0, exploit_pairs = 0;
    while (impact_pairs < 1000 || exploit_pairs < 1000) {
        auto v = gen::severity_vector(rng);
        auto w = v;
        int which = gen::pick(rng, 11);
        if (which < 7) {
            // Impact-side bump; asserted on Unchanged scope only.
            if (v.scope == severity::Scope::Changed) continue;
            ImpactLevel* fields[] = {&w.confidentiality,      &w.integrity,
                                     &w.availability,         &w.data_poisoning,
                                     &w.model_inversion,      &w.adversarial_example,
                                     &w.distribution_shift};
            ImpactLevel cur = *fields[which];
            if (cur == ImpactLevel::High) continue;
            *fields[which] = bump(cur);
            expect(severity::compute_score(w, Timestamp{0}).value >=
                       severity::compute_score(v, Timestamp{0}).value,
                   "impact monotonicity violated");
            ++impact_pairs;
        } else {
            switch (which) {
                case 7:
                    if (v.av == severity::AttackVector::Network) continue;
                    w.av = severity::AttackVector::Network;
                    break;
                case 8:
                    if (v.ac == severity::AttackComplexity::Low) continue;
                    w.ac = severity::AttackComplexity::Low;
                    break;
                case 9:
                    if (v.pr == severity::PrivilegesRequired::None) continue;
                    w.pr = severity::PrivilegesRequired::None;
                    break;
                default:
                    if (v.ui == severity::UserInteraction::None) continue;
                    w.ui = severity::UserInteraction::None;
                    break;
            }
            expect(severity::compute_score(w, Timestamp{0}).value >=
                       severity::compute_score(v, Timestamp{0}).value,
                   "exploitability monotonicity violated");
            ++exploit_pairs;
        }

        auto stripped = v;
        stripped.supplemental = {};
        expect(severity::compute_score(v, Timestamp{0}).value ==
                   severity::compute_score(stripped, Timestamp{0}).value,
               "supplemental labels changed the score");
    }

    std::uniform_real_distribution<double> raw(0.0, 10.0);
    for (int i = 0; i < 10000; ++i) {
        double x = raw(rng);
        double r = severity::round_up_decimal(x);
        expect(r >= x - 5e-6 && r < x + 0.1 &&
                   std::abs(r * 10 - std::llround(r * 10)) < 1e-9,
               "roundup contract violated at " + std::to_string(x));
    }
}

// --- criterion 4 -----------------------------------------------------------

void criterion_round_trips() {
    auto cat = seed_catalog();
    std::vector<std::string> wids;
    for (const auto& [id, w] : cat.weaknesses) {
        (void)w;
        wids.push_back(id);
    }
    gen::Rng rng(103);
    for (int i = 0; i < 500; ++i) {
        auto r = gen::vulnerability_record(rng, wids, {"MIT-0001"});
        expect(record::parse_record(record::serialize_record(r)) == r,
               "record round trip failed");
    }
    for (int i = 0; i < 500; ++i) {
        auto v = gen::severity_vector(rng);
        expect(severity::parse_vector(severity::render_vector(v)) == v,
               "vector round trip failed");
    }
    for (int i = 0; i < 200; ++i) {
        auto d = gen::aibom_document(rng);
        expect(aibom::parse_aibom(aibom::serialize_aibom(d)) == d,
               "aibom round trip failed");
    }
    for (int i = 0; i < 200; ++i) {
        auto a = gen::aibom_document(rng);
        auto b = gen::aibom_document(rng);
        expect(aibom::patch_aibom(a, aibom::diff_aibom(a, b)) == b,
               "aibom diff/patch inverse failed");
    }
}

// --- criterion 5 -----------------------------------------------------------

std::map<record::AiCveId, std::string> snapshot(const registry::Registry& reg) {
    std::map<record::AiCveId, std::string> out;
    for (const auto& id : reg.ids()) out[id] = record::serialize_record_text(reg.get(id));
    return out;
}

void criterion_state_machine() {
    const LifecycleStatus all[] = {
        LifecycleStatus::Reported,  LifecycleStatus::Triaged,   LifecycleStatus::Confirmed,
        LifecycleStatus::Disclosed, LifecycleStatus::Mitigated, LifecycleStatus::Resolved,
        LifecycleStatus::Rejected,  LifecycleStatus::Deferred};
    gen::Rng rng(107);
    auto base = seed_record();
    base.status = LifecycleStatus::Reported;
    base.status_history.clear();

    for (int round = 0; round < 1000; ++round) {
        auto tick = std::make_shared<long>(1735689600);
        registry::Registry reg(seed_catalog(), [tick] { return Timestamp{(*tick)++}; });
        reg.register_cna({"test-cna", "Test Naming Authority", 1999, 9999});
        auto rec = base;
        rec.id = record::AiCveId{2024, 1 + round};
        reg.import_record(rec, "test-cna");

        LifecycleStatus current = LifecycleStatus::Reported;
        for (int step = 0; step < 6; ++step) {
            LifecycleStatus to = all[gen::pick(rng, 8)];
            bool allowed = transition_allowed(current, to);
            if (is_terminal(current)) expect(!allowed, "terminal state has an outgoing edge");
            try {
                reg.transition_status(*rec.id, to, "fuzz");
                expect(allowed, "non-edge transition accepted");
                current = to;
            } catch (const Error& e) {
                expect(e.code() == "ILLEGAL_TRANSITION", "unexpected error " + e.code());
                expect(!allowed, "edge transition rejected");
            }
            expect(reg.get(*rec.id).status == current, "state diverged");
        }
        auto twin = registry::replay(reg.cat(), reg.events());
        expect(snapshot(*twin) == snapshot(reg), "replay diverged from live state");
    }
}

// --- criterion 6 -----------------------------------------------------------

void criterion_catalog_fidelity() {
    auto cat = seed_catalog();
    const auto& w = catalog::get_weakness(cat, "AI-CWE-100");
    expect(w.name == "Inadequate Input Filtering", "AI-CWE-100 name mismatch");
    expect(w.modes_of_introduction ==
               std::vector{catalog::IntroductionMode::Inference},
           "AI-CWE-100 mode mismatch");
    expect(w.severity_band.low == severity::Band::High &&
               w.severity_band.high == severity::Band::Critical,
           "AI-CWE-100 severity band mismatch");
    expect(w.relationships.empty(), "AI-CWE-100 relationships not empty");

    auto mits = catalog::get_mitigations_for(cat, "AI-CWE-100");
    expect(mits.size() == 1, "expected exactly one mitigation for AI-CWE-100");
    expect(mits[0].name == "Adversarial Example Detection", "mitigation name mismatch");
    expect(mits[0].type == catalog::MitigationType::Proactive, "mitigation type mismatch");
    expect(mits[0].orientation == catalog::MitigationOrientation::Data,
           "mitigation orientation mismatch");
}

// --- criterion 7 -----------------------------------------------------------

void criterion_query_oracle() {
    auto cat = seed_catalog();
    std::vector<std::string> wids;
    for (const auto& [id, w] : cat.weaknesses) {
        (void)w;
        wids.push_back(id);
    }
    gen::Rng rng(109);
    registry::Registry reg(seed_catalog());
    reg.register_cna({"test-cna", "Test Naming Authority", 1999, 9999});
    std::vector<record::VulnerabilityRecord> corpus;
    for (int i = 0; i < 200; ++i) {
        auto r = gen::vulnerability_record(rng, wids, {"MIT-0001"});
        r.id = record::AiCveId{2020 + i % 5, 1000 + i};
        reg.import_record(r, "test-cna");
        corpus.push_back(reg.get(*r.id));
    }

    auto lower = [](std::string s) {
        for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };
    auto contains_ci = [&](const std::string& h, const std::string& n) {
        return lower(h).find(lower(n)) != std::string::npos;
    };
    auto oracle = [&](const registry::QueryFilter& f) {
        std::vector<record::VulnerabilityRecord> hits;
        for (const auto& r : corpus) {
            if (f.weakness &&
                !std::count(r.weaknesses.begin(), r.weaknesses.end(), *f.weakness))
                continue;
            if (f.vendor) {
                bool any = false;
                for (const auto& v : r.vendors) any = any || contains_ci(v, *f.vendor);
                if (!any) continue;
            }
            if (!f.status.empty() && !f.status.count(r.status)) continue;
            if (f.min_score || f.max_score) {
                if (r.severity.entries.empty()) continue;
                double s = r.severity.current().score.value;
                if (f.min_score && s < *f.min_score) continue;
                if (f.max_score && s > *f.max_score) continue;
            }
            if (f.from || f.to) {
                if (!r.report_date) continue;
                if (f.from && *r.report_date < *f.from) continue;
                if (f.to && *f.to < *r.report_date) continue;
            }
            if (f.text && !contains_ci(r.description, *f.text) &&
                !contains_ci(r.impact, *f.text))
                continue;
            hits.push_back(r);
        }
        std::stable_sort(hits.begin(), hits.end(),
                         [](const record::VulnerabilityRecord& a,
                            const record::VulnerabilityRecord& b) {
                             Date da = a.report_date.value_or(Date{});
                             Date db = b.report_date.value_or(Date{});
                             if (da != db) return db < da;
                             return *a.id < *b.id;
                         });
        std::vector<record::AiCveId> ids;
        std::size_t begin = static_cast<std::size_t>(f.page - 1) * f.page_size;
        for (std::size_t i = begin; i < hits.size() && i < begin + f.page_size; ++i)
            ids.push_back(*hits[i].id);
        return std::pair{hits.size(), ids};
    };

    const std::vector<std::string> needles = {"goog", "AWS", "model", "zzz"};
    for (int trial = 0; trial < 50; ++trial) {
        registry::QueryFilter f;
        if (gen::chance(rng, 0.4)) f.weakness = wids[gen::pick(rng, (int)wids.size())];
        if (gen::chance(rng, 0.4)) f.vendor = needles[gen::pick(rng, 4)];
        if (gen::chance(rng, 0.3)) f.status.insert(LifecycleStatus::Reported);
        if (gen::chance(rng, 0.3)) f.min_score = gen::pick(rng, 100) / 10.0;
        if (gen::chance(rng, 0.3))
            f.max_score = (f.min_score ? *f.min_score : 0.0) + gen::pick(rng, 50) / 10.0;
        if (gen::chance(rng, 0.3)) f.from = Date{2016 + gen::pick(rng, 6), 1, 1};
        if (gen::chance(rng, 0.3)) f.to = Date{2022 + gen::pick(rng, 4), 12, 31};
        if (gen::chance(rng, 0.3)) f.text = gen::word(rng);
        f.page = 1 + gen::pick(rng, 3);
        f.page_size = 1 + gen::pick(rng, 20);

        auto [want_total, want_ids] = oracle(f);
        auto page = reg.query(f);
        expect(page.total == want_total, "total mismatch at trial " + std::to_string(trial));
        std::vector<record::AiCveId> got;
        for (const auto& r : page.records) got.push_back(*r.id);
        expect(got == want_ids, "page mismatch at trial " + std::to_string(trial));
    }
}

// --- criterion 8 -----------------------------------------------------------

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("aivd-accept-" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& data_dir, const std::string& args) {
    std::string cmd = "AIVD_DATA_DIR='" + data_dir + "' '" AIVD_CLI_PATH "' " + args +
                      " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string capture_cli(const std::string& data_dir, const std::string& args) {
    std::string cmd = "AIVD_DATA_DIR='" + data_dir + "' '" AIVD_CLI_PATH "' " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    expect(pipe != nullptr, "cannot spawn CLI");
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    expect(pclose(pipe) == 0, "CLI failed: " + args + "\n" + out);
    return out;
}

void criterion_end_to_end() {
    TempDir store_a("store-a");
    TempDir store_b("store-b");
    TempDir exported("export");
    fs::remove_all(exported.path);  // export target must not pre-exist as a store
    fs::copy(AIVD_SEED_DIR "/catalog", store_a.path / "catalog",
             fs::copy_options::recursive);
    fs::copy_file(AIVD_SEED_DIR "/cnas.json", store_a.path / "cnas.json");

    // Disclosure-ready draft: the seed record with registry-owned fields
    // cleared.
    auto draft = seed_record();
    draft.id.reset();
    draft.status = LifecycleStatus::Reported;
    draft.status_history.clear();
    const auto draft_path = store_a.path / "draft.json";
    std::ofstream(draft_path) << record::serialize_record_text(draft);

    const std::string dir = store_a.path.string();
    std::string id = capture_cli(dir, "submit '" + draft_path.string() + "' --cna test-cna");
    while (!id.empty() && (id.back() == '\n' || id.back() == '\r')) id.pop_back();
    expect(record::AiCveId::looks_valid(id), "submit did not print a record id: " + id);

    expect(run_cli(dir, "status " + id + " Triaged --actor cli") == 0, "Triaged failed");
    expect(run_cli(dir, "status " + id + " Confirmed --actor cli") == 0, "Confirmed failed");
    expect(run_cli(dir, "status " + id + " Disclosed --actor cli") == 0, "Disclosed failed");
    expect(run_cli(dir, "rescore " + id +
                            " --vector "
                            "AIVSS:1.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:N/A:N/DP:N/MI:L/AE:N/"
                            "DS:N --trigger ModelUpdate --actor cli") == 0,
           "rescore failed");
    expect(run_cli(dir, "export '" + exported.path.string() + "'") == 0, "export failed");

    std::string shown = capture_cli(dir, "show " + id + " --json");

    // API GET over the same store must serve the identical bytes.
    auto reg = registry::open_store(dir);
    service::Service svc(*reg);
    int port = svc.server().bind_to_any_port("127.0.0.1");
    expect(port > 0, "cannot bind API port");
    std::thread worker([&svc] { svc.server().listen_after_bind(); });
    svc.server().wait_until_ready();
    std::string api_body;
    {
        httplib::Client cli("127.0.0.1", port);
        auto res = cli.Get("/api/v1/records/" + id);
        expect(res && res->status == 200, "API GET failed");
        api_body = res->body;
    }
    svc.stop();
    worker.join();
    expect(api_body == shown, "API body differs from CLI show --json");

    // Import into an empty second store and compare full state.
    expect(run_cli(store_b.path.string(), "import '" + exported.path.string() + "'") == 0,
           "import failed");
    auto b = registry::open_store(store_b.path.string());
    expect(snapshot(*reg) == snapshot(*b), "imported store state differs");
    expect(reg->events().size() == b->events().size(), "imported event log differs");
}

}  // namespace

int main() {
    const std::array<std::pair<const char*, std::function<void()>>, 8> criteria = {{
        {"seed record reproduction (9.0 Critical, Disclosure-valid)", criterion_table_iv},
        {"CVSS v3.1 compatibility over all 2592 base vectors", criterion_cvss_compat},
        {"scoring monotonicity, supplemental independence, roundup contract",
         criterion_scoring_properties},
        {"serialization round trips (records, vectors, AIBOMs, diff/patch)",
         criterion_round_trips},
        {"lifecycle state-machine fuzz with event-log replay", criterion_state_machine},
        {"catalog fidelity (AI-CWE-100 and its mitigation)", criterion_catalog_fidelity},
        {"query equals the linear-scan oracle", criterion_query_oracle},
        {"end-to-end CLI flow with API byte-equality and import", criterion_end_to_end},
    }};

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i].second();
            std::cout << "PASS criterion " << i + 1 << ": " << criteria[i].first << "\n";
        } catch (const std::exception& e) {
            std::cout << "FAIL criterion " << i + 1 << ": " << criteria[i].first << " — "
                      << e.what() << "\n";
            ++failed;
        }
    }
    return failed == 0 ? 0 : 1;
}
