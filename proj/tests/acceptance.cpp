// Acceptance gate: one test case per shipping criterion, each printing a
// single ACCEPTANCE line so a log scan shows the verdict per criterion.
// Everything runs offline against scripted fixtures except c8, which is
// opt-in via SELCOT_LIVE_ENDPOINT.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "parser_corpus.hpp"
#include "rational_oracle.hpp"
#include "reference_rows.hpp"
#include "selcot/ablation.hpp"
#include "selcot/backend.hpp"
#include "selcot/engine.hpp"
#include "selcot/errors.hpp"
#include "selcot/ingest.hpp"
#include "selcot/metrics.hpp"
#include "test_paths.hpp"

using namespace selcot;
using ojson = nlohmann::ordered_json;

namespace {

void report(const char* criterion, const char* verdict, const std::string& detail) {
    std::printf("ACCEPTANCE %s: %s (%s)\n", criterion, verdict, detail.c_str());
    std::fflush(stdout);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(static_cast<bool>(in), "cannot open " << path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = "\"" + testsupport::cli_path() + "\" " + args;
    return std::system(cmd.c_str());
}

struct FixtureBuilder {
    std::vector<ojson> entries;
    void add(const std::string& key, const std::string& completion, long long ptok,
             long long ctok, double latency) {
        entries.push_back(ojson{{"key", key},
                                {"completion_text", completion},
                                {"prompt_tokens", ptok},
                                {"completion_tokens", ctok},
                                {"latency_seconds", latency}});
    }
    std::string write(const testsupport::TempDir& tmp, const std::string& name) const {
        const auto path = tmp.str(name);
        std::ofstream out(path, std::ios::binary);
        for (const auto& e : entries) out << e.dump() << "\n";
        return path;
    }
};

std::unique_ptr<Backend> mock_backend(const std::string& fixture_path) {
    BackendSpec spec;
    spec.kind = BackendKind::MockFixture;
    spec.fixture_path = fixture_path;
    return make_backend(spec);
}

}  // namespace

TEST_CASE("c1 drop formula reproduces every bundled token and time reduction") {
    int ok = 0;
    for (const auto& row : refdata::kReferenceRows) {
        CAPTURE(row.dataset);
        CAPTURE(row.model);
        const double tok = drop_pct(static_cast<double>(row.baseline_tokens),
                                    static_cast<double>(row.selective_tokens));
        const double tim = drop_pct(row.baseline_time_s, row.selective_time_s);
        CHECK(std::fabs(tok - row.tokens_drop_pct) <= 1e-4);
        CHECK(std::fabs(tim - row.time_drop_pct) <= 1e-4);
        ok += (std::fabs(tok - row.tokens_drop_pct) <= 1e-4) ? 1 : 0;
        ok += (std::fabs(tim - row.time_drop_pct) <= 1e-4) ? 1 : 0;
    }
    report("c1", ok == 16 ? "PASS" : "FAIL",
           std::to_string(ok) + "/16 drops within ±0.0001");
}

TEST_CASE("c2 accuracy drops land within the stated rounding tolerance") {
    // The drops were published alongside accuracies rounded to 4 decimal
    // places; recomputing from those rounded accuracies must come back
    // within ±0.005 percentage points.
    int ok = 0;
    std::string worst;
    double worst_residual = 0.0;
    for (const auto& row : refdata::kReferenceRows) {
        CAPTURE(row.dataset);
        CAPTURE(row.model);
        const double d = drop_pct(row.baseline_accuracy, row.selective_accuracy);
        const double residual = std::fabs(d - row.accuracy_drop_pct);
        CHECK(residual <= 5e-3);
        if (residual <= 5e-3) {
            ++ok;
        } else if (residual > worst_residual) {
            worst_residual = residual;
            worst = std::string(row.dataset) + "/" + row.model;
        }
    }
    char detail[256];
    if (ok == 8) {
        std::snprintf(detail, sizeof(detail), "8/8 drops within ±0.005pp");
    } else {
        std::snprintf(detail, sizeof(detail),
                      "%d/8 within ±0.005pp; worst residual %.6fpp at %s — the published "
                      "drops come from unrounded accuracies, so 4-decimal inputs cannot always "
                      "land inside the stated tolerance",
                      ok, worst_residual, worst.c_str());
    }
    report("c2", ok == 8 ? "PASS" : "FAIL", detail);
}

TEST_CASE("c3 routing state machine: call counts, default decision, token conservation") {
    // 50 synthetic items cycling through five completion patterns:
    //   0 Direct marker + gold answer        → correct
    //   1 Reason marker + rationale + gold   → correct
    //   2 Reason marker, no extractable answer → parse failure
    //   3 no marker at all (decision defaults to Reason) + wrong answer
    //   4 Direct marker + wrong answer
    testsupport::TempDir tmp;
    const std::string kGold = "ABCD";
    const std::string kWrong = "BCDA";

    std::vector<QAItem> items;
    FixtureBuilder fx;
    for (int i = 0; i < 50; ++i) {
        char id[8];
        std::snprintf(id, sizeof(id), "r%02d", i);
        QAItem it;
        it.id = id;
        it.dataset = Dataset::MedQAUSMLE;
        it.question = "Routing fixture question " + std::to_string(i) + "?";
        it.options = {{"A", "choice a"}, {"B", "choice b"}, {"C", "choice c"}, {"D", "choice d"}};
        it.gold = kGold[i % 4];
        items.push_back(it);

        const std::string gold(1, kGold[i % 4]);
        const std::string wrong(1, kWrong[i % 4]);
        std::string single, decision, answer;
        switch (i % 5) {
            case 0:
                single = "DECISION: DIRECT\nANSWER: " + gold;
                decision = "DECISION: DIRECT";
                answer = "ANSWER: " + gold;
                break;
            case 1:
                single = "DECISION: REASONING\nstep one holds\nANSWER: " + gold;
                decision = "DECISION: REASONING";
                answer = "step one holds\nANSWER: " + gold;
                break;
            case 2:
                single = "DECISION: REASONING\nrambling with no usable conclusion";
                decision = "DECISION: REASONING";
                answer = "rambling with no usable conclusion";
                break;
            case 3:
                single = "unsure how to weigh this\nANSWER: " + wrong;
                decision = "unsure how to weigh this";
                answer = "ANSWER: " + wrong;
                break;
            case 4:
                single = "DECISION: DIRECT\nANSWER: " + wrong;
                decision = "DECISION: DIRECT";
                answer = "ANSWER: " + wrong;
                break;
        }
        fx.add(std::string(id) + ":single", single, 40 + i, 100 + i, 0.001);
        fx.add(std::string(id) + ":decision", decision, 30 + i, 3, 0.001);
        fx.add(std::string(id) + ":answer", answer, 35 + i, 50 + i, 0.001);
    }
    const auto backend = mock_backend(fx.write(tmp, "fixture.jsonl"));

    bool all_ok = true;
    for (const SelectiveMode mode : {SelectiveMode::SingleCall, SelectiveMode::TwoCall}) {
        const bool two = mode == SelectiveMode::TwoCall;
        CAPTURE(two);
        RunConfig config;
        config.model_name = "demo-model";
        config.selective_mode = mode;
        config.concurrency = 4;

        const auto out = run_dataset(items, PromptStrategy::selective(), *backend, config);
        REQUIRE(out.results.size() == 50);

        // Exactly 1 call per item in single mode, exactly 2 in two-call.
        const std::size_t expected_records = two ? 100 : 50;
        CHECK(out.records.size() == expected_records);
        all_ok &= (out.records.size() == expected_records);

        std::map<std::string, long long> record_tokens;
        std::map<std::string, int> record_calls;
        for (const auto& rec : out.records) {
            record_tokens[rec.item_id] += rec.completion_tokens;
            record_calls[rec.item_id] += 1;
        }

        long long run_total = 0;
        long long parse_failures = 0;
        for (int i = 0; i < 50; ++i) {
            const auto& r = out.results[i];
            CAPTURE(r.item_id);
            CHECK(record_calls[r.item_id] == (two ? 2 : 1));
            // Token conservation, per item and in aggregate.
            CHECK(record_tokens[r.item_id] == r.total_completion_tokens);
            all_ok &= (record_tokens[r.item_id] == r.total_completion_tokens);
            run_total += r.total_completion_tokens;
            parse_failures += r.parse_failure ? 1 : 0;

            REQUIRE(r.decision.has_value());
            REQUIRE(r.decision_source.has_value());
            switch (i % 5) {
                case 0:
                    CHECK(*r.decision == Decision::Direct);
                    CHECK(r.correct);
                    break;
                case 1:
                    CHECK(*r.decision == Decision::Reason);
                    CHECK(r.correct);
                    break;
                case 2:
                    CHECK(*r.decision == Decision::Reason);
                    CHECK(r.parse_failure);
                    CHECK_FALSE(r.correct);
                    break;
                case 3:
                    // Unparseable decision must default to Reason.
                    CHECK(*r.decision == Decision::Reason);
                    CHECK(*r.decision_source == DecisionSource::DefaultOnParseFailure);
                    CHECK_FALSE(r.correct);
                    break;
                case 4:
                    CHECK(*r.decision == Decision::Direct);
                    CHECK_FALSE(r.correct);
                    break;
            }
            all_ok &= (*r.decision == (i % 5 == 0 || i % 5 == 4 ? Decision::Direct
                                                                : Decision::Reason));
        }

        long long record_total = 0;
        for (const auto& [id, t] : record_tokens) record_total += t;
        const auto summary = summarize(out.results, {"medqa-usmle", "demo-model"});
        CHECK(summary.total_tokens == run_total);
        CHECK(summary.total_tokens == record_total);
        CHECK(summary.n_correct == 20);
        CHECK(parse_failures == 10);
        CHECK(out.n_parse_failures == 10);
        CHECK(out.n_backend_failures == 0);
        all_ok &= (summary.total_tokens == run_total) && (summary.total_tokens == record_total) &&
                  (summary.n_correct == 20) && (out.n_parse_failures == 10);
    }
    report("c3", all_ok ? "PASS" : "FAIL",
           "50 items x {single, two-call}: call counts exact, Reason default on unparseable "
           "decisions, token totals conserved");
}

TEST_CASE("c4 parser corpus: every hand-derived case extracts as stated") {
    const auto answers = corpus::answer_cases();
    const auto decisions = corpus::decision_cases();
    int failures = 0;
    for (const auto& c : answers) {
        CAPTURE(c.name);
        const auto got = extract_answer(c.text, c.allowed);
        CHECK(got == c.expected);
        failures += (got == c.expected) ? 0 : 1;
    }
    for (const auto& c : decisions) {
        CAPTURE(c.name);
        const auto parsed = extract_decision(c.text);
        const bool ok = parsed.decision == c.decision && parsed.source == c.source &&
                        std::string(c.text.substr(parsed.remainder_offset)) == c.remainder;
        CHECK(ok);
        failures += ok ? 0 : 1;
    }
    const std::size_t total = answers.size() + decisions.size();
    CHECK(total >= 40);
    report("c4", (failures == 0 && total >= 40) ? "PASS" : "FAIL",
           std::to_string(total) + " cases (" + std::to_string(answers.size()) + " answer, " +
               std::to_string(decisions.size()) + " decision), " + std::to_string(failures) +
               " failing");
}

TEST_CASE("c5 quadratic fit matches the exact-rational oracle and its exact special cases") {
    bool all_ok = true;

    // 100 randomized small instances against exact rational least squares.
    {
        std::mt19937_64 rng(20260815);
        std::uniform_int_distribution<int> n_dist(3, 10);
        std::uniform_int_distribution<int> grid(0, 20);
        std::uniform_real_distribution<double> a_mag(1e-6, 5e-6);
        std::uniform_real_distribution<double> b_mag(1e-3, 5e-3);
        std::uniform_real_distribution<double> c_dist(0.3, 0.7);
        std::uniform_real_distribution<double> noise(-0.02, 0.02);
        std::bernoulli_distribution coin(0.5);

        for (int rep = 0; rep < 100; ++rep) {
            CAPTURE(rep);
            const int n = n_dist(rng);
            std::set<double> xs;
            while (static_cast<int>(xs.size()) < n) xs.insert(100.0 + 25.0 * grid(rng));
            const double a = (coin(rng) ? 1 : -1) * a_mag(rng);
            const double b = (coin(rng) ? 1 : -1) * b_mag(rng);
            const double c = c_dist(rng);
            std::vector<std::pair<double, double>> pts;
            for (const double x : xs) pts.emplace_back(x, (a * x + b) * x + c + noise(rng));

            const auto ours = fit_quadratic(pts);
            const auto exact = oracle::fit_exact(pts);
            REQUIRE(exact.has_value());
            const bool ok = oracle::close_to(ours.a, exact->a, 1e-9) &&
                            oracle::close_to(ours.b, exact->b, 1e-9) &&
                            oracle::close_to(ours.c, exact->c, 1e-9) &&
                            oracle::close_to(ours.rss, exact->rss, 1e-9);
            CHECK(ok);
            all_ok &= ok;
        }
    }

    // Exact parabola: exact coefficients and rss identically zero.
    {
        const std::vector<std::pair<double, double>> pts = {
            {100.0, 2.0 * 100 * 100 - 3.0 * 100 + 5.0},
            {350.0, 2.0 * 350 * 350 - 3.0 * 350 + 5.0},
            {600.0, 2.0 * 600 * 600 - 3.0 * 600 + 5.0},
        };
        const auto f = fit_quadratic(pts);
        CHECK(f.a == 2.0);
        CHECK(f.b == -3.0);
        CHECK(f.c == 5.0);
        CHECK(f.rss == 0.0);
        REQUIRE(f.x_star.has_value());
        CHECK(*f.x_star == 0.75);
        all_ok &= (f.a == 2.0 && f.b == -3.0 && f.c == 5.0 && f.rss == 0.0);

        // Scaling covariance, exact for a power-of-two factor: doubling x
        // must map (a, b, c, x*) to (a/4, b/2, c, 2·x*).
        std::vector<std::pair<double, double>> doubled;
        for (const auto& [x, y] : pts) doubled.emplace_back(2.0 * x, y);
        const auto g = fit_quadratic(doubled);
        CHECK(g.a == 0.5);
        CHECK(g.b == -1.5);
        CHECK(g.c == 5.0);
        REQUIRE(g.x_star.has_value());
        CHECK(*g.x_star == 1.5);
        all_ok &= (g.a == 0.5 && g.b == -1.5 && g.c == 5.0 && g.x_star && *g.x_star == 1.5);
    }

    // Constant data: no quadratic term, no vertex.
    {
        const auto f = fit_quadratic({{100.0, 0.5}, {200.0, 0.5}, {300.0, 0.5}, {400.0, 0.5}});
        CHECK(f.a == 0.0);
        CHECK_FALSE(f.x_star.has_value());
        all_ok &= (f.a == 0.0 && !f.x_star.has_value());
    }

    report("c5", all_ok ? "PASS" : "FAIL",
           "100 randomized instances within 1e-9 of the exact-rational solver; exact parabola, "
           "scaling covariance and constant-data cases exact");
}

TEST_CASE("c6 packaged fixture reproduces byte-identical outputs across runs and concurrency") {
    const std::string items = testsupport::data_path("e2e20/items.jsonl");
    const std::string fixture = testsupport::data_path("e2e20/fixture.jsonl");
    testsupport::TempDir tmp;

    const std::vector<std::string> kFiles = {"cot.results.jsonl",      "selective.results.jsonl",
                                             "selective.records.jsonl", "summary.csv",
                                             "sweep.csv",               "fit.json",
                                             "plot.csv"};
    const int concurrency[4] = {1, 1, 4, 4};

    for (int run = 0; run < 4; ++run) {
        const std::string tag = "run" + std::to_string(run) + "_";
        const std::string conc = std::to_string(concurrency[run]);
        const std::string common = " --dataset \"" + items + "\" --model demo-model" +
                                   " --backend mock --fixture \"" + fixture + "\"" +
                                   " --concurrency " + conc;
        const auto p = [&](const std::string& name) { return tmp.str(tag + name); };

        REQUIRE(run_cli("run" + common + " --strategy cot --mode two --out \"" +
                        p("cot.results.jsonl") + "\" 2> \"" + p("run.log") + "\"") == 0);
        REQUIRE(run_cli("run" + common + " --strategy selective --mode two --out \"" +
                        p("selective.results.jsonl") + "\" --records \"" +
                        p("selective.records.jsonl") + "\" 2>> \"" + p("run.log") + "\"") == 0);
        REQUIRE(run_cli("summarize --baseline \"" + p("cot.results.jsonl") + "\" --variant \"" +
                        p("selective.results.jsonl") +
                        "\" --dataset medqa-usmle --model demo-model --out \"" +
                        p("summary.csv") + "\"") == 0);
        REQUIRE(run_cli("sweep" + common + " --out \"" + p("sweep.csv") + "\" 2>> \"" +
                        p("run.log") + "\"") == 0);
        REQUIRE(run_cli("fit --in \"" + p("sweep.csv") + "\" --selective \"" +
                        p("selective.results.jsonl") + "\" --out \"" + p("fit.json") +
                        "\" --plotdata \"" + p("plot.csv") + "\"") == 0);
    }

    // Stricter than required: scripted latencies make even the latency
    // fields reproducible, so whole files must match byte for byte.
    bool identical = true;
    for (const auto& name : kFiles) {
        const std::string base = read_file(tmp.str("run0_" + name));
        CHECK_FALSE(base.empty());
        for (int run = 1; run < 4; ++run) {
            CAPTURE(name);
            CAPTURE(run);
            const bool same = read_file(tmp.str("run" + std::to_string(run) + "_" + name)) == base;
            CHECK(same);
            identical &= same;
        }
    }

    // The byte-identity is not vacuous: the cells carry the constructed
    // rise-then-fall accuracy profile and the fit sees it.
    const auto points = sweep_from_csv(read_file(tmp.str("run0_sweep.csv")));
    REQUIRE(points.size() == 6);
    const double expected_acc[6] = {0.55, 0.70, 0.80, 0.75, 0.65, 0.50};
    for (int i = 0; i < 6; ++i) CHECK(points[i].accuracy == expected_acc[i]);
    const auto fit = ojson::parse(read_file(tmp.str("run0_fit.json")));
    CHECK(fit.at("fit").at("a").get<double>() < 0.0);
    const double x_star = fit.at("fit").at("x_star").get<double>();
    CHECK(x_star > 100.0);
    CHECK(x_star < 600.0);
    CHECK(fit.at("selective").at("x_mean_rationale_words").get<double>() == 265.0);

    report("c6", identical ? "PASS" : "FAIL",
           "7 output files byte-identical across 2 repeats x concurrency {1, 4}, latency fields "
           "included");
}

TEST_CASE("c7 dataset adapters emit the documented split sizes") {
    // Default: schema-faithful synthetic splits of the documented sizes,
    // generated on the fly. Point SELCOT_DATA_DIR at a directory holding
    // real split files (headqa.json, medqa.jsonl, medmcqa.jsonl,
    // pubmedqa.json) to run the same checks against them.
    testsupport::TempDir tmp;
    const char* data_env = std::getenv("SELCOT_DATA_DIR");
    std::string dir;
    if (data_env != nullptr && *data_env != '\0') {
        dir = data_env;
    } else {
        dir = tmp.str();
        {
            std::ofstream out(tmp.str("medqa.jsonl"), std::ios::binary);
            for (int i = 0; i < 1273; ++i) {
                ojson j;
                j["question"] = "Synthetic USMLE-style vignette " + std::to_string(i) +
                               ": which next step applies?";
                j["answer_idx"] = "A";
                j["options"] = ojson{{"A", "option a " + std::to_string(i)},
                                     {"B", "option b"},
                                     {"C", "option c"},
                                     {"D", "option d"},
                                     {"E", "option e"}};
                out << j.dump() << "\n";
            }
        }
        {
            std::ofstream out(tmp.str("medmcqa.jsonl"), std::ios::binary);
            for (int i = 0; i < 4183; ++i) {
                ojson j;
                j["id"] = "syn-" + std::to_string(i);
                j["question"] = "Synthetic exam question " + std::to_string(i) + "?";
                j["opa"] = "alpha";
                j["opb"] = "beta";
                j["opc"] = "gamma";
                j["opd"] = "delta";
                j["cop"] = 1 + (i % 4);  // 1-based, includes 4 → base is unambiguous
                out << j.dump() << "\n";
            }
        }
        {
            ojson root = ojson::object();
            const char* kDecisions[3] = {"yes", "no", "maybe"};
            for (int i = 0; i < 500; ++i) {
                ojson e;
                e["QUESTION"] = "Does synthetic abstract " + std::to_string(i) +
                               " support the intervention?";
                e["CONTEXTS"] = ojson::array({"Background section.", "Results section."});
                e["final_decision"] = kDecisions[i % 3];
                root[std::to_string(10000000 + i)] = std::move(e);
            }
            std::ofstream out(tmp.str("pubmedqa.json"), std::ios::binary);
            out << root.dump();
        }
        {
            ojson data = ojson::array();
            for (int i = 0; i < 300; ++i) {
                ojson q;
                q["qid"] = i;
                q["qtext"] = "Synthetic nursing exam question " + std::to_string(i) + "?";
                q["ra"] = 1 + (i % 4);
                ojson answers = ojson::array();
                for (int a = 1; a <= 4; ++a) {
                    answers.push_back(
                        ojson{{"aid", a}, {"atext", "answer " + std::to_string(a)}});
                }
                q["answers"] = std::move(answers);
                data.push_back(std::move(q));
            }
            ojson root;
            root["exams"] = ojson{{"exam_synthetic", ojson{{"data", std::move(data)}}}};
            std::ofstream out(tmp.str("headqa.json"), std::ios::binary);
            out << root.dump();
        }
    }

    const auto medqa = ingest(Dataset::MedQAUSMLE, dir + "/medqa.jsonl");
    const auto medmcqa = ingest(Dataset::MedMCQA, dir + "/medmcqa.jsonl");
    const auto pubmedqa = ingest(Dataset::PubMedQA, dir + "/pubmedqa.json");
    CHECK(medqa.report.n_emitted == 1273);
    CHECK(medmcqa.report.n_emitted == 4183);
    CHECK(pubmedqa.report.n_emitted == 500);
    CHECK(medqa.report.n_rejected == 0);
    CHECK(medmcqa.report.n_rejected == 0);
    CHECK(pubmedqa.report.n_rejected == 0);

    // HeadQA: the count is reported and compared against the bundled
    // reference size of 244 with a warning, never a failure.
    const std::string stderr_path = tmp.str("headqa.stderr");
    const int rc = run_cli("ingest headqa --in \"" + dir + "/headqa.json\" --out \"" +
                           tmp.str("headqa.items.jsonl") + "\" 2> \"" + stderr_path + "\"");
    CHECK(rc == 0);
    const auto headqa = ingest(Dataset::HeadQA, dir + "/headqa.json");
    const std::string warning = read_file(stderr_path);
    const bool warned_or_matched =
        headqa.report.n_emitted == 244 || warning.find("244") != std::string::npos;
    CHECK(warned_or_matched);

    const bool pass = medqa.report.n_emitted == 1273 && medmcqa.report.n_emitted == 4183 &&
                      pubmedqa.report.n_emitted == 500 && rc == 0 && warned_or_matched;
    report("c7", pass ? "PASS" : "FAIL",
           "medqa-usmle " + std::to_string(medqa.report.n_emitted) + "/1273, medmcqa " +
               std::to_string(medmcqa.report.n_emitted) + "/4183, pubmedqa " +
               std::to_string(pubmedqa.report.n_emitted) + "/500; headqa " +
               std::to_string(headqa.report.n_emitted) +
               (headqa.report.n_emitted == 244 ? " == 244" : " with 244-mismatch warning"));
}

TEST_CASE("c8 live endpoint sanity (opt-in)") {
    const char* endpoint = std::getenv("SELCOT_LIVE_ENDPOINT");
    if (endpoint == nullptr || *endpoint == '\0') {
        report("c8", "SKIP", "optional; set SELCOT_LIVE_ENDPOINT to a chat-completions base URL "
                             "to run it");
        return;
    }

    std::vector<QAItem> items;
    for (int i = 0; i < 120; ++i) {
        QAItem it;
        it.id = "live-" + std::to_string(i);
        it.dataset = Dataset::MedQAUSMLE;
        it.question = "Question " + std::to_string(i) +
                      ": which single option is labeled with the letter B?";
        it.options = {{"A", "the option labeled A"},
                      {"B", "the option labeled B"},
                      {"C", "the option labeled C"},
                      {"D", "the option labeled D"}};
        it.gold = "B";
        items.push_back(it);
    }

    BackendSpec spec;
    spec.kind = BackendKind::HttpChat;
    spec.endpoint = endpoint;
    if (const char* key_env = std::getenv("SELCOT_LIVE_API_KEY_ENV")) spec.api_key_env = key_env;
    const auto backend = make_backend(spec);

    RunConfig config;
    config.model_name =
        std::getenv("SELCOT_LIVE_MODEL") ? std::getenv("SELCOT_LIVE_MODEL") : "default";
    config.selective_mode = SelectiveMode::TwoCall;
    config.concurrency = 4;

    const auto out = run_dataset(items, PromptStrategy::selective(), *backend, config);
    const double failure_rate =
        static_cast<double>(out.n_parse_failures) / static_cast<double>(items.size());
    CHECK(failure_rate < 0.10);

    const auto summary = summarize(out.results, {"medqa-usmle", config.model_name});
    const auto table = emit_table_csv({{summary, std::nullopt}});
    const auto lines_ok = table.rfind("dataset,model,method,", 0) == 0;
    CHECK(lines_ok);
    std::printf("%s", table.c_str());

    char detail[160];
    std::snprintf(detail, sizeof(detail), "parse failures %lld/120 (%.1f%%), row emitted",
                  static_cast<long long>(out.n_parse_failures), failure_rate * 100.0);
    report("c8", (failure_rate < 0.10 && lines_ok) ? "PASS" : "FAIL", detail);
}
