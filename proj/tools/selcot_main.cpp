// Command-line front end: dataset ingestion, evaluation runs, summary
// tables, fixed-length sweeps and the quadratic fit report.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "selcot/ablation.hpp"
#include "selcot/backend.hpp"
#include "selcot/engine.hpp"
#include "selcot/errors.hpp"
#include "selcot/ingest.hpp"
#include "selcot/io.hpp"
#include "selcot/metrics.hpp"
#include "selcot/prompt.hpp"

namespace {

using namespace selcot;

struct BackendFlags {
    std::string backend = "mock";
    std::string endpoint;
    std::string api_key_env = "SELCOT_API_KEY";
    std::string fixture;
    double timeout_seconds = 120.0;
    int max_retries = 3;
};

struct RunFlags {
    std::string items_path;
    std::string model_name;
    std::string template_dir;
    std::string mode = "single";
    double temperature = 0.7;
    int max_tokens = 1024;
    long long seed = 0;
    int concurrency = 1;
};

void add_backend_flags(CLI::App* cmd, BackendFlags& f) {
    cmd->add_option("--backend", f.backend, "Backend kind: mock or http")
        ->check(CLI::IsMember({"mock", "http"}));
    cmd->add_option("--endpoint", f.endpoint, "Chat-completions base URL (http backend)");
    cmd->add_option("--api-key-env", f.api_key_env,
                    "Env var holding the bearer token (http backend)");
    cmd->add_option("--fixture", f.fixture, "Scripted-completions JSONL (mock backend)");
    cmd->add_option("--timeout", f.timeout_seconds, "Per-request timeout in seconds");
    cmd->add_option("--retries", f.max_retries, "Max retries per request");
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--dataset", f.items_path, "Normalized items JSONL")->required();
    cmd->add_option("--model", f.model_name, "Model name sent to the endpoint and reported");
    cmd->add_option("--template-dir", f.template_dir,
                    "Directory of prompt templates overriding the built-in set");
    cmd->add_option("--mode", f.mode, "Selective mode: single or two calls per item")
        ->check(CLI::IsMember({"single", "two"}));
    cmd->add_option("--temperature", f.temperature, "Sampling temperature");
    cmd->add_option("--max-tokens", f.max_tokens, "Generation length cap");
    cmd->add_option("--seed", f.seed, "Sampling seed forwarded to the endpoint");
    cmd->add_option("--concurrency", f.concurrency, "Concurrent in-flight items");
}

BackendSpec to_spec(const BackendFlags& f) {
    BackendSpec spec;
    spec.kind = f.backend == "http" ? BackendKind::HttpChat : BackendKind::MockFixture;
    spec.endpoint = f.endpoint;
    spec.api_key_env = f.api_key_env;
    spec.fixture_path = f.fixture;
    spec.timeout_seconds = f.timeout_seconds;
    spec.max_retries = f.max_retries;
    return spec;
}

RunConfig to_config(const RunFlags& f, const BackendFlags& b) {
    RunConfig c;
    c.temperature = f.temperature;
    c.max_tokens = f.max_tokens;
    c.seed = f.seed;
    c.concurrency = f.concurrency;
    c.endpoint = b.endpoint;
    c.model_name = f.model_name;
    c.selective_mode =
        f.mode == "two" ? SelectiveMode::TwoCall : SelectiveMode::SingleCall;
    return c;
}

PromptTemplates load_templates(const RunFlags& f) {
    if (f.template_dir.empty()) return PromptTemplates::builtin();
    return PromptTemplates::from_dir(f.template_dir);
}

int cmd_ingest(const std::string& dataset_name, const std::string& in_path,
               const std::string& out_path, bool strict) {
    const auto dataset = dataset_from_string(dataset_name);
    if (!dataset) {
        std::cerr << "unknown dataset: " << dataset_name << "\n";
        return 1;
    }
    const IngestResult result = ingest(*dataset, in_path);
    write_items_jsonl(result.items, out_path);
    std::cerr << result.report.to_json() << "\n";
    if (*dataset == Dataset::HeadQA && result.report.n_emitted != kHeadQAExpectedTestCount) {
        std::cerr << "warning: ingested " << result.report.n_emitted
                  << " items; the bundled reference figures were computed over "
                  << kHeadQAExpectedTestCount
                  << " and the subsampling procedure is not published\n";
    }
    return (strict && result.report.n_rejected > 0) ? 1 : 0;
}

int cmd_run(const RunFlags& rf, const BackendFlags& bf, const std::string& strategy_token,
            const std::string& out_path, const std::string& records_path) {
    const auto strategy = strategy_from_token(strategy_token);
    if (!strategy) {
        std::cerr << "unknown strategy: " << strategy_token << "\n";
        return 1;
    }
    const auto items = read_items_jsonl(rf.items_path);
    const auto backend = make_backend(to_spec(bf));
    const auto templates = load_templates(rf);

    const RunOutput run = run_dataset(items, *strategy, *backend, to_config(rf, bf), templates);
    write_results_jsonl(run.results, out_path);
    if (!records_path.empty()) write_records_jsonl(run.records, records_path);

    char report[256];
    std::snprintf(report, sizeof(report),
                  "{\"n_items\":%zu,\"n_parse_failures\":%lld,\"n_backend_failures\":%lld,"
                  "\"makespan_seconds\":%.6f}",
                  run.results.size(), run.n_parse_failures, run.n_backend_failures,
                  run.makespan_seconds);
    std::cerr << report << "\n";
    return 0;
}

int cmd_summarize(const std::string& baseline_path, const std::string& variant_path,
                  const std::string& out_path, const std::string& json_path,
                  const std::string& dataset, const std::string& model) {
    const SummaryMeta meta{dataset, model};
    TablePair pair;
    pair.baseline = summarize(read_results_jsonl(baseline_path), meta);
    if (!variant_path.empty()) {
        pair.variant = summarize(read_results_jsonl(variant_path), meta);
    }
    const std::vector<TablePair> pairs{pair};
    write_text_file(out_path, emit_table_csv(pairs));
    if (!json_path.empty()) write_text_file(json_path, emit_table_json(pairs));
    return 0;
}

std::vector<int> parse_lengths(const std::string& csv) {
    std::vector<int> lengths;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        lengths.push_back(std::stoi(cur));
        cur.clear();
    };
    for (const char c : csv) {
        if (c == ',') {
            flush();
        } else {
            cur += c;
        }
    }
    flush();
    return lengths;
}

int cmd_sweep(const RunFlags& rf, const BackendFlags& bf, const std::string& lengths_csv,
              const std::string& out_path, const std::string& cell_dir) {
    const auto lengths = parse_lengths(lengths_csv);
    const auto items = read_items_jsonl(rf.items_path);
    const auto backend = make_backend(to_spec(bf));
    const auto templates = load_templates(rf);

    const auto points =
        run_sweep(lengths, items, *backend, to_config(rf, bf), templates, cell_dir);
    write_text_file(out_path, sweep_csv(points));
    return 0;
}

int cmd_fit(const std::string& sweep_path, const std::string& selective_path,
            const std::string& out_path, const std::string& plot_path) {
    const auto points = sweep_from_csv(read_text_file(sweep_path));
    std::vector<std::pair<double, double>> xy;
    xy.reserve(points.size());
    for (const auto& p : points) {
        xy.emplace_back(static_cast<double>(p.target_words), p.accuracy);
    }
    const QuadraticFit fit = fit_quadratic(xy);
    const auto selective = selective_stats_from_results(read_results_jsonl(selective_path));
    const ComparisonReport report = compare_selective(fit, points, selective);

    write_text_file(out_path, fit_report_json(report));
    if (!plot_path.empty()) write_text_file(plot_path, plot_data_csv(report, points));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Selective reasoning evaluation harness for multiple-choice medical QA"};
    app.require_subcommand(1);

    // ingest
    std::string ingest_dataset, ingest_in, ingest_out;
    bool ingest_strict = false;
    auto* ingest_cmd = app.add_subcommand("ingest", "Normalize a published dataset to JSONL");
    ingest_cmd->add_option("dataset", ingest_dataset, "headqa|medqa|medmcqa|pubmedqa")
        ->required()
        ->check(CLI::IsMember({"headqa", "medqa", "medmcqa", "pubmedqa"}));
    ingest_cmd->add_option("--in", ingest_in, "Published source file")->required();
    ingest_cmd->add_option("--out", ingest_out, "Normalized items JSONL")->required();
    ingest_cmd->add_flag("--strict", ingest_strict, "Exit nonzero when any record was rejected");

    // run
    RunFlags run_rf;
    BackendFlags run_bf;
    std::string run_strategy, run_out, run_records;
    auto* run_cmd = app.add_subcommand("run", "Evaluate one strategy over a dataset");
    add_run_flags(run_cmd, run_rf);
    add_backend_flags(run_cmd, run_bf);
    run_cmd->add_option("--strategy", run_strategy, "standard|cot|selective|fixed:<N>")
        ->required();
    run_cmd->add_option("--out", run_out, "Per-item results JSONL")->required();
    run_cmd->add_option("--records", run_records, "Per-call records JSONL");

    // summarize
    std::string sum_baseline, sum_variant, sum_out, sum_json, sum_dataset, sum_model;
    auto* sum_cmd = app.add_subcommand("summarize", "Aggregate results into a drop table");
    sum_cmd->add_option("--baseline", sum_baseline, "Baseline results JSONL")->required();
    sum_cmd->add_option("--variant", sum_variant, "Variant results JSONL (drops vs baseline)");
    sum_cmd->add_option("--out", sum_out, "Output CSV")->required();
    sum_cmd->add_option("--json", sum_json, "Optional JSON mirror of the table");
    sum_cmd->add_option("--dataset", sum_dataset, "Dataset label for the rows");
    sum_cmd->add_option("--model", sum_model, "Model label for the rows");

    // sweep
    RunFlags sweep_rf;
    BackendFlags sweep_bf;
    std::string sweep_lengths = "100,200,300,400,500,600";
    std::string sweep_out, sweep_cell_dir;
    auto* sweep_cmd = app.add_subcommand("sweep", "Fixed-length evaluations over several targets");
    add_run_flags(sweep_cmd, sweep_rf);
    add_backend_flags(sweep_cmd, sweep_bf);
    sweep_cmd->add_option("--lengths", sweep_lengths, "Comma-separated word targets");
    sweep_cmd->add_option("--out", sweep_out, "Sweep points CSV")->required();
    sweep_cmd->add_option("--cell-dir", sweep_cell_dir,
                          "Directory for per-length results (makes the sweep resumable)");

    // fit
    std::string fit_in, fit_selective, fit_out, fit_plot;
    auto* fit_cmd = app.add_subcommand("fit", "Quadratic fit of the sweep plus comparison point");
    fit_cmd->add_option("--in", fit_in, "Sweep points CSV")->required();
    fit_cmd->add_option("--selective", fit_selective, "Selective-run results JSONL")->required();
    fit_cmd->add_option("--out", fit_out, "Fit report JSON")->required();
    fit_cmd->add_option("--plotdata", fit_plot, "Plot-ready CSV (curve, points, reference)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest_cmd->parsed()) {
            return cmd_ingest(ingest_dataset, ingest_in, ingest_out, ingest_strict);
        }
        if (run_cmd->parsed()) {
            return cmd_run(run_rf, run_bf, run_strategy, run_out, run_records);
        }
        if (sum_cmd->parsed()) {
            return cmd_summarize(sum_baseline, sum_variant, sum_out, sum_json, sum_dataset,
                                 sum_model);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(sweep_rf, sweep_bf, sweep_lengths, sweep_out, sweep_cell_dir);
        }
        if (fit_cmd->parsed()) {
            return cmd_fit(fit_in, fit_selective, fit_out, fit_plot);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
