#include "selcot/metrics.hpp"

#include <cstdio>

#include "json.hpp"
#include "selcot/errors.hpp"

namespace selcot {

using ojson = nlohmann::ordered_json;

EvalSummary summarize(const std::vector<ItemResult>& results, const SummaryMeta& meta) {
    if (results.empty()) throw EmptyRun();

    EvalSummary s;
    s.dataset = meta.dataset;
    s.model_name = meta.model_name;
    s.strategy = results.front().strategy;
    for (const auto& r : results) {
        if (r.strategy != s.strategy) throw MixedStrategies();
        s.n_items += 1;
        s.n_correct += r.correct ? 1 : 0;
        s.total_tokens += r.total_completion_tokens;
        s.total_time_seconds += r.total_latency_seconds;
    }
    s.accuracy = static_cast<double>(s.n_correct) / static_cast<double>(s.n_items);
    return s;
}

double drop_pct(double baseline, double variant) {
    if (!(baseline > 0)) throw BaselineZero();
    return (baseline - variant) / baseline * 100.0;
}

EvalSummary with_drops(const EvalSummary& variant, const EvalSummary& baseline) {
    if (variant.dataset != baseline.dataset) {
        throw PairMismatch("datasets differ: " + variant.dataset + " vs " + baseline.dataset);
    }
    if (variant.model_name != baseline.model_name) {
        throw PairMismatch("models differ: " + variant.model_name + " vs " + baseline.model_name);
    }

    EvalSummary out = variant;
    DropTriple d;
    d.baseline_method = baseline.strategy.token();
    if (baseline.accuracy > 0) d.acc_drop_pct = drop_pct(baseline.accuracy, variant.accuracy);
    if (baseline.total_tokens > 0) {
        d.tokens_drop_pct = drop_pct(static_cast<double>(baseline.total_tokens),
                                     static_cast<double>(variant.total_tokens));
    }
    if (baseline.total_time_seconds > 0) {
        d.time_drop_pct = drop_pct(baseline.total_time_seconds, variant.total_time_seconds);
    }
    out.drops = std::move(d);
    return out;
}

namespace {

std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string fmt4_opt(const std::optional<double>& v) {
    return v ? fmt4(*v) : std::string();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

struct Row {
    std::string dataset;
    std::string model;
    std::string method;
    double acc = 0.0;
    std::optional<double> acc_drop_pct;
    long long tokens = 0;
    std::optional<double> tokens_drop_pct;
    double time_s = 0.0;
    std::optional<double> time_drop_pct;
    std::optional<double> makespan_s;
};

Row row_of(const EvalSummary& s, bool include_drops) {
    Row r;
    r.dataset = s.dataset;
    r.model = s.model_name;
    r.method = s.strategy.token();
    r.acc = s.accuracy;
    r.tokens = s.total_tokens;
    r.time_s = s.total_time_seconds;
    r.makespan_s = s.makespan_seconds;
    if (include_drops && s.drops) {
        r.acc_drop_pct = s.drops->acc_drop_pct;
        r.tokens_drop_pct = s.drops->tokens_drop_pct;
        r.time_drop_pct = s.drops->time_drop_pct;
    }
    return r;
}

std::vector<Row> rows_of(const std::vector<TablePair>& pairs) {
    std::vector<Row> rows;
    for (const auto& pair : pairs) {
        rows.push_back(row_of(pair.baseline, false));
        if (pair.variant) {
            rows.push_back(row_of(with_drops(*pair.variant, pair.baseline), true));
        }
    }
    return rows;
}

}  // namespace

std::string emit_table_csv(const std::vector<TablePair>& pairs) {
    std::string out =
        "dataset,model,method,acc,acc_drop_pct,tokens,tokens_drop_pct,time_s,time_drop_pct,"
        "makespan_s\n";
    for (const auto& r : rows_of(pairs)) {
        out += csv_field(r.dataset) + ',' + csv_field(r.model) + ',' + csv_field(r.method) + ',';
        out += fmt4(r.acc) + ',' + fmt4_opt(r.acc_drop_pct) + ',';
        out += std::to_string(r.tokens) + ',' + fmt4_opt(r.tokens_drop_pct) + ',';
        out += fmt4(r.time_s) + ',' + fmt4_opt(r.time_drop_pct) + ',';
        out += fmt4_opt(r.makespan_s) + '\n';
    }
    return out;
}

std::string emit_table_json(const std::vector<TablePair>& pairs) {
    ojson arr = ojson::array();
    for (const auto& r : rows_of(pairs)) {
        ojson j;
        j["dataset"] = r.dataset;
        j["model"] = r.model;
        j["method"] = r.method;
        j["acc"] = r.acc;
        j["acc_drop_pct"] = r.acc_drop_pct ? ojson(*r.acc_drop_pct) : ojson(nullptr);
        j["tokens"] = r.tokens;
        j["tokens_drop_pct"] = r.tokens_drop_pct ? ojson(*r.tokens_drop_pct) : ojson(nullptr);
        j["time_s"] = r.time_s;
        j["time_drop_pct"] = r.time_drop_pct ? ojson(*r.time_drop_pct) : ojson(nullptr);
        j["makespan_s"] = r.makespan_s ? ojson(*r.makespan_s) : ojson(nullptr);
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

}  // namespace selcot
