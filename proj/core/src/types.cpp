#include "selcot/types.hpp"

#include <cctype>
#include <set>

#include "json.hpp"
#include "selcot/errors.hpp"
#include "selcot/text.hpp"

namespace selcot {

using ojson = nlohmann::ordered_json;

std::string_view to_string(Dataset d) {
    switch (d) {
        case Dataset::HeadQA: return "headqa";
        case Dataset::MedQAUSMLE: return "medqa-usmle";
        case Dataset::MedMCQA: return "medmcqa";
        case Dataset::PubMedQA: return "pubmedqa";
    }
    return "unknown";
}

std::optional<Dataset> dataset_from_string(std::string_view s) {
    if (s == "headqa") return Dataset::HeadQA;
    if (s == "medqa-usmle" || s == "medqa") return Dataset::MedQAUSMLE;
    if (s == "medmcqa") return Dataset::MedMCQA;
    if (s == "pubmedqa") return Dataset::PubMedQA;
    return std::nullopt;
}

std::string PromptStrategy::token() const {
    switch (kind) {
        case StrategyKind::Standard: return "standard";
        case StrategyKind::CoT: return "cot";
        case StrategyKind::SelectiveCoT: return "selective";
        case StrategyKind::FixedLengthCoT: return "fixed:" + std::to_string(target_words);
    }
    return "unknown";
}

std::optional<PromptStrategy> strategy_from_token(std::string_view token) {
    if (token == "standard") return PromptStrategy::standard();
    if (token == "cot") return PromptStrategy::cot();
    if (token == "selective") return PromptStrategy::selective();
    if (token.rfind("fixed:", 0) == 0) {
        const std::string_view num = token.substr(6);
        if (num.empty()) return std::nullopt;
        int words = 0;
        for (const char c : num) {
            if (c < '0' || c > '9') return std::nullopt;
            if (words > 1000000) return std::nullopt;
            words = words * 10 + (c - '0');
        }
        if (words <= 0) return std::nullopt;
        return PromptStrategy::fixed_length(words);
    }
    return std::nullopt;
}

std::vector<std::string> QAItem::labels() const {
    std::vector<std::string> out;
    out.reserve(options.size());
    for (const auto& o : options) out.push_back(o.label);
    return out;
}

const std::string* QAItem::option_text(std::string_view label) const {
    for (const auto& o : options) {
        if (o.label == label) return &o.text;
    }
    return nullptr;
}

namespace {

bool is_word_label(std::string_view canon) {
    return canon == "yes" || canon == "no" || canon == "maybe";
}

bool is_letter_label(std::string_view canon) {
    return canon.size() == 1 && canon[0] >= 'A' && canon[0] <= 'E';
}

std::string canonicalize_label(std::string_view raw) {
    const std::string t = text::trim(raw);
    if (t.size() == 1 && std::isalpha(static_cast<unsigned char>(t[0]))) {
        return text::to_upper_ascii(t);
    }
    return text::to_lower_ascii(t);
}

}  // namespace

QAItem validate_item(QAItem raw) {
    if (text::trim(raw.question).empty()) throw InvalidItem("empty question");
    if (raw.options.size() < 2) throw InvalidItem("fewer than two options");
    if (text::trim(raw.gold).empty()) throw InvalidItem("missing gold");

    bool any_letter = false;
    bool any_word = false;
    std::set<std::string> seen;
    for (auto& opt : raw.options) {
        opt.label = canonicalize_label(opt.label);
        if (is_letter_label(opt.label)) {
            any_letter = true;
        } else if (is_word_label(opt.label)) {
            any_word = true;
        } else {
            throw InvalidItem("label '" + opt.label + "' not in A-E or yes/no/maybe");
        }
        if (!seen.insert(opt.label).second) throw InvalidItem("duplicate label '" + opt.label + "'");
        if (text::trim(opt.text).empty()) throw InvalidItem("empty option text for '" + opt.label + "'");
    }
    if (any_letter && any_word) throw InvalidItem("mixed letter and word labels");

    if (raw.dataset == Dataset::PubMedQA) {
        if (seen != std::set<std::string>{"maybe", "no", "yes"}) {
            throw InvalidItem("pubmedqa label set must be exactly yes/no/maybe");
        }
    } else if (any_word) {
        throw InvalidItem("letter labels required for this dataset");
    }

    raw.gold = canonicalize_label(raw.gold);
    if (!seen.count(raw.gold)) throw InvalidItem("gold '" + raw.gold + "' not among options");
    return raw;
}

std::string_view to_string(SelectiveMode m) {
    return m == SelectiveMode::SingleCall ? "single" : "two";
}

std::optional<SelectiveMode> selective_mode_from_string(std::string_view s) {
    if (s == "single") return SelectiveMode::SingleCall;
    if (s == "two") return SelectiveMode::TwoCall;
    return std::nullopt;
}

void RunConfig::validate() const {
    if (temperature < 0.0) throw ConfigError("temperature must be >= 0");
    if (max_tokens < 1) throw ConfigError("max_tokens must be >= 1");
    if (concurrency < 1) throw ConfigError("concurrency must be >= 1");
}

std::string_view to_string(CallRole r) {
    switch (r) {
        case CallRole::Single: return "single";
        case CallRole::Decision: return "decision";
        case CallRole::Answer: return "answer";
    }
    return "unknown";
}

std::optional<CallRole> call_role_from_string(std::string_view s) {
    if (s == "single") return CallRole::Single;
    if (s == "decision") return CallRole::Decision;
    if (s == "answer") return CallRole::Answer;
    return std::nullopt;
}

std::string_view to_string(Decision d) {
    return d == Decision::Reason ? "reason" : "direct";
}

std::string_view to_string(DecisionSource s) {
    return s == DecisionSource::ParsedMarker ? "parsed_marker" : "default_on_parse_failure";
}

std::optional<Decision> decision_from_string(std::string_view s) {
    if (s == "reason") return Decision::Reason;
    if (s == "direct") return Decision::Direct;
    return std::nullopt;
}

std::optional<DecisionSource> decision_source_from_string(std::string_view s) {
    if (s == "parsed_marker") return DecisionSource::ParsedMarker;
    if (s == "default_on_parse_failure") return DecisionSource::DefaultOnParseFailure;
    return std::nullopt;
}

namespace {

ojson strategy_to_json(const PromptStrategy& s) {
    ojson j;
    switch (s.kind) {
        case StrategyKind::Standard: j["kind"] = "standard"; break;
        case StrategyKind::CoT: j["kind"] = "cot"; break;
        case StrategyKind::SelectiveCoT: j["kind"] = "selective"; break;
        case StrategyKind::FixedLengthCoT:
            j["kind"] = "fixed";
            j["target_words"] = s.target_words;
            break;
    }
    return j;
}

PromptStrategy strategy_from_json(const ojson& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "standard") return PromptStrategy::standard();
    if (kind == "cot") return PromptStrategy::cot();
    if (kind == "selective") return PromptStrategy::selective();
    if (kind == "fixed") return PromptStrategy::fixed_length(j.at("target_words").get<int>());
    throw Error("unknown strategy kind '" + kind + "'");
}

ojson parse_line(std::string_view line, const char* what) {
    ojson j = ojson::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(std::string("not a JSON object: ") + what);
    }
    return j;
}

template <typename T>
std::optional<T> opt_field(const ojson& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<T>();
}

}  // namespace

std::string to_json_line(const QAItem& item) {
    ojson j;
    j["id"] = item.id;
    j["dataset"] = std::string(to_string(item.dataset));
    j["question"] = item.question;
    ojson opts = ojson::array();
    for (const auto& o : item.options) {
        opts.push_back(ojson{{"label", o.label}, {"text", o.text}});
    }
    j["options"] = std::move(opts);
    if (item.context) j["context"] = *item.context;
    j["gold"] = item.gold;
    return j.dump();
}

QAItem qa_item_from_json_line(std::string_view line) {
    const ojson j = parse_line(line, "QAItem");
    QAItem item;
    item.id = j.at("id").get<std::string>();
    const std::string ds = j.at("dataset").get<std::string>();
    const auto parsed = dataset_from_string(ds);
    if (!parsed) throw Error("unknown dataset '" + ds + "'");
    item.dataset = *parsed;
    item.question = j.at("question").get<std::string>();
    for (const auto& o : j.at("options")) {
        item.options.push_back({o.at("label").get<std::string>(), o.at("text").get<std::string>()});
    }
    item.context = opt_field<std::string>(j, "context");
    item.gold = j.at("gold").get<std::string>();
    return item;
}

std::string to_json_line(const GenerationRecord& r) {
    ojson j;
    j["schema_version"] = kRecordSchemaVersion;
    j["item_id"] = r.item_id;
    j["call_role"] = std::string(to_string(r.call_role));
    j["prompt_text"] = r.prompt_text;
    j["completion_text"] = r.completion_text;
    j["prompt_tokens"] = r.prompt_tokens;
    j["completion_tokens"] = r.completion_tokens;
    j["latency_seconds"] = r.latency_seconds;
    j["usage_approximate"] = r.usage_approximate;
    j["retry_count"] = r.retry_count;
    j["config_snapshot"] = ojson{{"temperature", r.config_snapshot.temperature},
                                 {"max_tokens", r.config_snapshot.max_tokens},
                                 {"seed", r.config_snapshot.seed},
                                 {"model_name", r.config_snapshot.model_name}};
    return j.dump();
}

GenerationRecord generation_record_from_json_line(std::string_view line) {
    const ojson j = parse_line(line, "GenerationRecord");
    GenerationRecord r;
    r.item_id = j.at("item_id").get<std::string>();
    const std::string role = j.at("call_role").get<std::string>();
    const auto parsed_role = call_role_from_string(role);
    if (!parsed_role) throw Error("unknown call_role '" + role + "'");
    r.call_role = *parsed_role;
    r.prompt_text = j.at("prompt_text").get<std::string>();
    r.completion_text = j.at("completion_text").get<std::string>();
    r.prompt_tokens = j.at("prompt_tokens").get<long long>();
    r.completion_tokens = j.at("completion_tokens").get<long long>();
    r.latency_seconds = j.at("latency_seconds").get<double>();
    r.usage_approximate = j.value("usage_approximate", false);
    r.retry_count = j.value("retry_count", 0);
    const auto& c = j.at("config_snapshot");
    r.config_snapshot.temperature = c.at("temperature").get<double>();
    r.config_snapshot.max_tokens = c.at("max_tokens").get<int>();
    r.config_snapshot.seed = c.at("seed").get<long long>();
    r.config_snapshot.model_name = c.at("model_name").get<std::string>();
    return r;
}

std::string to_json_line(const ItemResult& r) {
    ojson j;
    j["schema_version"] = kRecordSchemaVersion;
    j["item_id"] = r.item_id;
    j["strategy"] = strategy_to_json(r.strategy);
    if (r.decision) j["decision"] = std::string(to_string(*r.decision));
    if (r.decision_source) j["decision_source"] = std::string(to_string(*r.decision_source));
    if (r.extracted) j["extracted"] = *r.extracted;
    j["correct"] = r.correct;
    j["parse_failure"] = r.parse_failure;
    j["total_completion_tokens"] = r.total_completion_tokens;
    j["total_latency_seconds"] = r.total_latency_seconds;
    j["rationale_words"] = r.rationale_words;
    return j.dump();
}

ItemResult item_result_from_json_line(std::string_view line) {
    const ojson j = parse_line(line, "ItemResult");
    ItemResult r;
    r.item_id = j.at("item_id").get<std::string>();
    r.strategy = strategy_from_json(j.at("strategy"));
    if (const auto d = opt_field<std::string>(j, "decision")) {
        const auto parsed = decision_from_string(*d);
        if (!parsed) throw Error("unknown decision '" + *d + "'");
        r.decision = parsed;
    }
    if (const auto s = opt_field<std::string>(j, "decision_source")) {
        const auto parsed = decision_source_from_string(*s);
        if (!parsed) throw Error("unknown decision_source '" + *s + "'");
        r.decision_source = parsed;
    }
    r.extracted = opt_field<std::string>(j, "extracted");
    r.correct = j.at("correct").get<bool>();
    r.parse_failure = j.at("parse_failure").get<bool>();
    r.total_completion_tokens = j.at("total_completion_tokens").get<long long>();
    r.total_latency_seconds = j.at("total_latency_seconds").get<double>();
    r.rationale_words = j.value("rationale_words", 0LL);
    return r;
}

std::string to_json_line(const EvalSummary& s) {
    ojson j;
    j["schema_version"] = kRecordSchemaVersion;
    j["dataset"] = s.dataset;
    j["model"] = s.model_name;
    j["method"] = s.strategy.token();
    j["n_items"] = s.n_items;
    j["n_correct"] = s.n_correct;
    j["accuracy"] = s.accuracy;
    j["total_tokens"] = s.total_tokens;
    j["time_s"] = s.total_time_seconds;
    if (s.makespan_seconds) j["makespan_s"] = *s.makespan_seconds;
    if (s.drops) {
        ojson d;
        d["baseline"] = s.drops->baseline_method;
        d["acc_drop_pct"] = s.drops->acc_drop_pct ? ojson(*s.drops->acc_drop_pct) : ojson(nullptr);
        d["tokens_drop_pct"] = s.drops->tokens_drop_pct ? ojson(*s.drops->tokens_drop_pct) : ojson(nullptr);
        d["time_drop_pct"] = s.drops->time_drop_pct ? ojson(*s.drops->time_drop_pct) : ojson(nullptr);
        j["drops"] = std::move(d);
    }
    return j.dump();
}

EvalSummary eval_summary_from_json_line(std::string_view line) {
    const ojson j = parse_line(line, "EvalSummary");
    EvalSummary s;
    s.dataset = j.at("dataset").get<std::string>();
    s.model_name = j.at("model").get<std::string>();
    const std::string method = j.at("method").get<std::string>();
    const auto strat = strategy_from_token(method);
    if (!strat) throw Error("unknown method token '" + method + "'");
    s.strategy = *strat;
    s.n_items = j.at("n_items").get<long long>();
    s.n_correct = j.at("n_correct").get<long long>();
    s.accuracy = j.at("accuracy").get<double>();
    s.total_tokens = j.at("total_tokens").get<long long>();
    s.total_time_seconds = j.at("time_s").get<double>();
    s.makespan_seconds = opt_field<double>(j, "makespan_s");
    if (auto it = j.find("drops"); it != j.end() && !it->is_null()) {
        DropTriple d;
        d.baseline_method = it->at("baseline").get<std::string>();
        d.acc_drop_pct = opt_field<double>(*it, "acc_drop_pct");
        d.tokens_drop_pct = opt_field<double>(*it, "tokens_drop_pct");
        d.time_drop_pct = opt_field<double>(*it, "time_drop_pct");
        s.drops = std::move(d);
    }
    return s;
}

}  // namespace selcot
