#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace selcot {

enum class Dataset { HeadQA, MedQAUSMLE, MedMCQA, PubMedQA };

std::string_view to_string(Dataset d);
std::optional<Dataset> dataset_from_string(std::string_view s);

enum class StrategyKind { Standard, CoT, SelectiveCoT, FixedLengthCoT };

// Fully determines the rendered prompt. target_words is meaningful only
// for FixedLengthCoT and must be positive there.
struct PromptStrategy {
    StrategyKind kind = StrategyKind::Standard;
    int target_words = 0;

    static PromptStrategy standard() { return {StrategyKind::Standard, 0}; }
    static PromptStrategy cot() { return {StrategyKind::CoT, 0}; }
    static PromptStrategy selective() { return {StrategyKind::SelectiveCoT, 0}; }
    static PromptStrategy fixed_length(int words) { return {StrategyKind::FixedLengthCoT, words}; }

    // "standard" | "cot" | "selective" | "fixed:<N>"
    std::string token() const;

    bool operator==(const PromptStrategy&) const = default;
};

std::optional<PromptStrategy> strategy_from_token(std::string_view token);

struct OptionEntry {
    std::string label;
    std::string text;

    bool operator==(const OptionEntry&) const = default;
};

// One normalized multiple-choice question. Option order is preserved from
// the source dataset and prompts render it unchanged.
struct QAItem {
    std::string id;
    Dataset dataset = Dataset::MedQAUSMLE;
    std::string question;
    std::vector<OptionEntry> options;
    std::optional<std::string> context;
    std::string gold;

    std::vector<std::string> labels() const;
    const std::string* option_text(std::string_view label) const;

    bool operator==(const QAItem&) const = default;
};

// Canonicalizes labels (letters upper-case, word labels lower-case) and
// checks every QAItem invariant. Throws InvalidItem.
QAItem validate_item(QAItem raw);

enum class SelectiveMode { SingleCall, TwoCall };

std::string_view to_string(SelectiveMode m);
std::optional<SelectiveMode> selective_mode_from_string(std::string_view s);

struct RunConfig {
    double temperature = 0.7;
    int max_tokens = 1024;
    long long seed = 0;
    int concurrency = 1;
    std::string endpoint;
    std::string model_name;
    SelectiveMode selective_mode = SelectiveMode::SingleCall;

    void validate() const;  // throws ConfigError
};

enum class CallRole { Single, Decision, Answer };

std::string_view to_string(CallRole r);
std::optional<CallRole> call_role_from_string(std::string_view s);

struct ConfigSnapshot {
    double temperature = 0.7;
    int max_tokens = 1024;
    long long seed = 0;
    std::string model_name;

    static ConfigSnapshot of(const RunConfig& c) {
        return {c.temperature, c.max_tokens, c.seed, c.model_name};
    }

    bool operator==(const ConfigSnapshot&) const = default;
};

// One model call as executed.
struct GenerationRecord {
    std::string item_id;
    CallRole call_role = CallRole::Single;
    std::string prompt_text;
    std::string completion_text;
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
    double latency_seconds = 0.0;
    ConfigSnapshot config_snapshot;
    bool usage_approximate = false;  // token counts came from the fallback counter
    int retry_count = 0;

    bool operator==(const GenerationRecord&) const = default;
};

enum class Decision { Reason, Direct };
enum class DecisionSource { ParsedMarker, DefaultOnParseFailure };

std::string_view to_string(Decision d);
std::string_view to_string(DecisionSource s);
std::optional<Decision> decision_from_string(std::string_view s);
std::optional<DecisionSource> decision_source_from_string(std::string_view s);

// Per-question outcome. rationale_words counts the words of the generated
// reasoning (completion minus marker and answer lines) so a selective run
// has an intrinsic length axis.
struct ItemResult {
    std::string item_id;
    PromptStrategy strategy;
    std::optional<Decision> decision;
    std::optional<DecisionSource> decision_source;
    std::optional<std::string> extracted;
    bool correct = false;
    long long total_completion_tokens = 0;
    double total_latency_seconds = 0.0;
    bool parse_failure = false;
    long long rationale_words = 0;

    bool operator==(const ItemResult&) const = default;
};

struct DropTriple {
    std::string baseline_method;
    std::optional<double> acc_drop_pct;
    std::optional<double> tokens_drop_pct;
    std::optional<double> time_drop_pct;

    bool operator==(const DropTriple&) const = default;
};

// Aggregate for one (dataset, model, strategy) cell.
struct EvalSummary {
    std::string dataset;
    std::string model_name;
    PromptStrategy strategy;
    long long n_items = 0;
    long long n_correct = 0;
    double accuracy = 0.0;
    long long total_tokens = 0;
    double total_time_seconds = 0.0;  // sum of per-request latencies
    std::optional<double> makespan_seconds;
    std::optional<DropTriple> drops;

    bool operator==(const EvalSummary&) const = default;
};

// JSON line (de)serialization for the normalized record formats. Lines
// carry no trailing newline; writers add exactly one '\n' per record.
std::string to_json_line(const QAItem& item);
std::string to_json_line(const GenerationRecord& record);
std::string to_json_line(const ItemResult& result);
std::string to_json_line(const EvalSummary& summary);

QAItem qa_item_from_json_line(std::string_view line);
GenerationRecord generation_record_from_json_line(std::string_view line);
ItemResult item_result_from_json_line(std::string_view line);
EvalSummary eval_summary_from_json_line(std::string_view line);

inline constexpr int kRecordSchemaVersion = 1;

}  // namespace selcot
