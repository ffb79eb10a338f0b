#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "selcot/backend.hpp"
#include "selcot/prompt.hpp"
#include "selcot/types.hpp"

namespace selcot {

struct DecisionParse {
    Decision decision = Decision::Reason;
    DecisionSource source = DecisionSource::DefaultOnParseFailure;
    // Byte offset of the text after the matched marker line (0 when no
    // marker matched, i.e. the whole text remains).
    std::size_t remainder_offset = 0;
};

// Scans for the first line of the form `DECISION: REASONING|DIRECT`
// (case-insensitive, optional surrounding whitespace, marker must start
// its line). No match defaults to Reason — an unreadable decision must
// never silently skip reasoning.
DecisionParse extract_decision(std::string_view text);

// Answer extraction fallback chain, in order:
//   1. last line `ANSWER: <label>` (case-insensitive keyword; the label
//      may be wrapped in (), [], quotes or carry trailing . , ) ] );
//   2. letter labels: last standalone `X.` (uppercase, preceded by a
//      non-alphanumeric, followed by whitespace or end) or `(x)`
//      (case-insensitive);
//   3. word labels: last standalone yes/no/maybe word, case-insensitive.
// Returns the canonical label, or nothing when every rule fails.
std::optional<std::string> extract_answer(std::string_view text,
                                          const std::vector<std::string>& allowed_labels);

// Words in the completion that belong to neither a decision-marker line
// nor an ANSWER line — the length of the generated rationale.
long long rationale_word_count(std::string_view completion);

struct RunOutput {
    std::vector<ItemResult> results;       // input order
    std::vector<GenerationRecord> records;  // input order, calls in execution order per item
    double makespan_seconds = 0.0;
    long long n_parse_failures = 0;
    long long n_backend_failures = 0;
};

// One item through the routing state machine. Backend failure after
// retries is absorbed into parse_failure = true (totals keep whatever
// calls succeeded); only fixture/config defects propagate.
ItemResult run_item(const QAItem& item, PromptStrategy strategy, Backend& backend,
                    const RunConfig& config, const PromptTemplates& templates,
                    std::vector<GenerationRecord>& records_out);

// Runs every item, up to config.concurrency at a time. Results and
// records come back in input order regardless of completion order.
RunOutput run_dataset(const std::vector<QAItem>& items, PromptStrategy strategy,
                      Backend& backend, const RunConfig& config,
                      const PromptTemplates& templates = PromptTemplates::builtin());

}  // namespace selcot
