#pragma once

#include <optional>
#include <string>

#include "selcot/types.hpp"

namespace selcot {

// The five prompt texts, with {question}, {options}, {context} and (for
// the fixed-length variant) {target_words} placeholders. Built-in copies
// are compiled in; a directory of .txt files can replace the whole set.
struct PromptTemplates {
    std::string standard_text;
    std::string cot_text;
    std::string fixed_length_text;
    std::string selective_text;
    std::string decision_only_text;

    static const PromptTemplates& builtin();

    // Loads standard.txt, cot.txt, fixed_length.txt, selective.txt,
    // decision_only.txt from dir. Throws TemplateError on a missing file
    // or a template missing a required placeholder.
    static PromptTemplates from_dir(const std::string& dir);
};

// Exact text for one model call.
struct RenderedPrompt {
    PromptStrategy strategy;
    std::string item_id;
    std::optional<std::string> system_text;
    std::string user_text;
    // Present iff the prompt instructs the decision protocol.
    std::optional<std::string> expected_decision_marker;

    bool operator==(const RenderedPrompt&) const = default;
};

// Pure functions of (templates, strategy, item). Option lines render as
// "<label>. <text>" in stored order, or the bare label when the text
// adds nothing (yes/no/maybe options); context, when present, renders
// before the question.
RenderedPrompt render(const PromptTemplates& templates, PromptStrategy strategy,
                      const QAItem& item);
RenderedPrompt render(PromptStrategy strategy, const QAItem& item);

// Decision request only — no answer instruction (two-call selective mode).
RenderedPrompt render_decision_only(const PromptTemplates& templates, const QAItem& item);
RenderedPrompt render_decision_only(const QAItem& item);

inline constexpr const char* kDecisionMarker = "DECISION:";

}  // namespace selcot
