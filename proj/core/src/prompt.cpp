#include "selcot/prompt.hpp"

#include <fstream>
#include <sstream>

#include "selcot/errors.hpp"

namespace selcot {

namespace {

// Built-in template bodies. core/templates/*.txt carry the same content
// for reference and as a starting point for --template-dir overrides;
// a unit test keeps the two in sync.

constexpr const char* kStandard =
    "You are answering a multiple-choice medical question.\n"
    "\n"
    "{context}Question:\n"
    "{question}\n"
    "\n"
    "Options:\n"
    "{options}\n"
    "\n"
    "Answer directly. Do not explain your choice.\n"
    "Finish with one final line of the form:\n"
    "ANSWER: <label>\n";

constexpr const char* kCoT =
    "You are answering a multiple-choice medical question.\n"
    "\n"
    "{context}Question:\n"
    "{question}\n"
    "\n"
    "Options:\n"
    "{options}\n"
    "\n"
    "Think through the problem step by step, writing out your reasoning before you commit to a "
    "choice.\n"
    "Finish with one final line of the form:\n"
    "ANSWER: <label>\n";

constexpr const char* kFixedLength =
    "You are answering a multiple-choice medical question.\n"
    "\n"
    "{context}Question:\n"
    "{question}\n"
    "\n"
    "Options:\n"
    "{options}\n"
    "\n"
    "Think through the problem step by step, writing out your reasoning in approximately "
    "{target_words} words before you commit to a choice.\n"
    "Finish with one final line of the form:\n"
    "ANSWER: <label>\n";

constexpr const char* kSelective =
    "You are answering a multiple-choice medical question.\n"
    "\n"
    "{context}Question:\n"
    "{question}\n"
    "\n"
    "Options:\n"
    "{options}\n"
    "\n"
    "First decide whether this question needs explicit reasoning or can be answered directly "
    "from recalled knowledge. Your very first output line must be exactly one of:\n"
    "DECISION: REASONING\n"
    "DECISION: DIRECT\n"
    "If you chose REASONING, write out your reasoning step by step and then give your answer. "
    "If you chose DIRECT, give your answer immediately.\n"
    "Finish with one final line of the form:\n"
    "ANSWER: <label>\n";

constexpr const char* kDecisionOnly =
    "You are deciding how to approach a multiple-choice medical question. Do not answer it.\n"
    "\n"
    "{context}Question:\n"
    "{question}\n"
    "\n"
    "Options:\n"
    "{options}\n"
    "\n"
    "Decide whether this question needs explicit step-by-step reasoning or can be answered "
    "directly from recalled knowledge. Reply with exactly one line and nothing else, either:\n"
    "DECISION: REASONING\n"
    "DECISION: DIRECT\n";

void require_placeholder(const std::string& body, const char* placeholder, const char* which) {
    if (body.find(placeholder) == std::string::npos) {
        throw TemplateError(std::string(which) + " template lacks required placeholder " +
                            placeholder);
    }
}

void check_templates(const PromptTemplates& t) {
    const std::pair<const std::string*, const char*> answering[] = {
        {&t.standard_text, "standard"},
        {&t.cot_text, "cot"},
        {&t.fixed_length_text, "fixed_length"},
        {&t.selective_text, "selective"},
        {&t.decision_only_text, "decision_only"},
    };
    for (const auto& [body, name] : answering) {
        require_placeholder(*body, "{question}", name);
        require_placeholder(*body, "{options}", name);
    }
    require_placeholder(t.fixed_length_text, "{target_words}", "fixed_length");
}

std::string load_template_file(const std::string& dir, const char* name) {
    const std::string path = dir + "/" + name;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TemplateError("cannot open template file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string replace_all(std::string body, std::string_view from, std::string_view to) {
    std::size_t pos = 0;
    while ((pos = body.find(from, pos)) != std::string::npos) {
        body.replace(pos, from.size(), to);
        pos += to.size();
    }
    return body;
}

std::string options_block(const QAItem& item) {
    std::string out;
    for (const auto& o : item.options) {
        if (!out.empty()) out += '\n';
        // "yes. yes" would be noise; bare labels suffice when the option
        // text is the label itself.
        if (o.text == o.label) {
            out += o.label;
        } else {
            out += o.label + ". " + o.text;
        }
    }
    return out;
}

std::string context_block(const QAItem& item) {
    if (!item.context || item.context->empty()) return "";
    return "Context:\n" + *item.context + "\n\n";
}

std::string fill(const std::string& body, const QAItem& item) {
    std::string out = replace_all(body, "{context}", context_block(item));
    out = replace_all(std::move(out), "{question}", item.question);
    out = replace_all(std::move(out), "{options}", options_block(item));
    return out;
}

const std::string& template_for(const PromptTemplates& t, StrategyKind kind) {
    switch (kind) {
        case StrategyKind::Standard: return t.standard_text;
        case StrategyKind::CoT: return t.cot_text;
        case StrategyKind::FixedLengthCoT: return t.fixed_length_text;
        case StrategyKind::SelectiveCoT: return t.selective_text;
    }
    throw TemplateError("unknown strategy kind");
}

}  // namespace

const PromptTemplates& PromptTemplates::builtin() {
    static const PromptTemplates t = [] {
        PromptTemplates b;
        b.standard_text = kStandard;
        b.cot_text = kCoT;
        b.fixed_length_text = kFixedLength;
        b.selective_text = kSelective;
        b.decision_only_text = kDecisionOnly;
        check_templates(b);
        return b;
    }();
    return t;
}

PromptTemplates PromptTemplates::from_dir(const std::string& dir) {
    PromptTemplates t;
    t.standard_text = load_template_file(dir, "standard.txt");
    t.cot_text = load_template_file(dir, "cot.txt");
    t.fixed_length_text = load_template_file(dir, "fixed_length.txt");
    t.selective_text = load_template_file(dir, "selective.txt");
    t.decision_only_text = load_template_file(dir, "decision_only.txt");
    check_templates(t);
    return t;
}

RenderedPrompt render(const PromptTemplates& templates, PromptStrategy strategy,
                      const QAItem& item) {
    if (strategy.kind == StrategyKind::FixedLengthCoT && strategy.target_words <= 0) {
        throw TemplateError("fixed-length strategy needs a positive word target");
    }

    std::string body = template_for(templates, strategy.kind);
    if (strategy.kind == StrategyKind::FixedLengthCoT) {
        body = replace_all(std::move(body), "{target_words}",
                           std::to_string(strategy.target_words));
    }

    RenderedPrompt p;
    p.strategy = strategy;
    p.item_id = item.id;
    p.user_text = fill(body, item);
    if (strategy.kind == StrategyKind::SelectiveCoT) {
        p.expected_decision_marker = kDecisionMarker;
    }
    return p;
}

RenderedPrompt render(PromptStrategy strategy, const QAItem& item) {
    return render(PromptTemplates::builtin(), strategy, item);
}

RenderedPrompt render_decision_only(const PromptTemplates& templates, const QAItem& item) {
    RenderedPrompt p;
    p.strategy = PromptStrategy::selective();
    p.item_id = item.id;
    p.user_text = fill(templates.decision_only_text, item);
    p.expected_decision_marker = kDecisionMarker;
    return p;
}

RenderedPrompt render_decision_only(const QAItem& item) {
    return render_decision_only(PromptTemplates::builtin(), item);
}

}  // namespace selcot
