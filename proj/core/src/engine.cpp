#include "selcot/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include "selcot/errors.hpp"
#include "selcot/text.hpp"

namespace selcot {

namespace {

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::toupper(static_cast<unsigned char>(a[i])) !=
            std::toupper(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

// After a case-insensitive keyword at the start of a trimmed line,
// expects optional whitespace, ':', optional whitespace; returns the rest
// or nothing when the shape does not hold.
std::optional<std::string_view> after_keyword(std::string_view line, std::string_view keyword) {
    const auto begin = line.find_first_not_of(" \t\r\n\f\v");
    if (begin == std::string_view::npos) return std::nullopt;
    const auto end = line.find_last_not_of(" \t\r\n\f\v");
    std::string_view s = line.substr(begin, end - begin + 1);

    if (s.size() < keyword.size() || !iequals(s.substr(0, keyword.size()), keyword)) {
        return std::nullopt;
    }
    s.remove_prefix(keyword.size());
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i >= s.size() || s[i] != ':') return std::nullopt;
    ++i;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    return s.substr(i);
}

bool is_decision_marker_line(std::string_view line, Decision& out) {
    const auto rest = after_keyword(line, "DECISION");
    if (!rest) return false;
    if (iequals(*rest, "REASONING")) {
        out = Decision::Reason;
        return true;
    }
    if (iequals(*rest, "DIRECT")) {
        out = Decision::Direct;
        return true;
    }
    return false;
}

bool is_answer_line(std::string_view line) {
    return after_keyword(line, "ANSWER").has_value();
}

std::string strip_wrapping(std::string_view token) {
    while (!token.empty() && (token.front() == '(' || token.front() == '[' ||
                              token.front() == '"' || token.front() == '\'' ||
                              token.front() == '*')) {
        token.remove_prefix(1);
    }
    while (!token.empty() &&
           (token.back() == ')' || token.back() == ']' || token.back() == '"' ||
            token.back() == '\'' || token.back() == '*' || token.back() == '.' ||
            token.back() == ',')) {
        token.remove_suffix(1);
    }
    return std::string(token);
}

std::string canonical_label(std::string_view raw) {
    const std::string t = text::trim(raw);
    if (t.size() == 1) return text::to_upper_ascii(t);
    return text::to_lower_ascii(t);
}

bool is_allowed(const std::string& canon, const std::vector<std::string>& allowed) {
    for (const auto& a : allowed) {
        if (a == canon) return true;
    }
    return false;
}

// Rule 1: last `ANSWER: <label>` line whose label is allowed.
std::optional<std::string> answer_from_answer_lines(
    std::string_view text, const std::vector<std::string>& allowed) {
    std::optional<std::string> found;
    for (const auto line : text::split_lines(text)) {
        const auto rest = after_keyword(line, "ANSWER");
        if (!rest) continue;
        const std::string label = canonical_label(strip_wrapping(text::trim(*rest)));
        if (is_allowed(label, allowed)) found = label;
    }
    return found;
}

bool is_ascii_alnum(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

bool is_ascii_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

// Rule 2: last standalone `X.` (uppercase only, so "e.g." stays inert) or
// `(x)` (parens are a strong enough signal for either case).
std::optional<std::string> answer_from_letter_mentions(
    std::string_view text, const std::vector<std::string>& allowed) {
    std::optional<std::string> found;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c >= 'A' && c <= 'Z' && i + 1 < text.size() && text[i + 1] == '.') {
            const bool lead_ok = i == 0 || !is_ascii_alnum(text[i - 1]);
            const bool tail_ok = i + 2 >= text.size() || is_ascii_space(text[i + 2]);
            if (lead_ok && tail_ok && is_allowed(std::string(1, c), allowed)) {
                found = std::string(1, c);
            }
        }
        if (c == '(' && i + 2 < text.size() && text[i + 2] == ')') {
            const char inner = text[i + 1];
            if (std::isalpha(static_cast<unsigned char>(inner))) {
                const std::string label(1, static_cast<char>(
                                               std::toupper(static_cast<unsigned char>(inner))));
                if (is_allowed(label, allowed)) found = label;
            }
        }
    }
    return found;
}

// Rule 3: last standalone yes/no/maybe word.
std::optional<std::string> answer_from_word_mentions(
    std::string_view text, const std::vector<std::string>& allowed) {
    std::optional<std::string> found;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!std::isalpha(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
        const std::string word = text::to_lower_ascii(text.substr(i, j - i));
        if ((word == "yes" || word == "no" || word == "maybe") && is_allowed(word, allowed)) {
            found = word;
        }
        i = j;
    }
    return found;
}

}  // namespace

DecisionParse extract_decision(std::string_view text) {
    for (const auto line : text::split_lines(text)) {
        Decision d;
        if (is_decision_marker_line(line, d)) {
            const std::size_t line_start = static_cast<std::size_t>(line.data() - text.data());
            std::size_t after = line_start + line.size();
            if (after < text.size() && text[after] == '\n') ++after;
            return {d, DecisionSource::ParsedMarker, after};
        }
    }
    return {Decision::Reason, DecisionSource::DefaultOnParseFailure, 0};
}

std::optional<std::string> extract_answer(std::string_view text,
                                          const std::vector<std::string>& allowed_labels) {
    if (allowed_labels.empty()) throw Error("extract_answer needs allowed labels");

    if (auto a = answer_from_answer_lines(text, allowed_labels)) return a;

    bool letters = false;
    for (const auto& l : allowed_labels) letters |= (l.size() == 1);
    if (letters) {
        if (auto a = answer_from_letter_mentions(text, allowed_labels)) return a;
    } else {
        if (auto a = answer_from_word_mentions(text, allowed_labels)) return a;
    }
    return std::nullopt;
}

long long rationale_word_count(std::string_view completion) {
    long long words = 0;
    for (const auto line : text::split_lines(completion)) {
        Decision ignored;
        if (is_decision_marker_line(line, ignored)) continue;
        if (is_answer_line(line)) continue;
        words += static_cast<long long>(text::word_count(line));
    }
    return words;
}

namespace {

struct CallOutcome {
    bool ok = false;
    GenerationRecord record;
};

CallOutcome try_call(Backend& backend, const RenderedPrompt& prompt, CallRole role,
                     const RunConfig& config) {
    CallOutcome out;
    try {
        out.record = backend.complete(prompt, role, config);
        out.ok = true;
    } catch (const BackendError&) {
        out.ok = false;
    }
    return out;
}

void finalize_answer(ItemResult& r, const QAItem& item, std::string_view answer_text) {
    const auto extracted = extract_answer(answer_text, item.labels());
    if (extracted) {
        r.extracted = extracted;
        r.correct = (*extracted == item.gold);
        r.parse_failure = false;
    } else {
        r.extracted.reset();
        r.correct = false;
        r.parse_failure = true;
    }
    r.rationale_words = rationale_word_count(answer_text);
}

void mark_failed(ItemResult& r) {
    r.extracted.reset();
    r.correct = false;
    r.parse_failure = true;
}

void absorb(ItemResult& r, const GenerationRecord& rec) {
    r.total_completion_tokens += rec.completion_tokens;
    r.total_latency_seconds += rec.latency_seconds;
}

}  // namespace

namespace {

// backend_failed distinguishes "a call gave up after retries" from "a
// completion arrived but nothing parseable was in it" — both end in
// parse_failure on the result.
ItemResult run_item_impl(const QAItem& item, PromptStrategy strategy, Backend& backend,
                         const RunConfig& config, const PromptTemplates& templates,
                         std::vector<GenerationRecord>& records_out, bool& backend_failed) {
    ItemResult r;
    r.item_id = item.id;
    r.strategy = strategy;
    backend_failed = false;

    if (strategy.kind != StrategyKind::SelectiveCoT) {
        const auto prompt = render(templates, strategy, item);
        const auto call = try_call(backend, prompt, CallRole::Single, config);
        if (!call.ok) {
            backend_failed = true;
            mark_failed(r);
            return r;
        }
        records_out.push_back(call.record);
        absorb(r, call.record);
        finalize_answer(r, item, call.record.completion_text);
        return r;
    }

    if (config.selective_mode == SelectiveMode::SingleCall) {
        const auto prompt = render(templates, strategy, item);
        const auto call = try_call(backend, prompt, CallRole::Single, config);
        if (!call.ok) {
            backend_failed = true;
            r.decision = Decision::Reason;
            r.decision_source = DecisionSource::DefaultOnParseFailure;
            mark_failed(r);
            return r;
        }
        records_out.push_back(call.record);
        absorb(r, call.record);
        const auto parsed = extract_decision(call.record.completion_text);
        r.decision = parsed.decision;
        r.decision_source = parsed.source;
        // The answer lives after the marker line; with no marker the
        // whole completion is still searched.
        const std::string_view text{call.record.completion_text};
        finalize_answer(r, item, text.substr(parsed.remainder_offset));
        return r;
    }

    // Two-call mode: a decision request, then an answer request with the
    // branch's own prompt.
    const auto decision_call =
        try_call(backend, render_decision_only(templates, item), CallRole::Decision, config);
    if (!decision_call.ok) {
        backend_failed = true;
        r.decision = Decision::Reason;
        r.decision_source = DecisionSource::DefaultOnParseFailure;
        mark_failed(r);
        return r;
    }
    records_out.push_back(decision_call.record);
    absorb(r, decision_call.record);
    const auto parsed = extract_decision(decision_call.record.completion_text);
    r.decision = parsed.decision;
    r.decision_source = parsed.source;

    const auto answer_strategy = parsed.decision == Decision::Reason ? PromptStrategy::cot()
                                                                     : PromptStrategy::standard();
    const auto answer_call =
        try_call(backend, render(templates, answer_strategy, item), CallRole::Answer, config);
    if (!answer_call.ok) {
        backend_failed = true;
        mark_failed(r);
        return r;
    }
    records_out.push_back(answer_call.record);
    absorb(r, answer_call.record);
    finalize_answer(r, item, answer_call.record.completion_text);
    return r;
}

}  // namespace

ItemResult run_item(const QAItem& item, PromptStrategy strategy, Backend& backend,
                    const RunConfig& config, const PromptTemplates& templates,
                    std::vector<GenerationRecord>& records_out) {
    bool backend_failed = false;
    return run_item_impl(item, strategy, backend, config, templates, records_out, backend_failed);
}

RunOutput run_dataset(const std::vector<QAItem>& items, PromptStrategy strategy,
                      Backend& backend, const RunConfig& config,
                      const PromptTemplates& templates) {
    if (items.empty()) throw EmptyRun();
    config.validate();
    if (strategy.kind == StrategyKind::FixedLengthCoT && strategy.target_words <= 0) {
        throw ConfigError("fixed-length strategy needs a positive word target");
    }

    const std::size_t n = items.size();
    std::vector<ItemResult> results(n);
    std::vector<std::vector<GenerationRecord>> per_item(n);
    std::vector<char> backend_failed(n, 0);

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    const auto t0 = std::chrono::steady_clock::now();
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                bool failed = false;
                results[i] = run_item_impl(items[i], strategy, backend, config, templates,
                                           per_item[i], failed);
                backend_failed[i] = failed ? 1 : 0;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                break;
            }
        }
    };

    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::size_t>(static_cast<std::size_t>(config.concurrency), n));
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    RunOutput out;
    out.makespan_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.results = std::move(results);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& rec : per_item[i]) out.records.push_back(std::move(rec));
        if (out.results[i].parse_failure) ++out.n_parse_failures;
        if (backend_failed[i]) ++out.n_backend_failures;
    }
    return out;
}

}  // namespace selcot
