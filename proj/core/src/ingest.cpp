#include "selcot/ingest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "selcot/errors.hpp"
#include "selcot/text.hpp"

namespace selcot {

using ojson = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SourceMalformed(path, 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ojson parse_whole_file(const std::string& path) {
    ojson j = ojson::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw SourceMalformed(path, 0, "not valid JSON");
    return j;
}

// Shared bookkeeping: push a validated item or count the rejection.
class Collector {
public:
    Collector(Dataset dataset, std::vector<QAItem>& items, AdapterReport& report)
        : items_(items), report_(report) {
        report_.dataset = dataset;
    }

    void offer(QAItem candidate) {
        ++report_.n_read;
        try {
            QAItem item = validate_item(std::move(candidate));
            if (!seen_ids_.insert(item.id).second) throw InvalidItem("duplicate id");
            items_.push_back(std::move(item));
            ++report_.n_emitted;
        } catch (const InvalidItem& e) {
            reject(e.reason);
        }
    }

    void reject(const std::string& reason) {
        ++report_.n_rejected;
        ++report_.rejection_reasons[reason];
    }

    // For candidates that failed before reaching offer(); offer() itself
    // counts the read, so its internal rejections go through reject().
    void reject_unread(const std::string& reason) {
        ++report_.n_read;
        reject(reason);
    }

private:
    std::vector<QAItem>& items_;
    AdapterReport& report_;
    std::set<std::string> seen_ids_;
};

bool get_string(const ojson& j, const char* key, std::string& out) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return false;
    out = it->get<std::string>();
    return true;
}

// qid/ra/aid are integers in the published file and strings in some
// mirrors; both spellings carry the same identifier.
bool get_scalar(const ojson& j, const char* key, std::string& out) {
    auto it = j.find(key);
    if (it == j.end()) return false;
    if (it->is_string()) {
        out = it->get<std::string>();
        return true;
    }
    if (it->is_number_integer()) {
        out = std::to_string(it->get<long long>());
        return true;
    }
    return false;
}

std::string label_for_index(std::size_t i) {
    return std::string(1, static_cast<char>('A' + i));
}

}  // namespace

std::string AdapterReport::to_json() const {
    ojson j;
    j["dataset"] = std::string(to_string(dataset));
    j["n_read"] = n_read;
    j["n_emitted"] = n_emitted;
    j["n_rejected"] = n_rejected;
    ojson reasons = ojson::object();
    for (const auto& [reason, count] : rejection_reasons) reasons[reason] = count;
    j["rejection_reasons"] = std::move(reasons);
    return j.dump();
}

IngestResult ingest_headqa(const std::string& source_path) {
    const ojson root = parse_whole_file(source_path);
    if (!root.is_object() || !root.contains("exams") || !root["exams"].is_object()) {
        throw SourceMalformed(source_path, 0, "expected top-level object with an 'exams' object");
    }

    IngestResult out;
    Collector sink(Dataset::HeadQA, out.items, out.report);

    for (const auto& [exam_name, exam] : root["exams"].items()) {
        if (!exam.is_object() || !exam.contains("data") || !exam["data"].is_array()) {
            throw SourceMalformed(source_path, 0, "exam '" + exam_name + "' has no 'data' array");
        }
        for (const auto& q : exam["data"]) {
            if (!q.is_object()) {
                sink.reject_unread("malformed question entry");
                continue;
            }
            std::string qid, qtext, ra;
            if (!get_scalar(q, "qid", qid) || !get_string(q, "qtext", qtext) ||
                !get_scalar(q, "ra", ra)) {
                sink.reject_unread("missing qid/qtext/ra");
                continue;
            }
            auto answers = q.find("answers");
            if (answers == q.end() || !answers->is_array()) {
                sink.reject_unread("missing answers array");
                continue;
            }

            QAItem item;
            item.id = exam_name + "_" + qid;
            item.dataset = Dataset::HeadQA;
            item.question = qtext;
            bool ok = true;
            for (std::size_t i = 0; i < answers->size(); ++i) {
                const auto& a = (*answers)[i];
                std::string aid, atext;
                if (!a.is_object() || !get_scalar(a, "aid", aid) || !get_string(a, "atext", atext)) {
                    ok = false;
                    break;
                }
                item.options.push_back({label_for_index(i), atext});
                if (aid == ra) item.gold = item.options.back().label;
            }
            if (!ok) {
                sink.reject_unread("malformed answer entry");
                continue;
            }
            if (item.gold.empty()) {
                sink.reject_unread("answer index out of range");
                continue;
            }
            sink.offer(std::move(item));
        }
    }
    return out;
}

IngestResult ingest_medqa_usmle(const std::string& source_path) {
    std::ifstream in(source_path, std::ios::binary);
    if (!in) throw SourceMalformed(source_path, 0, "cannot open file");

    IngestResult out;
    Collector sink(Dataset::MedQAUSMLE, out.items, out.report);

    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        const ojson j = ojson::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            sink.reject_unread("malformed json");
            continue;
        }
        std::string question, answer_idx;
        if (!get_string(j, "question", question) || !get_string(j, "answer_idx", answer_idx)) {
            sink.reject_unread("missing question/answer_idx");
            continue;
        }
        auto options = j.find("options");
        if (options == j.end() || !options->is_object()) {
            sink.reject_unread("missing options object");
            continue;
        }

        QAItem item;
        item.dataset = Dataset::MedQAUSMLE;
        item.question = question;
        item.gold = answer_idx;
        bool ok = true;
        for (const auto& [label, value] : options->items()) {
            if (!value.is_string()) {
                ok = false;
                break;
            }
            item.options.push_back({label, value.get<std::string>()});
        }
        if (!ok) {
            sink.reject_unread("non-string option text");
            continue;
        }

        // The source has no id field; derive one that is stable across
        // runs and across files containing the same question.
        std::string key = "medqa-usmle|" + item.question;
        for (const auto& o : item.options) key += "|" + o.label + "=" + o.text;
        item.id = "medqa-" + text::hex16(text::fnv1a64(key));

        sink.offer(std::move(item));
    }
    return out;
}

IngestResult ingest_medmcqa(const std::string& source_path) {
    const std::string body = read_file(source_path);

    // cop ("correct option") is 1-based in the original release and
    // 0-based in some mirrors. A file is read with one consistent base:
    // any cop == 0 forces 0-based; 0 and 4 together cannot both fit.
    bool saw_zero = false, saw_four = false;
    {
        std::istringstream scan(body);
        std::string line;
        while (std::getline(scan, line)) {
            if (text::trim(line).empty()) continue;
            const ojson j = ojson::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object()) continue;
            auto cop = j.find("cop");
            if (cop == j.end() || !cop->is_number_integer()) continue;
            const long long v = cop->get<long long>();
            saw_zero |= (v == 0);
            saw_four |= (v == 4);
        }
    }
    if (saw_zero && saw_four) {
        throw SourceMalformed(source_path, 0, "cop values mix 0-based and 1-based ranges");
    }
    const int cop_base = saw_zero ? 0 : 1;

    IngestResult out;
    Collector sink(Dataset::MedMCQA, out.items, out.report);

    static constexpr const char* kOptionKeys[] = {"opa", "opb", "opc", "opd"};
    std::istringstream in(body);
    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        const ojson j = ojson::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            sink.reject_unread("malformed json");
            continue;
        }
        std::string id, question;
        if (!get_string(j, "id", id) || !get_string(j, "question", question)) {
            sink.reject_unread("missing id/question");
            continue;
        }
        auto cop = j.find("cop");
        if (cop == j.end() || !cop->is_number_integer()) {
            sink.reject_unread("missing cop");
            continue;
        }
        const long long gold_index = cop->get<long long>() - cop_base;
        if (gold_index < 0 || gold_index > 3) {
            sink.reject_unread("cop out of range");
            continue;
        }

        QAItem item;
        item.id = id;
        item.dataset = Dataset::MedMCQA;
        item.question = question;
        bool ok = true;
        for (std::size_t i = 0; i < 4; ++i) {
            std::string opt;
            if (!get_string(j, kOptionKeys[i], opt)) {
                ok = false;
                break;
            }
            item.options.push_back({label_for_index(i), opt});
        }
        if (!ok) {
            sink.reject_unread("missing option text");
            continue;
        }
        item.gold = label_for_index(static_cast<std::size_t>(gold_index));
        sink.offer(std::move(item));
    }
    return out;
}

IngestResult ingest_pubmedqa(const std::string& source_path) {
    const ojson root = parse_whole_file(source_path);
    if (!root.is_object()) {
        throw SourceMalformed(source_path, 0, "expected top-level object keyed by PMID");
    }

    IngestResult out;
    Collector sink(Dataset::PubMedQA, out.items, out.report);

    for (const auto& [pmid, entry] : root.items()) {
        if (!entry.is_object()) {
            sink.reject_unread("malformed entry");
            continue;
        }
        std::string question, decision;
        if (!get_string(entry, "QUESTION", question)) {
            sink.reject_unread("missing QUESTION");
            continue;
        }
        if (!get_string(entry, "final_decision", decision)) {
            sink.reject_unread("missing final_decision");
            continue;
        }
        auto contexts = entry.find("CONTEXTS");
        if (contexts == entry.end() || !contexts->is_array()) {
            sink.reject_unread("missing CONTEXTS");
            continue;
        }

        // One evidence passage: abstract sections joined by blank lines.
        std::string context;
        bool ok = true;
        for (const auto& c : *contexts) {
            if (!c.is_string()) {
                ok = false;
                break;
            }
            if (!context.empty()) context += "\n\n";
            context += c.get<std::string>();
        }
        if (!ok) {
            sink.reject_unread("non-string context section");
            continue;
        }

        QAItem item;
        item.id = pmid;
        item.dataset = Dataset::PubMedQA;
        item.question = question;
        item.context = std::move(context);
        item.options = {{"yes", "yes"}, {"no", "no"}, {"maybe", "maybe"}};
        item.gold = decision;
        sink.offer(std::move(item));
    }
    return out;
}

IngestResult ingest(Dataset dataset, const std::string& source_path) {
    switch (dataset) {
        case Dataset::HeadQA: return ingest_headqa(source_path);
        case Dataset::MedQAUSMLE: return ingest_medqa_usmle(source_path);
        case Dataset::MedMCQA: return ingest_medmcqa(source_path);
        case Dataset::PubMedQA: return ingest_pubmedqa(source_path);
    }
    throw Error("unknown dataset");
}

void write_items_jsonl(const std::vector<QAItem>& items, const std::string& path) {
    std::ofstream outf(path, std::ios::binary);
    if (!outf) throw Error("cannot open for writing: " + path);
    for (const auto& item : items) outf << to_json_line(item) << '\n';
    if (!outf) throw Error("write failed: " + path);
}

std::vector<QAItem> read_items_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SourceMalformed(path, 0, "cannot open file");
    std::vector<QAItem> items;
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            items.push_back(qa_item_from_json_line(line));
        } catch (const Error& e) {
            throw SourceMalformed(path, line_no, e.what());
        }
    }
    return items;
}

}  // namespace selcot
