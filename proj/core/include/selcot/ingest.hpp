#pragma once

#include <map>
#include <string>
#include <vector>

#include "selcot/types.hpp"

namespace selcot {

// Outcome accounting for one adapter run. n_read = n_emitted + n_rejected
// always holds; rejected records are counted per reason, never dropped
// silently.
struct AdapterReport {
    Dataset dataset = Dataset::MedQAUSMLE;
    long long n_read = 0;
    long long n_emitted = 0;
    long long n_rejected = 0;
    std::map<std::string, long long> rejection_reasons;

    std::string to_json() const;
};

struct IngestResult {
    std::vector<QAItem> items;
    AdapterReport report;
};

// Each adapter reads one published source file and emits normalized items
// in source order. A file that cannot be understood at all throws
// SourceMalformed; individual bad records are counted in the report.

// Official nested-exam JSON: {"exams": {"<name>": {"data": [{qid, qtext,
// ra, answers: [{aid, atext}...]}...]}}}. Labels A.. follow answer order;
// gold is the label whose aid equals ra; id is "<exam>_<qid>".
IngestResult ingest_headqa(const std::string& source_path);

// JSONL, one question per line: {"question", "options": {"A": ...},
// "answer_idx"}. The source carries no id, so one is derived from a
// stable hash of (dataset, question, options).
IngestResult ingest_medqa_usmle(const std::string& source_path);

// JSONL: {"id", "question", "opa".."opd", "cop"}. cop is 1-based in the
// original release and 0-based in some mirrors; the adapter pre-scans and
// picks whichever base fits the whole file.
IngestResult ingest_medmcqa(const std::string& source_path);

// JSON object keyed by PMID: {"QUESTION", "CONTEXTS": [...],
// "final_decision"}. Context sections are joined with blank lines;
// options are fixed to yes/no/maybe.
IngestResult ingest_pubmedqa(const std::string& source_path);

IngestResult ingest(Dataset dataset, const std::string& source_path);

// Normalized-record JSONL io (one QAItem object per line, LF endings).
void write_items_jsonl(const std::vector<QAItem>& items, const std::string& path);
std::vector<QAItem> read_items_jsonl(const std::string& path);

// Evaluation-subset size the bundled reference figures use for this
// dataset; an ingested file of any other size gets a warning, not an
// error, because the subsampling procedure is not published.
inline constexpr long long kHeadQAExpectedTestCount = 244;

}  // namespace selcot
