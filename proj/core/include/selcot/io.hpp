#pragma once

#include <string>
#include <vector>

#include "selcot/types.hpp"

namespace selcot {

// Whole-file text io. Readers throw SourceMalformed (cannot open / bad
// line), writers throw Error on failure. JSONL writers emit one record
// per line with LF endings, matching the *_from_json_line parsers.

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

void write_results_jsonl(const std::vector<ItemResult>& results, const std::string& path);
std::vector<ItemResult> read_results_jsonl(const std::string& path);

void write_records_jsonl(const std::vector<GenerationRecord>& records, const std::string& path);
std::vector<GenerationRecord> read_records_jsonl(const std::string& path);

}  // namespace selcot
