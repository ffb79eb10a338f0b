#include "selcot/io.hpp"

#include <fstream>
#include <sstream>

#include "selcot/errors.hpp"
#include "selcot/text.hpp"

namespace selcot {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SourceMalformed(path, 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << content;
    if (!out) throw Error("write failed: " + path);
}

namespace {

template <typename T, typename Parse>
std::vector<T> read_jsonl(const std::string& path, Parse parse) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SourceMalformed(path, 0, "cannot open file");
    std::vector<T> out;
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(parse(line));
        } catch (const Error& e) {
            throw SourceMalformed(path, line_no, e.what());
        }
    }
    return out;
}

template <typename T>
void write_jsonl(const std::vector<T>& values, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    for (const auto& v : values) out << to_json_line(v) << '\n';
    if (!out) throw Error("write failed: " + path);
}

}  // namespace

void write_results_jsonl(const std::vector<ItemResult>& results, const std::string& path) {
    write_jsonl(results, path);
}

std::vector<ItemResult> read_results_jsonl(const std::string& path) {
    return read_jsonl<ItemResult>(path, [](const std::string& l) {
        return item_result_from_json_line(l);
    });
}

void write_records_jsonl(const std::vector<GenerationRecord>& records, const std::string& path) {
    write_jsonl(records, path);
}

std::vector<GenerationRecord> read_records_jsonl(const std::string& path) {
    return read_jsonl<GenerationRecord>(path, [](const std::string& l) {
        return generation_record_from_json_line(l);
    });
}

}  // namespace selcot
