#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "selcot/engine.hpp"

using namespace selcot;

namespace {

std::string long_completion() {
    std::string text = "DECISION: REASONING\n";
    for (int i = 0; i < 40; ++i) {
        text += "The differential (option B) hinges on renal clearance; see step ";
        text += std::to_string(i);
        text += " where we weigh C. against D.\n";
    }
    text += "ANSWER: (c)\n";
    return text;
}

const std::vector<std::string> kLetters = {"A", "B", "C", "D", "E"};

}  // namespace

static void BM_extract_answer(benchmark::State& state) {
    const std::string text = long_completion();
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_answer(text, kLetters));
    }
}
BENCHMARK(BM_extract_answer);

static void BM_extract_answer_fallback(benchmark::State& state) {
    // No ANSWER line at all: forces the standalone-mention scan.
    std::string text = long_completion();
    text.resize(text.rfind("ANSWER:"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_answer(text, kLetters));
    }
}
BENCHMARK(BM_extract_answer_fallback);

static void BM_extract_decision(benchmark::State& state) {
    const std::string text = long_completion();
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_decision(text));
    }
}
BENCHMARK(BM_extract_decision);

static void BM_rationale_word_count(benchmark::State& state) {
    const std::string text = long_completion();
    for (auto _ : state) {
        benchmark::DoNotOptimize(rationale_word_count(text));
    }
}
BENCHMARK(BM_rationale_word_count);

BENCHMARK_MAIN();
