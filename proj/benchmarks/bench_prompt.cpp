#include <benchmark/benchmark.h>

#include <string>

#include "selcot/prompt.hpp"

using namespace selcot;

namespace {

QAItem sample_item() {
    QAItem it;
    it.id = "bench-1";
    it.dataset = Dataset::MedQAUSMLE;
    it.question =
        "A 54-year-old presents with crushing substernal chest pain radiating "
        "to the left arm, diaphoresis, and nausea for the last 40 minutes. "
        "Which next step is most appropriate?";
    it.options = {{"A", "Immediate ECG"},
                  {"B", "Discharge home"},
                  {"C", "Elective stress test in 2 weeks"},
                  {"D", "Oral antacids and reassess"}};
    it.gold = "A";
    return it;
}

}  // namespace

static void BM_render_standard(benchmark::State& state) {
    const auto templates = PromptTemplates::builtin();
    const auto item = sample_item();
    for (auto _ : state) {
        benchmark::DoNotOptimize(render(templates, PromptStrategy::standard(), item));
    }
}
BENCHMARK(BM_render_standard);

static void BM_render_selective(benchmark::State& state) {
    const auto templates = PromptTemplates::builtin();
    const auto item = sample_item();
    for (auto _ : state) {
        benchmark::DoNotOptimize(render(templates, PromptStrategy::selective(), item));
    }
}
BENCHMARK(BM_render_selective);

static void BM_render_fixed(benchmark::State& state) {
    const auto templates = PromptTemplates::builtin();
    const auto item = sample_item();
    for (auto _ : state) {
        benchmark::DoNotOptimize(render(templates, PromptStrategy::fixed_length(300), item));
    }
}
BENCHMARK(BM_render_fixed);

BENCHMARK_MAIN();
