#pragma once

// The bundled reference figures: one row per (dataset, model) pair giving
// the full-reasoning baseline and the selective variant as published —
// accuracy, completion-token total and wall-time total, each with its
// printed drop percentage (4 decimal places). baseline_correct and
// selective_correct are the correct-answer counts recovered from the
// rounded accuracies and the evaluation-subset sizes; each is the unique
// integer whose ratio to n_items reproduces the printed accuracy at
// 4 decimal places.

namespace refdata {

struct ReferenceRow {
    const char* dataset;
    const char* model;
    long long n_items;
    double baseline_accuracy;
    double selective_accuracy;
    double accuracy_drop_pct;
    long long baseline_correct;
    long long selective_correct;
    long long baseline_tokens;
    long long selective_tokens;
    double tokens_drop_pct;
    double baseline_time_s;
    double selective_time_s;
    double time_drop_pct;
};

inline constexpr ReferenceRow kReferenceRows[] = {
    {"headqa", "Llama-3.1-8B", 244, 0.7090, 0.6803, 4.0462, 173, 166,
     135504, 136880, -1.0155, 2695.1428, 2178.3438, 19.1752},
    {"headqa", "Qwen2.5-7B", 244, 0.6598, 0.7172, -8.6957, 161, 175,
     93352, 75600, 19.0162, 2574.1979, 2120.5520, 17.6228},
    {"medmcqa", "Llama-3.1-8B", 4183, 0.5826, 0.5668, 2.7082, 2437, 2371,
     2184424, 2113419, 3.2505, 45140.2206, 33378.0168, 26.0570},
    {"medmcqa", "Qwen2.5-7B", 4183, 0.5252, 0.5274, -0.4096, 2197, 2206,
     1501200, 1148503, 23.4943, 42031.0936, 32292.8344, 23.1692},
    {"medqa-usmle", "Llama-3.1-8B", 1273, 0.6465, 0.6402, 0.9721, 823, 815,
     1034709, 953726, 7.8266, 19077.2906, 13487.3329, 29.3016},
    {"medqa-usmle", "Qwen2.5-7B", 1273, 0.5711, 0.5460, 4.4017, 727, 695,
     636615, 547417, 14.0113, 18494.5302, 15517.1266, 16.0988},
    {"pubmedqa", "Llama-3.1-8B", 500, 0.7480, 0.7280, 2.6738, 374, 364,
     357037, 380567, -6.5904, 4610.8540, 4004.7968, 13.1441},
    {"pubmedqa", "Qwen2.5-7B", 500, 0.7320, 0.7280, 0.5464, 366, 364,
     207309, 110907, 46.5016, 5921.6214, 3284.0856, 44.5408},
};

inline constexpr int kReferenceRowCount =
    static_cast<int>(sizeof(kReferenceRows) / sizeof(kReferenceRows[0]));

}  // namespace refdata
