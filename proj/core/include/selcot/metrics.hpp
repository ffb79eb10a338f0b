#pragma once

#include <optional>
#include <string>
#include <vector>

#include "selcot/types.hpp"

namespace selcot {

struct SummaryMeta {
    std::string dataset;
    std::string model_name;
};

// Folds per-item outcomes into one summary cell. Counts are exact;
// accuracy is the exact ratio n_correct/n_items. Throws EmptyRun on no
// results and MixedStrategies when the results disagree on strategy.
EvalSummary summarize(const std::vector<ItemResult>& results, const SummaryMeta& meta);

// Relative change versus a baseline, in percent; positive means the
// variant is smaller (a reduction). Throws BaselineZero unless
// baseline > 0.
double drop_pct(double baseline, double variant);

// Copy of variant with its drops triple filled in against baseline.
// Components whose baseline quantity is 0 stay absent. Throws
// PairMismatch when dataset or model differ.
EvalSummary with_drops(const EvalSummary& variant, const EvalSummary& baseline);

// One table block: a baseline row and optionally a variant row whose
// drop columns are computed against it.
struct TablePair {
    EvalSummary baseline;
    std::optional<EvalSummary> variant;
};

// CSV with header dataset,model,method,acc,acc_drop_pct,tokens,
// tokens_drop_pct,time_s,time_drop_pct,makespan_s — accuracy, drops and
// seconds to 4 decimal places, token counts as integers, blank cells for
// absent values. Baseline rows leave every drop column blank.
std::string emit_table_csv(const std::vector<TablePair>& pairs);

// Same rows as JSON: an array of objects keyed like the CSV header,
// with null for blank cells.
std::string emit_table_json(const std::vector<TablePair>& pairs);

}  // namespace selcot
