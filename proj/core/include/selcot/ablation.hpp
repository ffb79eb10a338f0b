#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selcot/backend.hpp"
#include "selcot/engine.hpp"
#include "selcot/types.hpp"

namespace selcot {

// One fixed-length cell of the length sweep.
struct SweepPoint {
    int target_words = 0;
    double accuracy = 0.0;
    long long total_tokens = 0;
    double total_time_seconds = 0.0;

    bool operator==(const SweepPoint&) const = default;
};

// y = a·x² + b·x + c in the original (word-count) coordinates.
struct QuadraticFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double rss = 0.0;
    std::optional<double> x_star;  // −b/(2a), present iff a ≠ 0

    double at(double x) const { return (a * x + b) * x + c; }
};

// Least-squares quadratic through (x, y) points: x is centered and
// scaled to [−1, 1], the 3×3 normal equations are solved by Gaussian
// elimination with partial pivoting, and the coefficients are mapped
// back analytically. Throws Underdetermined with fewer than 3 distinct
// x values and SingularSystem when the scaled system is numerically
// rank-deficient (relative pivot tolerance 1e-10).
QuadraticFit fit_quadratic(const std::vector<std::pair<double, double>>& points);

// Runs one fixed-length evaluation per requested length. When cell_dir
// is non-empty, each cell's results are persisted there as
// fixed_<N>.results.jsonl and an existing file is loaded instead of
// re-run, so an interrupted sweep resumes where it stopped.
std::vector<SweepPoint> run_sweep(const std::vector<int>& lengths,
                                  const std::vector<QAItem>& items, Backend& backend,
                                  const RunConfig& config,
                                  const PromptTemplates& templates = PromptTemplates::builtin(),
                                  const std::string& cell_dir = "");

// What a selective run contributes to the length–accuracy picture. The
// x coordinate is the mean generated rationale length over items routed
// to Reason — the only length intrinsic to a selective run.
struct SelectiveRunStats {
    long long n_items = 0;
    long long n_reason = 0;
    double accuracy = 0.0;
    long long total_tokens = 0;
    double total_time_seconds = 0.0;
    double mean_reason_rationale_words = 0.0;
};

SelectiveRunStats selective_stats_from_results(const std::vector<ItemResult>& results);

struct ComparisonReport {
    QuadraticFit fit;
    double selective_x = 0.0;
    double selective_accuracy = 0.0;
    double fitted_accuracy_at_x = 0.0;
    double residual = 0.0;  // selective_accuracy − fitted value; ≥ 0 means on-or-above
    bool on_or_above = false;
    int nearest_target_words = 0;
    std::optional<double> token_ratio;  // selective / nearest sweep point
    std::optional<double> time_ratio;
};

// Places the selective run against the fitted curve and its nearest
// sweep point (by |target_words − selective_x|).
ComparisonReport compare_selective(const QuadraticFit& fit, const std::vector<SweepPoint>& points,
                                   const SelectiveRunStats& selective);

// File formats for the sweep/fit CLI surface.
std::string sweep_csv(const std::vector<SweepPoint>& points);
std::vector<SweepPoint> sweep_from_csv(const std::string& csv_text);
std::string fit_report_json(const ComparisonReport& report);

// series,x,y rows: 101 samples of the fitted curve across the swept
// range, every raw sweep point, and the selective reference point.
std::string plot_data_csv(const ComparisonReport& report, const std::vector<SweepPoint>& points);

}  // namespace selcot
