#include "selcot/ablation.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "json.hpp"
#include "selcot/errors.hpp"
#include "selcot/io.hpp"
#include "selcot/metrics.hpp"
#include "selcot/text.hpp"

namespace selcot {

using ojson = nlohmann::ordered_json;

namespace {

// Shortest decimal form that round-trips, so emitted CSV/JSON is
// bit-stable across runs.
std::string num_str(double v) {
    return ojson(v).dump();
}

}  // namespace

QuadraticFit fit_quadratic(const std::vector<std::pair<double, double>>& points) {
    std::set<double> xs;
    for (const auto& [x, y] : points) xs.insert(x);
    if (points.size() < 3 || xs.size() < 3) throw Underdetermined();

    // Center and scale x to u ∈ [−1, 1]; raw x up to 600 would push the
    // normal equations' condition number through x⁴ terms.
    const double xmin = *xs.begin();
    const double xmax = *xs.rbegin();
    const double c0 = (xmin + xmax) / 2.0;
    const double s = (xmax - xmin) / 2.0;

    double su[5] = {0, 0, 0, 0, 0};  // Σ uᵏ
    double ty[3] = {0, 0, 0};        // Σ uᵏ·y
    for (const auto& [x, y] : points) {
        const double u = (x - c0) / s;
        double p = 1.0;
        for (int k = 0; k <= 4; ++k) {
            su[k] += p;
            if (k <= 2) ty[k] += p * y;
            p *= u;
        }
    }

    // Normal equations for y ≈ p·u² + q·u + r (rows: basis u², u, 1).
    double m[3][4] = {
        {su[4], su[3], su[2], ty[2]},
        {su[3], su[2], su[1], ty[1]},
        {su[2], su[1], su[0], ty[0]},
    };

    double max_entry = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) max_entry = std::max(max_entry, std::abs(m[i][j]));
    }
    const double tol = 1e-10 * max_entry;

    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int row = col + 1; row < 3; ++row) {
            if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
        }
        if (std::abs(m[piv][col]) <= tol) throw SingularSystem();
        if (piv != col) std::swap(m[piv], m[col]);
        for (int row = col + 1; row < 3; ++row) {
            const double f = m[row][col] / m[col][col];
            for (int j = col; j < 4; ++j) m[row][j] -= f * m[col][j];
        }
    }
    double theta[3];
    for (int i = 2; i >= 0; --i) {
        double acc = m[i][3];
        for (int j = i + 1; j < 3; ++j) acc -= m[i][j] * theta[j];
        theta[i] = acc / m[i][i];
    }
    double p = theta[0];
    const double q = theta[1];
    const double r = theta[2];

    // A quadratic term that is numerically nothing is treated as absent,
    // so constant/linear data reports a = 0 and no vertex.
    const double coeff_scale = std::max({std::abs(p), std::abs(q), std::abs(r)});
    if (coeff_scale > 0 && std::abs(p) <= 1e-12 * coeff_scale) p = 0.0;

    QuadraticFit f;
    if (p == 0.0) {
        f.a = 0.0;
        f.b = q / s;
        f.c = r - q * c0 / s;
    } else {
        const double s2 = s * s;
        f.a = p / s2;
        f.b = q / s - 2.0 * p * c0 / s2;
        f.c = r - q * c0 / s + p * c0 * c0 / s2;
    }
    for (const auto& [x, y] : points) {
        const double e = y - f.at(x);
        f.rss += e * e;
    }
    if (f.a != 0.0) f.x_star = -f.b / (2.0 * f.a);
    return f;
}

std::vector<SweepPoint> run_sweep(const std::vector<int>& lengths,
                                  const std::vector<QAItem>& items, Backend& backend,
                                  const RunConfig& config, const PromptTemplates& templates,
                                  const std::string& cell_dir) {
    if (lengths.empty()) throw ConfigError("sweep needs at least one length");
    for (const int n : lengths) {
        if (n <= 0) throw ConfigError("sweep lengths must be positive");
    }
    if (std::set<int>(lengths.begin(), lengths.end()).size() != lengths.size()) {
        throw ConfigError("sweep lengths must be distinct");
    }
    if (!cell_dir.empty()) std::filesystem::create_directories(cell_dir);

    std::vector<SweepPoint> out;
    for (const int n : lengths) {
        const PromptStrategy strategy = PromptStrategy::fixed_length(n);
        std::vector<ItemResult> results;
        std::string cell_path;
        if (!cell_dir.empty()) {
            cell_path = cell_dir + "/fixed_" + std::to_string(n) + ".results.jsonl";
        }

        if (!cell_path.empty() && std::filesystem::exists(cell_path)) {
            results = read_results_jsonl(cell_path);
            if (results.empty() || results.front().strategy != strategy) {
                throw ConfigError("stale sweep cell (different strategy): " + cell_path);
            }
        } else {
            auto run = run_dataset(items, strategy, backend, config, templates);
            results = std::move(run.results);
            if (!cell_path.empty()) {
                write_results_jsonl(results, cell_path);
                write_records_jsonl(run.records, cell_dir + "/fixed_" + std::to_string(n) +
                                                     ".records.jsonl");
            }
        }

        const EvalSummary s = summarize(results, SummaryMeta{});
        out.push_back({n, s.accuracy, s.total_tokens, s.total_time_seconds});
    }
    return out;
}

SelectiveRunStats selective_stats_from_results(const std::vector<ItemResult>& results) {
    if (results.empty()) throw EmptyRun();

    SelectiveRunStats st;
    long long n_correct = 0;
    long long reason_words = 0;
    for (const auto& r : results) {
        if (r.strategy.kind != StrategyKind::SelectiveCoT) throw MixedStrategies();
        st.n_items += 1;
        n_correct += r.correct ? 1 : 0;
        st.total_tokens += r.total_completion_tokens;
        st.total_time_seconds += r.total_latency_seconds;
        if (r.decision && *r.decision == Decision::Reason) {
            st.n_reason += 1;
            reason_words += r.rationale_words;
        }
    }
    st.accuracy = static_cast<double>(n_correct) / static_cast<double>(st.n_items);
    if (st.n_reason > 0) {
        st.mean_reason_rationale_words =
            static_cast<double>(reason_words) / static_cast<double>(st.n_reason);
    }
    return st;
}

ComparisonReport compare_selective(const QuadraticFit& fit, const std::vector<SweepPoint>& points,
                                   const SelectiveRunStats& selective) {
    if (points.empty()) throw ConfigError("comparison needs the sweep points");

    ComparisonReport rep;
    rep.fit = fit;
    rep.selective_x = selective.mean_reason_rationale_words;
    rep.selective_accuracy = selective.accuracy;
    rep.fitted_accuracy_at_x = fit.at(rep.selective_x);
    rep.residual = rep.selective_accuracy - rep.fitted_accuracy_at_x;
    rep.on_or_above = rep.residual >= 0.0;

    const SweepPoint* nearest = &points.front();
    for (const auto& pt : points) {
        if (std::abs(pt.target_words - rep.selective_x) <
            std::abs(nearest->target_words - rep.selective_x)) {
            nearest = &pt;
        }
    }
    rep.nearest_target_words = nearest->target_words;
    if (nearest->total_tokens > 0) {
        rep.token_ratio = static_cast<double>(selective.total_tokens) /
                          static_cast<double>(nearest->total_tokens);
    }
    if (nearest->total_time_seconds > 0) {
        rep.time_ratio = selective.total_time_seconds / nearest->total_time_seconds;
    }
    return rep;
}

static constexpr const char* kSweepHeader =
    "target_words,accuracy,total_tokens,total_time_seconds";

std::string sweep_csv(const std::vector<SweepPoint>& points) {
    std::string out = std::string(kSweepHeader) + "\n";
    for (const auto& p : points) {
        out += std::to_string(p.target_words) + ',' + num_str(p.accuracy) + ',' +
               std::to_string(p.total_tokens) + ',' + num_str(p.total_time_seconds) + '\n';
    }
    return out;
}

std::vector<SweepPoint> sweep_from_csv(const std::string& csv_text) {
    const auto lines = text::split_lines(csv_text);
    if (lines.empty() || text::trim(lines[0]) != kSweepHeader) {
        throw Error("sweep csv: missing or wrong header");
    }
    std::vector<SweepPoint> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (text::trim(lines[i]).empty()) continue;
        std::vector<std::string> cols;
        std::string cur;
        for (const char c : lines[i]) {
            if (c == ',') {
                cols.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        cols.push_back(cur);
        if (cols.size() != 4) throw Error("sweep csv: row needs 4 columns");
        try {
            SweepPoint p;
            p.target_words = std::stoi(cols[0]);
            p.accuracy = std::stod(cols[1]);
            p.total_tokens = std::stoll(cols[2]);
            p.total_time_seconds = std::stod(cols[3]);
            out.push_back(p);
        } catch (const std::exception&) {
            throw Error("sweep csv: unparseable row " + std::to_string(i + 1));
        }
    }
    return out;
}

std::string fit_report_json(const ComparisonReport& report) {
    ojson j;
    j["fit"] = ojson{{"a", report.fit.a},
                     {"b", report.fit.b},
                     {"c", report.fit.c},
                     {"rss", report.fit.rss},
                     {"x_star", report.fit.x_star ? ojson(*report.fit.x_star) : ojson(nullptr)}};
    j["selective"] = ojson{{"x_mean_rationale_words", report.selective_x},
                           {"accuracy", report.selective_accuracy},
                           {"fitted_accuracy_at_x", report.fitted_accuracy_at_x},
                           {"residual", report.residual},
                           {"on_or_above", report.on_or_above}};
    j["nearest_sweep_point"] =
        ojson{{"target_words", report.nearest_target_words},
              {"token_ratio", report.token_ratio ? ojson(*report.token_ratio) : ojson(nullptr)},
              {"time_ratio", report.time_ratio ? ojson(*report.time_ratio) : ojson(nullptr)}};
    return j.dump(2);
}

std::string plot_data_csv(const ComparisonReport& report, const std::vector<SweepPoint>& points) {
    if (points.empty()) throw ConfigError("plot data needs the sweep points");
    int lo = points.front().target_words;
    int hi = points.front().target_words;
    for (const auto& p : points) {
        lo = std::min(lo, p.target_words);
        hi = std::max(hi, p.target_words);
    }

    std::string out = "series,x,y\n";
    for (int k = 0; k <= 100; ++k) {
        const double x = lo + (hi - lo) * (static_cast<double>(k) / 100.0);
        out += "curve," + num_str(x) + ',' + num_str(report.fit.at(x)) + '\n';
    }
    for (const auto& p : points) {
        out += "sweep," + std::to_string(p.target_words) + ',' + num_str(p.accuracy) + '\n';
    }
    out += "selective," + num_str(report.selective_x) + ',' + num_str(report.selective_accuracy) +
           '\n';
    return out;
}

}  // namespace selcot
