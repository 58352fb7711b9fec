#pragma once

#include "parnn/arnn.hpp"
#include "parnn/csv.hpp"
#include "parnn/intervals.hpp"
#include "parnn/metrics.hpp"
#include "parnn/parnn.hpp"
#include "parnn/ranking.hpp"
#include "parnn/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace parnn {

enum class ModelKind { arima, arnn, parnn };

ModelKind model_from_string(const std::string &name);
std::string to_string(ModelKind m);

struct BenchmarkOptions {
    std::vector<DatasetSpec> datasets;
    std::vector<ModelKind> models{ModelKind::arima, ModelKind::arnn, ModelKind::parnn};
    std::vector<Term> terms{Term::short_term};
    ParnnConfig parnn;
    /// Refit the selected orders on train+validation before forecasting the
    /// test horizon (default). With false the model stays fitted on train
    /// only and the test forecast is the tail of a longer recursion.
    bool refit_on_validation = true;
    bool with_intervals = true;
    SimulationConfig sim;
    bool svg = false;
    std::string out_dir;
};

/// Rows of the plot-data CSV emitted next to each forecast.
struct ForecastPlotData {
    std::vector<double> history;       // data the forecast extends
    std::vector<double> actual_future; // known out-of-sample actuals (may be empty)
    std::vector<double> point;
    std::vector<double> lower; // empty when intervals are disabled
    std::vector<double> upper;
    long origin_index = 0;
};

/// CSV columns: t, actual_or_blank, point, lower, upper, segment. Writes a
/// companion SVG chart with the shaded interval band when svg_path is
/// nonempty.
void emit_forecast_plot_data(const ForecastPlotData &data, const std::string &csv_path,
                             const std::string &svg_path = "");

struct BenchmarkCell {
    std::string dataset;
    Term term = Term::short_term;
    ModelKind model = ModelKind::arima;
    bool ok = false;
    std::string error;
    double mase_score = 0.0;
    double rmse_score = 0.0;
    double smape_score = 0.0;
    int p = 0, d = 0, q = 0, k = 0; // chosen orders (k for network models)
    int horizon = 0;
    double seconds = 0.0;
    std::optional<ForecastPlotData> plot;
};

struct BenchmarkReport {
    std::vector<BenchmarkCell> cells;
    /// models x completed (dataset, term) columns, MASE scores.
    std::optional<ScoreTable> mase_scores;
    std::optional<RankMatrix> rank_matrix;
    std::optional<FriedmanResult> friedman;
    std::optional<McbResult> mcb;
    std::string notice; // set when significance tests were skipped
};

/// Full grid: per (dataset, term, model) derive the horizon, split
/// chronologically, fit, forecast the test window and score. Cell failures
/// are recorded and the run continues; an empty completed grid throws.
/// When out_dir is nonempty all report files are written there.
BenchmarkReport run_benchmark(const BenchmarkOptions &opts);

void write_report_files(const BenchmarkReport &report, const BenchmarkOptions &opts);

} // namespace parnn
