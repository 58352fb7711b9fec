#include "parnn/benchmark.hpp"

#include "parnn/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace parnn {

ModelKind model_from_string(const std::string &name) {
    if (name == "arima") return ModelKind::arima;
    if (name == "arnn") return ModelKind::arnn;
    if (name == "parnn") return ModelKind::parnn;
    throw std::invalid_argument("unknown model '" + name +
                                "' (expected arima|arnn|parnn)");
}

std::string to_string(ModelKind m) {
    switch (m) {
    case ModelKind::arima: return "arima";
    case ModelKind::arnn: return "arnn";
    case ModelKind::parnn: return "parnn";
    }
    return "unknown";
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string sanitize(const std::string &name) {
    std::string out = name;
    for (char &c : out) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') {
            c = '_';
        }
    }
    return out;
}

void write_forecast_svg(const ForecastPlotData &data, const std::string &path) {
    const long n_hist = static_cast<long>(data.history.size());
    const long h = static_cast<long>(data.point.size());
    const long total = n_hist + h;
    if (total < 2) {
        throw std::invalid_argument("not enough points to draw");
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    auto absorb = [&](const std::vector<double> &v) {
        for (double x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    };
    absorb(data.history);
    absorb(data.point);
    absorb(data.lower);
    absorb(data.upper);
    absorb(data.actual_future);
    if (!(hi > lo)) {
        hi = lo + 1.0;
    }

    const double width = 900.0, height = 420.0;
    const double ml = 70.0, mr = 20.0, mt = 20.0, mb = 40.0;
    auto sx = [&](double t) {
        return ml + (width - ml - mr) * t / static_cast<double>(total - 1);
    };
    auto sy = [&](double v) {
        return mt + (height - mt - mb) * (1.0 - (v - lo) / (hi - lo));
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";

    if (!data.lower.empty() && data.lower.size() == data.upper.size()) {
        svg << "<polygon fill=\"#7f9fce\" fill-opacity=\"0.35\" stroke=\"none\" points=\"";
        for (long i = 0; i < h; ++i) {
            svg << fmt(sx(static_cast<double>(n_hist + i))) << ","
                << fmt(sy(data.upper[static_cast<std::size_t>(i)])) << " ";
        }
        for (long i = h - 1; i >= 0; --i) {
            svg << fmt(sx(static_cast<double>(n_hist + i))) << ","
                << fmt(sy(data.lower[static_cast<std::size_t>(i)])) << " ";
        }
        svg << "\"/>\n";
    }

    auto polyline = [&](const std::vector<double> &v, long offset, const char *color) {
        if (v.empty()) {
            return;
        }
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < v.size(); ++i) {
            svg << fmt(sx(static_cast<double>(offset + static_cast<long>(i)))) << ","
                << fmt(sy(v[i])) << " ";
        }
        svg << "\"/>\n";
    };
    polyline(data.history, 0, "#222222");
    polyline(data.actual_future, n_hist, "#c03030");
    polyline(data.point, n_hist, "#2050c0");

    svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"#444444\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"#444444\"/>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << sy(hi) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(hi) << "</text>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << sy(lo) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(lo) << "</text>\n";
    svg << "<text x=\"" << ml << "\" y=\"" << height - mb + 16
        << "\" font-size=\"11\">t=" << data.origin_index << "</text>\n";
    svg << "</svg>\n";

    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot open '" + path + "' for writing");
    }
    out << svg.str();
}

struct CellFit {
    TimeSeries forecast;
    int p = 0, d = 0, q = 0, k = 0;
    std::optional<IntervalForecast> interval;
};

CellFit fit_and_forecast(ModelKind model, const ChronoSplit &split, int h,
                         const BenchmarkOptions &opts, std::uint64_t cell_seed) {
    TimeSeries fit_series = split.train;
    if (opts.refit_on_validation) {
        fit_series.values.insert(fit_series.values.end(), split.validation.values.begin(),
                                 split.validation.values.end());
    }
    // Without the refit, the model only sees the training split and the test
    // window is reached by recursing through the validation period.
    const int lead = opts.refit_on_validation ? 0 : static_cast<int>(split.validation.size());
    const int total_h = lead + h;

    CellFit out;
    switch (model) {
    case ModelKind::arima: {
        AutoArimaOptions ao = opts.parnn.arima;
        ArimaModel fitted = auto_arima(fit_series, ao);
        out.p = fitted.order.p;
        out.d = fitted.order.d;
        out.q = fitted.order.q;
        out.forecast = arima_forecast(fitted, total_h);
        break;
    }
    case ModelKind::arnn: {
        ArnnConfig cfg;
        cfg.max_p = opts.parnn.max_p;
        cfg.reps = opts.parnn.reps;
        cfg.train_cfg = opts.parnn.train_cfg;
        cfg.base_seed = cell_seed;
        cfg.threads = opts.parnn.threads;
        ArnnModel fitted = fit_arnn(fit_series, cfg);
        out.p = fitted.p;
        out.k = fitted.k;
        out.forecast = arnn_forecast(fitted, total_h);
        break;
    }
    case ModelKind::parnn: {
        ParnnConfig cfg = opts.parnn;
        cfg.base_seed = cell_seed;
        GridSearchResult grid = grid_search(split.train, split.validation, cfg);
        ParnnModel final_model = fit_fixed(fit_series, grid.p, grid.q, cfg);
        final_model.validation_mase = grid.mase_table(grid.p - 1, grid.q - 1);
        out.p = final_model.p;
        out.q = final_model.q;
        out.k = final_model.k;
        out.d = final_model.arima.order.d;
        out.forecast = forecast_recursive(final_model, total_h);
        if (opts.with_intervals) {
            SimulationConfig sim = opts.sim;
            sim.seed = cell_seed + 500009ULL;
            sim.threads = opts.parnn.threads;
            PathMatrix paths = simulate_paths(final_model, total_h, sim);
            PathMatrix window;
            window.values = paths.values.rightCols(h);
            window.clamped_paths = paths.clamped_paths;
            IntervalForecast iv = percentile_interval(window, sim.level);
            iv.point.assign(out.forecast.values.end() - h, out.forecast.values.end());
            out.interval = std::move(iv);
        }
        break;
    }
    }
    if (lead > 0) {
        out.forecast.values.erase(out.forecast.values.begin(),
                                  out.forecast.values.begin() + lead);
        out.forecast.origin_index += lead;
    }
    return out;
}

} // namespace

BenchmarkReport run_benchmark(const BenchmarkOptions &opts) {
    if (opts.datasets.empty()) {
        throw std::invalid_argument("benchmark needs at least one dataset");
    }
    if (opts.models.empty() || opts.terms.empty()) {
        throw std::invalid_argument("benchmark needs at least one model and one term");
    }

    BenchmarkReport report;
    std::uint64_t cell_index = 0;

    for (std::size_t d_idx = 0; d_idx < opts.datasets.size(); ++d_idx) {
        const DatasetSpec &spec = opts.datasets[d_idx];
        TimeSeries series;
        std::string load_error;
        try {
            series = load_csv(spec);
        } catch (const std::exception &e) {
            load_error = e.what();
        }

        for (Term term : opts.terms) {
            ChronoSplit split;
            int h = 0;
            std::string split_error = load_error;
            if (split_error.empty()) {
                try {
                    h = horizon_for(spec.frequency, term,
                                    static_cast<int>(series.size()));
                    split = chronological_split(series, h);
                } catch (const std::exception &e) {
                    split_error = e.what();
                }
            }

            for (ModelKind model : opts.models) {
                BenchmarkCell cell;
                cell.dataset = spec.name;
                cell.term = term;
                cell.model = model;
                cell.horizon = h;
                const std::uint64_t cell_seed =
                    opts.parnn.base_seed + cell_index * 1000003ULL;
                ++cell_index;

                if (!split_error.empty()) {
                    cell.error = split_error;
                    report.cells.push_back(std::move(cell));
                    continue;
                }

                const auto t0 = std::chrono::steady_clock::now();
                try {
                    CellFit fit = fit_and_forecast(model, split, h, opts, cell_seed);
                    EvalContext ctx;
                    ctx.train = split.train;
                    if (opts.refit_on_validation) {
                        ctx.train.values.insert(ctx.train.values.end(),
                                                split.validation.values.begin(),
                                                split.validation.values.end());
                    }
                    ctx.actual = split.test.values;
                    ctx.predicted = fit.forecast.values;
                    ctx.seasonal_period = spec.seasonal_period;
                    cell.mase_score = mase(ctx);
                    cell.rmse_score = rmse(ctx.actual, ctx.predicted);
                    cell.smape_score = smape(ctx.actual, ctx.predicted);
                    cell.p = fit.p;
                    cell.d = fit.d;
                    cell.q = fit.q;
                    cell.k = fit.k;
                    cell.ok = true;

                    ForecastPlotData plot;
                    plot.history = ctx.train.values;
                    plot.actual_future = split.test.values;
                    plot.point = fit.forecast.values;
                    if (fit.interval) {
                        plot.lower = fit.interval->lower;
                        plot.upper = fit.interval->upper;
                    }
                    plot.origin_index = series.origin_index;
                    cell.plot = std::move(plot);
                } catch (const std::exception &e) {
                    cell.error = e.what();
                }
                const auto t1 = std::chrono::steady_clock::now();
                cell.seconds = std::chrono::duration<double>(t1 - t0).count();
                report.cells.push_back(std::move(cell));
            }
        }
    }

    const bool any_ok =
        std::any_of(report.cells.begin(), report.cells.end(),
                    [](const BenchmarkCell &c) { return c.ok; });
    if (!any_ok) {
        throw EstimationError("benchmark produced no completed cells");
    }

    // Score table over (dataset, term) columns where every model completed.
    const long kappa = static_cast<long>(opts.models.size());
    std::vector<std::string> columns;
    std::vector<std::vector<double>> column_scores;
    for (std::size_t d_idx = 0; d_idx < opts.datasets.size(); ++d_idx) {
        for (Term term : opts.terms) {
            std::vector<double> scores;
            for (ModelKind model : opts.models) {
                const auto it = std::find_if(
                    report.cells.begin(), report.cells.end(),
                    [&](const BenchmarkCell &c) {
                        return c.dataset == opts.datasets[d_idx].name && c.term == term &&
                               c.model == model && c.ok;
                    });
                if (it == report.cells.end()) {
                    break;
                }
                scores.push_back(it->mase_score);
            }
            if (static_cast<long>(scores.size()) == kappa) {
                columns.push_back(opts.datasets[d_idx].name + ":" + to_string(term));
                column_scores.push_back(std::move(scores));
            }
        }
    }

    if (kappa >= 2 && !columns.empty()) {
        ScoreTable table;
        for (ModelKind model : opts.models) {
            table.model_names.push_back(to_string(model));
        }
        table.dataset_names = columns;
        table.scores.resize(kappa, static_cast<long>(columns.size()));
        for (std::size_t j = 0; j < column_scores.size(); ++j) {
            for (long i = 0; i < kappa; ++i) {
                table.scores(i, static_cast<long>(j)) =
                    column_scores[j][static_cast<std::size_t>(i)];
            }
        }
        report.rank_matrix = rank_scores(table);
        report.mase_scores = std::move(table);

        if (kappa >= 3 && columns.size() >= 2) {
            report.friedman = friedman_test(*report.rank_matrix);
        } else {
            report.notice = "Friedman test skipped: needs >= 3 models and >= 2 "
                            "completed dataset/term columns";
        }
        report.mcb = mcb_intervals(*report.rank_matrix, 0.05);
    } else {
        report.notice = "significance tests skipped: fewer than 2 models or no "
                        "complete columns";
    }

    if (!opts.out_dir.empty()) {
        write_report_files(report, opts);
    }
    return report;
}

void emit_forecast_plot_data(const ForecastPlotData &data, const std::string &csv_path,
                             const std::string &svg_path) {
    std::ofstream out(csv_path);
    if (!out) {
        throw DataError("cannot open '" + csv_path + "' for writing");
    }
    out << "t,actual_or_blank,point,lower,upper,segment\n";
    const bool with_bounds = !data.lower.empty();
    long t = data.origin_index;
    for (double v : data.history) {
        out << t++ << "," << fmt(v) << ",,,,history\n";
    }
    for (std::size_t i = 0; i < data.point.size(); ++i) {
        out << t++ << ",";
        if (i < data.actual_future.size()) {
            out << fmt(data.actual_future[i]);
        }
        out << "," << fmt(data.point[i]) << ",";
        if (with_bounds) {
            out << fmt(data.lower[i]);
        }
        out << ",";
        if (with_bounds) {
            out << fmt(data.upper[i]);
        }
        out << ",forecast\n";
    }
    out.close();

    if (!svg_path.empty()) {
        write_forecast_svg(data, svg_path);
    }
}

void write_report_files(const BenchmarkReport &report, const BenchmarkOptions &opts) {
    namespace fs = std::filesystem;
    if (opts.out_dir.empty()) {
        throw std::invalid_argument("out_dir must be set to write report files");
    }
    fs::create_directories(opts.out_dir);
    const fs::path base(opts.out_dir);

    {
        std::ofstream out(base / "report.csv");
        out << "dataset,term,model,status,mase,rmse,smape,p,d,q,k,horizon,error\n";
        for (const BenchmarkCell &c : report.cells) {
            out << c.dataset << "," << to_string(c.term) << "," << to_string(c.model)
                << "," << (c.ok ? "ok" : "failed") << ",";
            if (c.ok) {
                out << fmt(c.mase_score) << "," << fmt(c.rmse_score) << ","
                    << fmt(c.smape_score);
            } else {
                out << ",,";
            }
            out << "," << c.p << "," << c.d << "," << c.q << "," << c.k << ","
                << c.horizon << ",";
            std::string err = c.error;
            std::replace(err.begin(), err.end(), ',', ';');
            std::replace(err.begin(), err.end(), '\n', ' ');
            out << err << "\n";
        }
    }

    {
        std::ofstream out(base / "runtimes.csv");
        out << "dataset,term,model,seconds\n";
        for (const BenchmarkCell &c : report.cells) {
            out << c.dataset << "," << to_string(c.term) << "," << to_string(c.model)
                << "," << fmt(c.seconds) << "\n";
        }
    }

    {
        std::ofstream out(base / "ranks.csv");
        if (report.rank_matrix) {
            const RankMatrix &rm = *report.rank_matrix;
            out << "model,avg_rank";
            for (const std::string &col : report.mase_scores->dataset_names) {
                out << "," << col;
            }
            out << "\n";
            for (long i = 0; i < rm.ranks.rows(); ++i) {
                out << rm.model_names[static_cast<std::size_t>(i)] << ","
                    << fmt(rm.avg_ranks(i));
                for (long j = 0; j < rm.ranks.cols(); ++j) {
                    out << "," << fmt(rm.ranks(i, j));
                }
                out << "\n";
            }
        } else {
            out << "model,avg_rank\n";
        }
    }

    {
        std::ofstream out(base / "friedman.txt");
        if (report.friedman) {
            const FriedmanResult &fr = *report.friedman;
            out << "chi2_F = " << fmt(fr.chi2_f) << "\n";
            out << "F_F = " << fmt(fr.f_f) << "\n";
            out << "df1 = " << fr.df1 << "\n";
            out << "df2 = " << fr.df2 << "\n";
            out << "critical value (5%) = " << fmt(fr.critical_5pct) << "\n";
            out << "reject equal-performance null at 5%: "
                << (fr.reject_at_5pct ? "yes" : "no") << "\n";
            if (fr.degenerate) {
                out << "note: ranks agree perfectly across columns; F statistic is "
                       "infinite\n";
            }
        } else {
            out << (report.notice.empty() ? "Friedman test not computed"
                                          : report.notice)
                << "\n";
        }
    }

    {
        std::ofstream out(base / "mcb.csv");
        out << "model,avg_rank,lower,upper,significantly_worse_than_best\n";
        if (report.mcb) {
            for (const McbEntry &e : report.mcb->entries) {
                out << e.model << "," << fmt(e.avg_rank) << "," << fmt(e.lower) << ","
                    << fmt(e.upper) << "," << (e.significantly_worse_than_best ? 1 : 0)
                    << "\n";
            }
        }
    }

    for (const BenchmarkCell &c : report.cells) {
        if (!c.plot) {
            continue;
        }
        const std::string stem = sanitize(c.dataset) + "_" + to_string(c.term) + "_" +
                                 to_string(c.model) + "_forecast";
        const std::string csv_path = (base / (stem + ".csv")).string();
        const std::string svg_path =
            opts.svg ? (base / (stem + ".svg")).string() : std::string();
        emit_forecast_plot_data(*c.plot, csv_path, svg_path);
    }
}

} // namespace parnn
