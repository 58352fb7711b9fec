#include "parnn/benchmark.hpp"
#include "parnn/ergodicity.hpp"
#include "parnn/errors.hpp"
#include "parnn/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitEstimation = 3;

std::vector<std::string> split_list(const std::string &csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

struct DatasetFlags {
    std::string data_path;
    std::string frequency = "daily";
    int seasonal_period = 1;
    std::string value_column = "value";
    std::string date_column = "date";

    void attach(CLI::App *cmd) {
        cmd->add_option("--data", data_path, "dataset CSV file")->required();
        cmd->add_option("--freq", frequency, "daily|weekly|monthly|quarterly");
        cmd->add_option("--seasonal-period", seasonal_period, "observations per cycle");
        cmd->add_option("--value-col", value_column, "value column name");
        cmd->add_option("--date-col", date_column, "date column name");
    }

    parnn::DatasetSpec spec() const {
        parnn::DatasetSpec s;
        s.name = std::filesystem::path(data_path).stem().string();
        s.path = data_path;
        s.frequency = parnn::frequency_from_string(frequency);
        s.seasonal_period = seasonal_period;
        s.value_column = value_column;
        s.date_column = date_column;
        return s;
    }
};

struct ModelFlags {
    std::uint64_t seed = 42;
    int reps = 500;
    int grid_reps = 20;
    int grid_max = 10;
    int epochs = 1500;
    double learning_rate = 0.05;
    unsigned threads = 0;

    void attach(CLI::App *cmd) {
        cmd->add_option("--seed", seed, "base random seed");
        cmd->add_option("--reps", reps, "final ensemble size");
        cmd->add_option("--grid-reps", grid_reps, "ensemble size during grid search");
        cmd->add_option("--grid-max", grid_max, "maximum network lag order p and q");
        cmd->add_option("--epochs", epochs, "training epochs per network");
        cmd->add_option("--learning-rate", learning_rate, "gradient descent step size");
        cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
    }

    parnn::ParnnConfig config() const {
        parnn::ParnnConfig cfg;
        cfg.base_seed = seed;
        cfg.reps = reps;
        cfg.grid_reps = grid_reps;
        cfg.max_p = grid_max;
        cfg.max_q = grid_max;
        cfg.train_cfg.epochs = epochs;
        cfg.train_cfg.learning_rate = learning_rate;
        cfg.threads = threads;
        return cfg;
    }
};

int run_fit(const DatasetFlags &data, const ModelFlags &model, const std::string &model_name) {
    const parnn::DatasetSpec spec = data.spec();
    const parnn::TimeSeries series = parnn::load_csv(spec);
    const parnn::ParnnConfig cfg = model.config();

    const parnn::ModelKind kind = parnn::model_from_string(model_name);
    switch (kind) {
    case parnn::ModelKind::arima: {
        const parnn::ArimaModel fitted = parnn::auto_arima(series, cfg.arima);
        std::printf("ARIMA(%d,%d,%d)  aic=%.4f  sigma2=%.6g%s\n", fitted.order.p,
                    fitted.order.d, fitted.order.q, fitted.aic, fitted.sigma2,
                    fitted.ma_invertible ? "" : "  [non-invertible MA]");
        break;
    }
    case parnn::ModelKind::arnn: {
        parnn::ArnnConfig acfg;
        acfg.max_p = cfg.max_p;
        acfg.reps = cfg.reps;
        acfg.train_cfg = cfg.train_cfg;
        acfg.base_seed = cfg.base_seed;
        acfg.threads = cfg.threads;
        const parnn::ArnnModel fitted = parnn::fit_arnn(series, acfg);
        std::printf("ARNN(%d,%d)  ensemble=%zu\n", fitted.p, fitted.k,
                    fitted.ensemble.size());
        break;
    }
    case parnn::ModelKind::parnn: {
        const int h = parnn::horizon_for(spec.frequency, parnn::Term::short_term,
                                         static_cast<int>(series.size()));
        const parnn::ChronoSplit split = parnn::chronological_split(series, h);
        const parnn::GridSearchResult grid =
            parnn::grid_search(split.train, split.validation, cfg);
        const parnn::ParnnModel fitted =
            parnn::fit_fixed(series, grid.p, grid.q, cfg);
        std::printf("PARNN(%d,%d,%d)  stage1=ARIMA(%d,%d,%d)  validation_mase=%.4f\n",
                    fitted.p, fitted.k, fitted.q, fitted.arima.order.p,
                    fitted.arima.order.d, fitted.arima.order.q,
                    grid.mase_table(grid.p - 1, grid.q - 1));
        break;
    }
    }
    return kExitOk;
}

int run_forecast(const DatasetFlags &data, const ModelFlags &model, int horizon,
                 double level, int paths, const std::string &out_path, bool svg) {
    const parnn::DatasetSpec spec = data.spec();
    const parnn::TimeSeries series = parnn::load_csv(spec);
    parnn::ParnnConfig cfg = model.config();

    const int split_h = std::max(1, horizon);
    const parnn::ChronoSplit split = parnn::chronological_split(series, split_h);
    const parnn::GridSearchResult grid =
        parnn::grid_search(split.train, split.validation, cfg);
    const parnn::ParnnModel fitted = parnn::fit_fixed(series, grid.p, grid.q, cfg);

    parnn::SimulationConfig sim;
    sim.n_paths = paths;
    sim.level = level;
    sim.seed = cfg.base_seed + 500009ULL;
    sim.threads = cfg.threads;
    const parnn::IntervalForecast fc = parnn::interval_forecast(fitted, horizon, sim);

    parnn::ForecastPlotData plot;
    plot.history = series.values;
    plot.point = fc.point;
    plot.lower = fc.lower;
    plot.upper = fc.upper;
    plot.origin_index = series.origin_index;

    const std::string svg_path =
        svg ? std::filesystem::path(out_path).replace_extension(".svg").string()
            : std::string();
    parnn::emit_forecast_plot_data(plot, out_path, svg_path);
    std::printf("PARNN(%d,%d,%d) forecast of %d steps written to %s\n", fitted.p,
                fitted.k, fitted.q, horizon, out_path.c_str());
    if (fc.clamped_paths > 0) {
        std::printf("note: %d of %d simulated paths were clamped at the transform "
                    "boundary\n",
                    fc.clamped_paths, paths);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"PARNN hybrid time-series forecasting toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI config file; command line flags win");

    // fit
    auto *fit_cmd = app.add_subcommand("fit", "fit one model on one dataset and "
                                              "print the chosen orders");
    DatasetFlags fit_data;
    ModelFlags fit_model;
    std::string fit_model_name = "parnn";
    fit_data.attach(fit_cmd);
    fit_model.attach(fit_cmd);
    fit_cmd->add_option("--model", fit_model_name, "arima|arnn|parnn");

    // forecast
    auto *fc_cmd = app.add_subcommand("forecast",
                                      "fit PARNN and emit point + interval forecasts");
    DatasetFlags fc_data;
    ModelFlags fc_model;
    int fc_horizon = 12;
    double fc_level = 0.80;
    int fc_paths = 1000;
    std::string fc_out = "forecast.csv";
    bool fc_svg = false;
    fc_data.attach(fc_cmd);
    fc_model.attach(fc_cmd);
    fc_cmd->add_option("--horizon", fc_horizon, "steps ahead");
    fc_cmd->add_option("--level", fc_level, "interval level in (0,1)");
    fc_cmd->add_option("--paths", fc_paths, "simulated sample paths");
    fc_cmd->add_option("--out", fc_out, "output CSV path");
    fc_cmd->add_flag("--svg", fc_svg, "also render an SVG chart");

    // benchmark
    auto *bm_cmd = app.add_subcommand("benchmark", "run the dataset x model x term grid");
    ModelFlags bm_model;
    std::string bm_registry;
    std::string bm_datasets;
    std::string bm_models = "arima,arnn,parnn";
    std::string bm_terms = "short";
    std::string bm_out = "bench-out";
    bool bm_no_refit = false;
    bool bm_no_intervals = false;
    bool bm_svg = false;
    int bm_paths = 1000;
    double bm_level = 0.80;
    bm_model.attach(bm_cmd);
    bm_cmd->add_option("--registry", bm_registry,
                       "dataset registry CSV (name,path,frequency,...)")
        ->required();
    bm_cmd->add_option("--datasets", bm_datasets,
                       "comma list of registry names (default: all)");
    bm_cmd->add_option("--models", bm_models, "comma list of arima,arnn,parnn");
    bm_cmd->add_option("--terms", bm_terms, "comma list of short,medium,long");
    bm_cmd->add_option("--out", bm_out, "output directory");
    bm_cmd->add_option("--paths", bm_paths, "simulated paths for intervals");
    bm_cmd->add_option("--level", bm_level, "interval level");
    bm_cmd->add_flag("--no-refit", bm_no_refit,
                     "keep the final fit on the training split only");
    bm_cmd->add_flag("--no-intervals", bm_no_intervals, "skip interval simulation");
    bm_cmd->add_flag("--svg", bm_svg, "render SVG charts");

    // ergodicity
    auto *erg_cmd = app.add_subcommand("ergodicity",
                                       "coupling/stationarity sweep over psi1");
    std::string erg_grid = "0.2,0.5,0.9,1.5";
    long erg_steps = 2000;
    int erg_reps = 10;
    std::uint64_t erg_seed = 42;
    double erg_beta = 0.5, erg_phi = 0.5, erg_nu = 0.0;
    int erg_hidden = 1;
    std::string erg_out = "ergodicity.csv";
    erg_cmd->add_option("--psi1-grid", erg_grid, "comma list of psi1 values");
    erg_cmd->add_option("--steps", erg_steps, "trajectory length");
    erg_cmd->add_option("--reps", erg_reps, "seeded replications per grid point");
    erg_cmd->add_option("--seed", erg_seed, "base seed");
    erg_cmd->add_option("--beta", erg_beta, "hidden-to-output weight of each unit");
    erg_cmd->add_option("--phi", erg_phi, "hidden input weight of each unit");
    erg_cmd->add_option("--nu", erg_nu, "output bias");
    erg_cmd->add_option("--hidden", erg_hidden, "hidden units");
    erg_cmd->add_option("--out", erg_out, "output CSV path");

    auto *ver_cmd = app.add_subcommand("version", "print the toolkit version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (ver_cmd->parsed()) {
            std::printf("parnn %s\n", parnn::kVersion);
            return kExitOk;
        }
        if (fit_cmd->parsed()) {
            return run_fit(fit_data, fit_model, fit_model_name);
        }
        if (fc_cmd->parsed()) {
            return run_forecast(fc_data, fc_model, fc_horizon, fc_level, fc_paths,
                                fc_out, fc_svg);
        }
        if (bm_cmd->parsed()) {
            parnn::BenchmarkOptions opts;
            std::vector<parnn::DatasetSpec> registry = parnn::load_registry(bm_registry);
            if (bm_datasets.empty()) {
                opts.datasets = std::move(registry);
            } else {
                for (const std::string &name : split_list(bm_datasets)) {
                    const auto it = std::find_if(
                        registry.begin(), registry.end(),
                        [&](const parnn::DatasetSpec &s) { return s.name == name; });
                    if (it == registry.end()) {
                        throw parnn::DataError("dataset '" + name +
                                               "' not found in registry");
                    }
                    opts.datasets.push_back(*it);
                }
            }
            opts.models.clear();
            for (const std::string &name : split_list(bm_models)) {
                opts.models.push_back(parnn::model_from_string(name));
            }
            opts.terms.clear();
            for (const std::string &name : split_list(bm_terms)) {
                opts.terms.push_back(parnn::term_from_string(name));
            }
            opts.parnn = bm_model.config();
            opts.refit_on_validation = !bm_no_refit;
            opts.with_intervals = !bm_no_intervals;
            opts.sim.n_paths = bm_paths;
            opts.sim.level = bm_level;
            opts.svg = bm_svg;
            opts.out_dir = bm_out;
            const parnn::BenchmarkReport report = parnn::run_benchmark(opts);

            int completed = 0, failed = 0;
            for (const parnn::BenchmarkCell &c : report.cells) {
                (c.ok ? completed : failed) += 1;
            }
            std::printf("benchmark: %d cells completed, %d failed; reports in %s\n",
                        completed, failed, bm_out.c_str());
            if (!report.notice.empty()) {
                std::printf("%s\n", report.notice.c_str());
            }
            return kExitOk;
        }
        if (erg_cmd->parsed()) {
            parnn::Parnn11Weights w;
            w.nu = erg_nu;
            w.betas.assign(static_cast<std::size_t>(erg_hidden), erg_beta);
            w.phis1.assign(static_cast<std::size_t>(erg_hidden), erg_phi);
            w.phis2.assign(static_cast<std::size_t>(erg_hidden), erg_phi);
            w.mus.assign(static_cast<std::size_t>(erg_hidden), 0.0);
            std::vector<double> grid;
            for (const std::string &v : split_list(erg_grid)) {
                grid.push_back(std::stod(v));
            }
            const parnn::SweepReport report =
                parnn::stationarity_sweep(w, grid, erg_steps, erg_reps, erg_seed);
            parnn::write_sweep_csv(report, erg_out);
            for (double psi1 : grid) {
                std::printf("psi1=%g  converged=%.0f%%  exploded=%.0f%%\n", psi1,
                            100.0 * parnn::converged_fraction(report, psi1),
                            100.0 * parnn::explosion_fraction(report, psi1));
            }
            std::printf("sweep written to %s\n", erg_out.c_str());
            return kExitOk;
        }
    } catch (const parnn::DataError &e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const parnn::SizingError &e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const parnn::EstimationError &e) {
        std::fprintf(stderr, "estimation error: %s\n", e.what());
        return kExitEstimation;
    } catch (const parnn::SearchError &e) {
        std::fprintf(stderr, "estimation error: %s\n", e.what());
        return kExitEstimation;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitOk;
}
