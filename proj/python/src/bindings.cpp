#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "pairfinder/common/error.h"
#include "pairfinder/common/log.h"
#include "pairfinder/common/text.h"
#include "pairfinder/data/ohlcv.h"
#include "pairfinder/data/synthetic.h"
#include "pairfinder/eval/metrics.h"
#include "pairfinder/features/dataset.h"
#include "pairfinder/features/indicators.h"
#include "pairfinder/meta/selector.h"
#include "pairfinder/models/classifier.h"
#include "pairfinder/pipeline/config.h"
#include "pairfinder/pipeline/pipeline.h"
#include "pairfinder/splits/split.h"

namespace py = pybind11;
using namespace pairfinder;

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) raise(ErrorCategory::Domain, "empty feature matrix");
    Matrix m(0, rows.front().size());
    for (const auto& r : rows) {
        if (r.size() != m.cols()) raise(ErrorCategory::Domain, "ragged feature matrix");
        m.append_row(r);
    }
    return m;
}

py::dict range_dict(const splits::IndexRange& r) {
    py::dict d;
    d["begin"] = r.begin;
    d["end"] = r.end;
    return d;
}

py::dict split_dict(const splits::SplitView& v) {
    py::dict d;
    d["learn"] = range_dict(v.learn);
    d["validation"] = range_dict(v.validation);
    d["test"] = range_dict(v.test);
    return d;
}

py::dict record_dict(const eval::EvaluationRecord& r) {
    py::dict d;
    d["run_id"] = r.run_id;
    d["dataset"] = r.instrument;
    d["model"] = r.model;
    d["window_start"] = format_date(r.window_start);
    d["window_end"] = format_date(r.window_end);
    d["accuracy"] = r.metrics.accuracy;
    d["normalized_acc"] = r.metrics.normalized_acc;
    d["precision"] = r.metrics.precision;
    d["recall"] = r.metrics.recall;
    d["f1"] = r.metrics.f1;
    d["auc"] = r.metrics.auc;
    d["pred_pos_rate"] = r.metrics.pred_pos_rate;
    d["backtest_return_pct"] = r.metrics.backtest_return_pct;
    d["nnp_pct"] = r.metrics.nnp_pct;
    d["profit_label"] = r.profit_label;
    return d;
}

py::dict report_dict(const pipeline::RunReport& report) {
    py::dict d;
    d["run_id"] = report.run_id;
    d["window"] = report.window;
    d["windows"] = report.windows;
    py::list records;
    for (const auto& r : report.records) records.append(record_dict(r));
    d["records"] = records;
    py::list selection;
    for (const auto& e : report.selection.entries) {
        py::dict s;
        s["dataset"] = e.instrument;
        s["model"] = e.model;
        s["meta_score"] = e.meta_score;
        s["vote"] = e.vote;
        s["validation_backtest_return_pct"] = e.backtest_return_pct;
        if (const auto* pair = report.find(e.instrument, e.model); pair && pair->test && pair->test->record) {
            s["test_backtest_return_pct"] = pair->test->record->metrics.backtest_return_pct;
        }
        selection.append(s);
    }
    d["selection"] = selection;
    d["selection_mode"] = std::string(meta::to_string(report.selection.mode));
    d["skipped"] = report.skipped;
    d["meta_status"] = report.summary.meta_status;
    d["meta_training_rows"] = report.summary.meta_training_rows;
    d["failures"] = report.summary.failures;
    d["layer2_accuracy"] = report.summary.layer2_accuracy;
    d["mean_system_accuracy"] = report.summary.mean_system_accuracy;
    return d;
}

// Same overrides as the command line tool.
pipeline::RunConfig resolve(const std::string& config_json, const std::string& base_dir,
                            std::optional<std::uint64_t> seed, std::optional<std::string> out,
                            std::optional<std::vector<std::string>> models, std::optional<std::string> mode) {
    auto config = pipeline::parse_run_config(config_json, base_dir);
    if (seed) config.seed = seed;
    if (out) config.output_dir = *out;
    if (models) config.models = *models;
    if (mode) config.selection_mode = meta::selection_mode_from_string(*mode);
    pipeline::finalize(config);
    return config;
}

}  // namespace

PYBIND11_MODULE(_pairfinder, m) {
    m.doc() = "Instrument/model pair selection core";
    logger().set_level(spdlog::level::warn);

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
    error_type.call_once_and_store_result(
        [&]() { return py::object(py::reinterpret_steal<py::object>(
                    PyErr_NewException("pairfinder._pairfinder.PairfinderError", PyExc_RuntimeError, nullptr))); });
    m.attr("PairfinderError") = error_type.get_stored();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::gil_scoped_acquire gil;
            py::object type = error_type.get_stored();
            py::object inst = type(e.what());
            inst.attr("category") = std::string(to_string(e.category()));
            PyErr_SetObject(type.ptr(), inst.ptr());
        }
    });

    m.def("set_log_level", [](const std::string& level) { logger().set_level(spdlog::level::from_str(level)); });

    // features
    m.def("compute_return", &features::compute_return, py::arg("open"), py::arg("close"));
    m.def("sma", [](const std::vector<double>& v, std::size_t n) { return features::sma(v, n); }, py::arg("values"),
          py::arg("n"));
    m.def("ema", [](const std::vector<double>& v, std::size_t n) { return features::ema(v, n); }, py::arg("values"),
          py::arg("n"));
    m.def("rsi", [](const std::vector<double>& v, std::size_t n) { return features::rsi(v, n); }, py::arg("values"),
          py::arg("n") = 14);
    m.def(
        "macd",
        [](const std::vector<double>& v, std::size_t fast, std::size_t slow, std::size_t signal) {
            const auto r = features::macd(v, {fast, slow, signal});
            py::dict d;
            d["line_offset"] = r.line_offset;
            d["signal_offset"] = r.signal_offset;
            d["line"] = r.line;
            d["signal"] = r.signal;
            d["histogram"] = r.histogram;
            return d;
        },
        py::arg("values"), py::arg("fast") = 12, py::arg("slow") = 26, py::arg("signal") = 9);

    // data
    m.def(
        "synthetic_csv",
        [](const std::string& symbol, const std::string& kind, std::size_t length, double persistence,
           double volatility_pct, std::uint64_t seed) {
            data::SyntheticSpec spec;
            spec.kind = data::synthetic_kind_from_string(kind);
            spec.length = length;
            spec.persistence = persistence;
            spec.volatility_pct = volatility_pct;
            spec.seed = seed;
            data::validate(spec);
            return data::serialize_ohlcv_csv(data::generate_synthetic_series(spec, data::InstrumentId(symbol)));
        },
        py::arg("symbol"), py::arg("kind") = "RandomWalk", py::arg("length") = 2000, py::arg("persistence") = 0.5,
        py::arg("volatility_pct") = 1.0, py::arg("seed") = 0);

    m.def(
        "build_dataset",
        [](const std::string& csv, const std::string& symbol) {
            const auto ds = features::build_dataset(data::parse_ohlcv_csv(csv, data::InstrumentId(symbol)));
            py::list dates, rows;
            std::vector<int> labels;
            std::vector<double> returns;
            for (const auto& s : ds.samples) {
                dates.append(format_date(s.target_date));
                const auto a = s.features.as_array();
                rows.append(std::vector<double>(a.begin(), a.end()));
                labels.push_back(s.label);
                returns.push_back(s.realized_return_pct);
            }
            py::dict d;
            d["feature_names"] = std::vector<std::string>(features::kFeatureNames.begin(), features::kFeatureNames.end());
            d["dates"] = dates;
            d["features"] = rows;
            d["labels"] = labels;
            d["returns_pct"] = returns;
            return d;
        },
        py::arg("csv"), py::arg("symbol"));

    // splits
    m.def(
        "chronological_split",
        [](std::size_t n, double test_fraction, double validation_fraction) {
            return split_dict(splits::chronological_split(n, {test_fraction, validation_fraction}));
        },
        py::arg("n"), py::arg("test_fraction") = 0.05, py::arg("validation_fraction") = 0.10);
    m.def(
        "walk_forward_splits",
        [](std::size_t n, std::size_t windows, std::size_t segment) {
            py::list out;
            for (const auto& v : splits::walk_forward_splits(n, windows, {}, segment)) out.append(split_dict(v));
            return out;
        },
        py::arg("n"), py::arg("windows"), py::arg("segment") = 0);

    // models
    m.def("model_kinds", [] { return models::ModelRegistry::builtin().names(); });
    m.def(
        "train_and_score",
        [](const std::string& kind, const std::vector<std::vector<double>>& x, const std::vector<int>& y,
           const std::vector<std::vector<double>>& x_eval, const models::Hyperparameters& params, std::uint64_t seed) {
            const auto model = models::train(models::make_spec(kind, params), to_matrix(x), y, seed);
            return model.score_rows(to_matrix(x_eval));
        },
        py::arg("kind"), py::arg("x"), py::arg("y"), py::arg("x_eval"), py::arg("params") = models::Hyperparameters{},
        py::arg("seed") = 0);

    // evaluation
    m.def(
        "confusion_metrics",
        [](const std::vector<int>& p, const std::vector<int>& y) {
            const auto c = eval::confusion_metrics(p, y);
            py::dict d;
            d["accuracy"] = c.accuracy;
            d["precision"] = c.precision;
            d["recall"] = c.recall;
            d["f1"] = c.f1;
            return d;
        },
        py::arg("predictions"), py::arg("labels"));
    m.def("normalized_acc", [](const std::vector<int>& p, const std::vector<int>& y) { return eval::normalized_acc(p, y); },
          py::arg("predictions"), py::arg("labels"));
    m.def("auc", [](const std::vector<double>& s, const std::vector<int>& y) { return eval::auc(s, y); }, py::arg("scores"),
          py::arg("labels"));
    m.def(
        "backtest",
        [](const std::vector<int>& p, const std::vector<double>& r, bool short_on_down) {
            return eval::backtest(p, r, short_on_down);
        },
        py::arg("predictions"), py::arg("returns_pct"), py::arg("short_on_down") = true);
    m.def("nnp", [](const std::vector<double>& r) { return eval::nnp(r); }, py::arg("returns_pct"));
    m.def("mean_system_accuracy", &meta::mean_system_accuracy, py::arg("p2"));

    // pipeline
    m.def(
        "run",
        [](const std::string& config_json, const std::string& base_dir, std::optional<std::uint64_t> seed,
           std::optional<std::string> out, std::optional<std::vector<std::string>> models,
           std::optional<std::string> mode, bool emit) {
            const auto config = resolve(config_json, base_dir, seed, out, models, mode);
            pipeline::RunReport report;
            {
                py::gil_scoped_release release;
                report = pipeline::run_training_cycle(config);
                if (emit) pipeline::emit_reports(report, config.output_dir);
            }
            return report_dict(report);
        },
        py::arg("config_json"), py::arg("base_dir") = "", py::arg("seed") = py::none(), py::arg("out") = py::none(),
        py::arg("models") = py::none(), py::arg("mode") = py::none(), py::arg("emit") = true);
    m.def(
        "walk_forward",
        [](const std::string& config_json, const std::string& base_dir, std::optional<std::size_t> windows,
           std::optional<std::uint64_t> seed, std::optional<std::string> out,
           std::optional<std::vector<std::string>> models, std::optional<std::string> mode) {
            auto config = resolve(config_json, base_dir, seed, out, models, mode);
            if (windows) config.windows = *windows;
            std::vector<pipeline::RunReport> reports;
            {
                py::gil_scoped_release release;
                reports = pipeline::walk_forward(config, config.windows);
            }
            py::list out_list;
            for (const auto& r : reports) out_list.append(report_dict(r));
            return out_list;
        },
        py::arg("config_json"), py::arg("base_dir") = "", py::arg("windows") = py::none(), py::arg("seed") = py::none(),
        py::arg("out") = py::none(), py::arg("models") = py::none(), py::arg("mode") = py::none());
}
