#include "pairfinder/pipeline/pipeline.h"

#include <algorithm>
#include <set>
#include <tuple>

#include "pairfinder/common/error.h"
#include "pairfinder/common/log.h"
#include "pairfinder/common/parallel.h"
#include "pairfinder/common/text.h"
#include "pairfinder/data/universe.h"

namespace pairfinder::pipeline {

namespace {

bool record_less(const eval::EvaluationRecord& a, const eval::EvaluationRecord& b) {
    return std::tie(a.instrument, a.model) < std::tie(b.instrument, b.model);
}

std::vector<models::ClassifierSpec> grid_for(const RunConfig& config, const std::string& kind) {
    const auto it = config.grids.find(kind);
    return it == config.grids.end() ? models::default_grid(kind) : models::make_grid(kind, it->second);
}

std::string equity_filename(const std::string& instrument, const std::string& model) {
    return "equity_" + sanitize_filename(instrument) + "_" + sanitize_filename(model) + ".csv";
}

std::string equity_csv(const std::vector<eval::EquityPoint>& curve) {
    std::string out = "date,strategy_cum_pct,normal_cum_pct\n";
    for (const auto& p : curve) {
        out += format_date(p.date) + ',' + format_double(p.strategy_cum_pct) + ',' + format_double(p.normal_cum_pct) +
               '\n';
    }
    return out;
}

void write_output(const std::filesystem::path& path, std::string_view contents) {
    write_file(path.string(), contents);
}

constexpr std::string_view kSelectionHeader =
    "rank,dataset,model,meta_score,vote,validation_backtest_return_pct,test_start,test_end,test_backtest_return_pct,"
    "test_nnp_pct";

std::string selection_row(std::size_t rank, const meta::SelectionEntry& e, const PairOutcome* pair) {
    std::string row = std::to_string(rank) + ',' + e.instrument + ',' + e.model + ',' + format_double(e.meta_score) +
                      ',' + std::to_string(e.vote) + ',' + format_double(e.backtest_return_pct);
    if (pair && pair->test && !pair->test->curve.empty()) {
        const auto& curve = pair->test->curve;
        row += ',' + format_date(curve.front().date) + ',' + format_date(curve.back().date) + ',' +
               format_double(curve.back().strategy_cum_pct) + ',' + format_double(curve.back().normal_cum_pct);
    } else {
        row += ",,,,";
    }
    return row + '\n';
}

std::optional<meta::MetaModel> try_train_meta(std::span<const eval::EvaluationRecord> history, std::uint64_t seed,
                                              const meta::MetaConfig& config, std::string& status) {
    try {
        return meta::train_meta(history, seed, config);
    } catch (const Error& e) {
        if (e.category() != ErrorCategory::InsufficientHistory) throw;
        status = e.what();
        logger().warn("{}; no pairs selected", e.what());
        return std::nullopt;
    }
}

}  // namespace

const PairOutcome* RunReport::find(const std::string& instrument, const std::string& model) const {
    for (const auto& pair : pairs) {
        if (pair.instrument == instrument && pair.model && pair.model->spec().canonical_id() == model) return &pair;
    }
    return nullptr;
}

PreparedUniverse prepare_universe(const RunConfig& config) {
    const auto& sources = config.universe.instruments;
    if (sources.empty()) raise(ErrorCategory::Config, "universe has no instruments");
    std::set<std::string> seen;
    for (const auto& entry : sources) {
        if (!seen.insert(entry.instrument.symbol()).second) {
            raise(ErrorCategory::Config, "instrument '" + entry.instrument.symbol() + "' listed twice");
        }
    }

    std::vector<std::optional<data::PriceSeries>> series(sources.size());
    std::vector<std::optional<features::LabeledDataset>> datasets(sources.size());
    std::vector<std::string> reasons(sources.size());
    parallel_for(sources.size(), config.threads, [&](std::size_t i) {
        try {
            auto loaded = data::load_instrument(sources[i]);
            datasets[i] = features::build_dataset(loaded, config.features);
            series[i] = std::move(loaded);
        } catch (const Error& e) {
            if (e.category() == ErrorCategory::Config) throw;
            reasons[i] = e.what();
        }
    });

    // Symbol order, so results do not depend on the order of the config.
    std::vector<std::size_t> order(sources.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sources[a].instrument.symbol() < sources[b].instrument.symbol();
    });

    PreparedUniverse out;
    for (auto i : order) {
        if (!datasets[i]) {
            logger().warn("skipping {}: {}", sources[i].instrument.symbol(), reasons[i]);
            out.skipped.push_back(sources[i].instrument.symbol() + ": " + reasons[i]);
            continue;
        }
        out.series.push_back(std::move(*series[i]));
        out.datasets.push_back(std::move(*datasets[i]));
    }
    return out;
}

RunReport run_cycle(const RunConfig& config, const std::vector<features::LabeledDataset>& datasets,
                    const std::vector<splits::SplitView>& views, meta::RecordStore& store, std::size_t window,
                    std::size_t windows, const CycleOptions& options) {
    if (datasets.size() != views.size()) raise(ErrorCategory::Config, "one split per dataset is required");
    if (!config.seed) raise(ErrorCategory::Config, "no master seed");
    const std::uint64_t seed = *config.seed;
    const auto kinds = config.enabled_models();

    RunReport report;
    report.run_id = store.next_run_id();
    report.window = window;
    report.windows = windows;

    std::vector<std::vector<models::ClassifierSpec>> grids;
    for (const auto& kind : kinds) grids.push_back(grid_for(config, kind));

    report.pairs.resize(datasets.size() * kinds.size());
    parallel_for(report.pairs.size(), config.threads, [&](std::size_t index) {
        const auto& ds = datasets[index / kinds.size()];
        const auto& view = views[index / kinds.size()];
        const std::size_t k = index % kinds.size();
        auto& pair = report.pairs[index];
        pair.instrument = ds.instrument.symbol();
        pair.kind = kinds[k];
        try {
            const auto lx = ds.feature_matrix(view.learn.begin, view.learn.size());
            const auto ly = ds.labels(view.learn.begin, view.learn.size());
            const auto vx = ds.feature_matrix(view.validation.begin, view.validation.size());
            const auto vy = ds.labels(view.validation.begin, view.validation.size());
            auto search = models::grid_search(grids[k], lx, ly, vx, vy, seed, pair.instrument);
            auto validation = eval::evaluate_pair(search.model, ds, view.validation, report.run_id, config.short_on_down);
            if (!validation.record) {
                pair.failure = "validation window: " + validation.failure;
                return;
            }
            pair.validation = std::move(validation.record);
            pair.test = eval::evaluate_pair(search.model, ds, view.test, report.run_id, config.short_on_down);
            pair.model = std::move(search.model);
        } catch (const Error& e) {
            if (e.category() == ErrorCategory::Config) throw;
            pair.failure = e.what();
        }
    });

    for (const auto& pair : report.pairs) {
        if (pair.validation) {
            report.records.push_back(*pair.validation);
        } else {
            logger().warn("{} / {} failed: {}", pair.instrument, pair.kind, pair.failure);
            ++report.summary.failures;
        }
    }
    if (report.records.empty()) raise(ErrorCategory::Training, "no instrument-model pair survived training");
    std::sort(report.records.begin(), report.records.end(), record_less);

    std::vector<eval::EvaluationRecord> history;
    if (options.persist) {
        store.append(report.records);
        history = store.load();
    } else {
        history = store.load();
        history.insert(history.end(), report.records.begin(), report.records.end());
    }

    auto& summary = report.summary;
    summary.instruments = datasets.size();
    summary.model_kinds = kinds.size();
    summary.records = report.records.size();
    report.selection.mode = config.selection_mode;
    const auto meta_model = try_train_meta(history, seed, config.meta, summary.meta_status);
    if (meta_model) {
        summary.meta_training_rows = meta_model->training_rows();
        report.selection = meta::select_pairs(*meta_model, report.records, config.selection_mode);

        std::size_t scored = 0;
        std::size_t agree = 0;
        for (const auto& pair : report.pairs) {
            if (!pair.validation || !pair.test || !pair.test->record) continue;
            const auto features = meta::meta_features(pair.validation->metrics);
            ++scored;
            if (meta_model->predict(features) == pair.test->record->profit_label) ++agree;
        }
        if (scored > 0) {
            summary.layer2_accuracy = static_cast<double>(agree) / static_cast<double>(scored);
            summary.mean_system_accuracy = meta::mean_system_accuracy(*summary.layer2_accuracy);
        }
    }
    logger().info("{} (window {}/{}): {} records, {} failures, {} selected", report.run_id, window, windows,
                  summary.records, summary.failures, report.selection.entries.size());
    return report;
}

RunReport run_training_cycle(const RunConfig& config, const CycleOptions& options) {
    auto prepared = prepare_universe(config);
    std::vector<features::LabeledDataset> datasets;
    std::vector<splits::SplitView> views;
    for (auto& ds : prepared.datasets) {
        try {
            views.push_back(splits::chronological_split(ds.size(), config.splits));
            datasets.push_back(std::move(ds));
        } catch (const Error& e) {
            if (e.category() != ErrorCategory::Validation) throw;
            logger().warn("skipping {}: {}", ds.instrument.symbol(), e.what());
            prepared.skipped.push_back(ds.instrument.symbol() + ": " + e.what());
        }
    }
    if (datasets.empty()) raise(ErrorCategory::Validation, "no usable instruments in the universe");
    meta::RecordStore store(config.resolved_store_path());
    auto report = run_cycle(config, datasets, views, store, 1, 1, options);
    report.skipped = std::move(prepared.skipped);
    report.summary.skipped_instruments = report.skipped.size();
    return report;
}

std::vector<RunReport> walk_forward(const RunConfig& config, std::size_t n_windows) {
    if (n_windows == 0) raise(ErrorCategory::Config, "walk-forward needs at least one window");
    auto prepared = prepare_universe(config);
    if (prepared.datasets.empty()) raise(ErrorCategory::Validation, "no usable instruments in the universe");
    std::vector<std::vector<splits::SplitView>> layouts;
    for (const auto& ds : prepared.datasets) {
        try {
            layouts.push_back(splits::walk_forward_splits(ds.size(), n_windows, config.splits, config.segment_size));
        } catch (const Error& e) {
            raise(ErrorCategory::Config, ds.instrument.symbol() + ": " + e.what());
        }
    }

    meta::RecordStore store(config.resolved_store_path());
    std::vector<RunReport> reports;
    for (std::size_t w = 0; w < n_windows; ++w) {
        std::vector<splits::SplitView> views;
        for (const auto& layout : layouts) views.push_back(layout[w]);
        auto report = run_cycle(config, prepared.datasets, views, store, w + 1, n_windows);
        report.skipped = prepared.skipped;
        report.summary.skipped_instruments = report.skipped.size();
        reports.push_back(std::move(report));
    }
    return reports;
}

std::string selection_csv(const RunReport& report) {
    std::string out(kSelectionHeader);
    out += '\n';
    std::size_t rank = 1;
    for (const auto& entry : report.selection.entries) {
        out += selection_row(rank++, entry, report.find(entry.instrument, entry.model));
    }
    return out;
}

std::string summary_text(const RunReport& report, meta::SelectionMode mode) {
    const auto& s = report.summary;
    std::string out;
    out += "run_id: " + report.run_id + '\n';
    out += "window: " + std::to_string(report.window) + " of " + std::to_string(report.windows) + '\n';
    out += "instruments: " + std::to_string(s.instruments) + '\n';
    out += "skipped_instruments: " + std::to_string(s.skipped_instruments) + '\n';
    for (const auto& reason : report.skipped) out += "  skipped: " + reason + '\n';
    out += "model_kinds: " + std::to_string(s.model_kinds) + '\n';
    out += "records: " + std::to_string(s.records) + '\n';
    out += "failures: " + std::to_string(s.failures) + '\n';
    for (const auto& pair : report.pairs) {
        if (!pair.validation) out += "  failed: " + pair.instrument + " " + pair.kind + ": " + pair.failure + '\n';
    }
    out += "meta_training_records: " + std::to_string(s.meta_training_rows) + '\n';
    if (!s.meta_status.empty()) out += "meta_status: " + s.meta_status + '\n';
    out += "selection_mode: " + std::string(meta::to_string(mode)) + '\n';
    out += "selected: " + std::to_string(report.selection.entries.size());
    out += report.selection.entries.empty() ? " (no trade)\n" : "\n";
    out += "layer2_accuracy: " + (s.layer2_accuracy ? format_double(*s.layer2_accuracy) : std::string("n/a")) + '\n';
    out += "mean_system_accuracy: " +
           (s.mean_system_accuracy ? format_double(*s.mean_system_accuracy) : std::string("n/a")) + '\n';
    return out;
}

void emit_reports(const RunReport& report, const std::filesystem::path& outdir) {
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) raise(ErrorCategory::Io, outdir.string() + ": cannot create directory: " + ec.message());
    // Curves from an earlier run in the same directory would be misleading.
    for (const auto& entry : std::filesystem::directory_iterator(outdir)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.starts_with("equity_") && name.ends_with(".csv")) {
            std::filesystem::remove(entry.path());
        }
    }
    write_output(outdir / "records.csv", eval::records_csv(report.records));
    write_output(outdir / "selection.csv", selection_csv(report));
    for (const auto& entry : report.selection.entries) {
        const auto* pair = report.find(entry.instrument, entry.model);
        if (!pair || !pair->test) continue;
        write_output(outdir / equity_filename(entry.instrument, entry.model), equity_csv(pair->test->curve));
    }
    write_output(outdir / "summary.txt", summary_text(report, report.selection.mode));
}

std::vector<NextDayCall> predict_next(const RunConfig& config) {
    auto prepared = prepare_universe(config);
    std::vector<features::LabeledDataset> datasets;
    std::vector<const data::PriceSeries*> series;
    std::vector<splits::SplitView> views;
    for (std::size_t i = 0; i < prepared.datasets.size(); ++i) {
        try {
            views.push_back(splits::chronological_split(prepared.datasets[i].size(), config.splits));
        } catch (const Error& e) {
            if (e.category() != ErrorCategory::Validation) throw;
            logger().warn("skipping {}: {}", prepared.datasets[i].instrument.symbol(), e.what());
            continue;
        }
        datasets.push_back(prepared.datasets[i]);
        series.push_back(&prepared.series[i]);
    }
    if (datasets.empty()) raise(ErrorCategory::Validation, "no usable instruments in the universe");
    meta::RecordStore store(config.resolved_store_path());
    const auto report = run_cycle(config, datasets, views, store, 1, 1, {.persist = false});

    std::vector<NextDayCall> calls;
    for (const auto& entry : report.selection.entries) {
        const auto* pair = report.find(entry.instrument, entry.model);
        if (!pair) continue;
        const data::PriceSeries* source = nullptr;
        for (const auto* s : series) {
            if (s->instrument().symbol() == entry.instrument) source = s;
        }
        const auto features = features::latest_features(*source, config.features).as_array();
        const double score = pair->model->score(features);
        calls.push_back({entry.instrument, entry.model, score >= 0.5 ? 1 : 0, score});
    }
    return calls;
}

void report_from_store(const meta::RecordStore& store, const std::string& run_id, std::uint64_t seed,
                       const meta::MetaConfig& meta_config, meta::SelectionMode mode,
                       const std::filesystem::path& outdir) {
    const auto all = store.load();
    if (all.empty()) raise(ErrorCategory::Validation, store.path().string() + ": record store is empty");
    const auto ids = store.run_ids();
    const std::string target = run_id.empty() ? ids.back() : run_id;
    const auto pos = std::find(ids.begin(), ids.end(), target);
    if (pos == ids.end()) raise(ErrorCategory::Config, "run '" + target + "' is not in " + store.path().string());
    const std::set<std::string> allowed(ids.begin(), pos + 1);

    RunReport report;
    report.run_id = target;
    std::vector<eval::EvaluationRecord> history;
    for (const auto& record : all) {
        if (!allowed.contains(record.run_id)) continue;
        history.push_back(record);
        if (record.run_id == target) report.records.push_back(record);
    }
    std::sort(report.records.begin(), report.records.end(), record_less);
    std::set<std::string> instruments;
    for (const auto& record : report.records) instruments.insert(record.instrument);
    report.summary.instruments = instruments.size();
    report.summary.records = report.records.size();

    report.selection.mode = mode;
    const auto meta_model = try_train_meta(history, seed, meta_config, report.summary.meta_status);
    if (meta_model) {
        report.summary.meta_training_rows = meta_model->training_rows();
        report.selection = meta::select_pairs(*meta_model, report.records, mode);
    }

    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) raise(ErrorCategory::Io, outdir.string() + ": cannot create directory: " + ec.message());
    write_output(outdir / "records.csv", eval::records_csv(report.records));
    write_output(outdir / "selection.csv", selection_csv(report));
}

}  // namespace pairfinder::pipeline
