#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pairfinder/eval/evaluation.h"
#include "pairfinder/features/dataset.h"
#include "pairfinder/meta/record_store.h"
#include "pairfinder/meta/selector.h"
#include "pairfinder/models/classifier.h"
#include "pairfinder/pipeline/config.h"
#include "pairfinder/splits/split.h"

namespace pairfinder::pipeline {

// One (instrument, kind) pair of a cycle.
struct PairOutcome {
    std::string instrument;
    std::string kind;
    // Grid-search winner; empty when the pair failed.
    std::optional<models::TrainedClassifier> model;
    std::optional<eval::EvaluationRecord> validation;
    // Untouched test segment. `test.record` is empty for a single-class window.
    std::optional<eval::PairEvaluation> test;
    std::string failure;
};

struct RunSummary {
    std::size_t instruments = 0;
    std::size_t skipped_instruments = 0;
    std::size_t model_kinds = 0;
    std::size_t records = 0;
    std::size_t failures = 0;
    std::size_t meta_training_rows = 0;
    // Empty when the meta model trained; otherwise why it did not.
    std::string meta_status;
    // Share of pairs whose meta vote matches the profit label of their test
    // window, and the +1/-1 expectation derived from it.
    std::optional<double> layer2_accuracy;
    std::optional<double> mean_system_accuracy;
};

struct RunReport {
    std::string run_id;
    std::size_t window = 1;
    std::size_t windows = 1;
    std::vector<PairOutcome> pairs;
    // Validation records of this cycle, sorted by (instrument, model).
    std::vector<eval::EvaluationRecord> records;
    meta::PairSelection selection;
    std::vector<std::string> skipped;
    RunSummary summary;

    const PairOutcome* find(const std::string& instrument, const std::string& model) const;
};

struct CycleOptions {
    // Append the cycle's records to the store.
    bool persist = true;
};

// Loads the universe and builds every dataset; instruments that fail hard
// are skipped with a logged reason collected in `skipped`.
struct PreparedUniverse {
    std::vector<data::PriceSeries> series;
    std::vector<features::LabeledDataset> datasets;
    std::vector<std::string> skipped;
};
PreparedUniverse prepare_universe(const RunConfig& config);

// One full cycle on fixed datasets and splits (one split per dataset).
RunReport run_cycle(const RunConfig& config, const std::vector<features::LabeledDataset>& datasets,
                    const std::vector<splits::SplitView>& views, meta::RecordStore& store, std::size_t window,
                    std::size_t windows, const CycleOptions& options = {});

// Load, build, split (chronological_split), then run_cycle. Raises when no
// pair survives.
RunReport run_training_cycle(const RunConfig& config, const CycleOptions& options = {});

// n_windows consecutive test segments; the store accumulates across windows.
// Window feasibility is checked for every instrument before any training.
std::vector<RunReport> walk_forward(const RunConfig& config, std::size_t n_windows);

// records.csv, selection.csv, equity_<instrument>_<model>.csv per selected
// pair, summary.txt.
void emit_reports(const RunReport& report, const std::filesystem::path& outdir);

std::string selection_csv(const RunReport& report);
std::string summary_text(const RunReport& report, meta::SelectionMode mode);

struct NextDayCall {
    std::string instrument;
    std::string model;
    int direction = 0;
    double score = 0.0;
};

// A cycle that is not persisted, then next-day calls from the latest bar of
// every selected pair.
std::vector<NextDayCall> predict_next(const RunConfig& config);

// Re-emits records.csv and selection.csv for one stored run (latest when
// run_id is empty); the meta model is trained on the history up to and
// including that run.
void report_from_store(const meta::RecordStore& store, const std::string& run_id, std::uint64_t seed,
                       const meta::MetaConfig& meta_config, meta::SelectionMode mode,
                       const std::filesystem::path& outdir);

}  // namespace pairfinder::pipeline
