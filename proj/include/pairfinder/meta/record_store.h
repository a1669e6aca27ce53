#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pairfinder/eval/evaluation.h"

namespace pairfinder::meta {

// Append-only, newline-delimited store of evaluation records.
//
// File layout: a header line, then batches. Each batch is its record lines
// followed by a "#commit,<count>" line. Loading publishes a batch only once
// its commit line is read, so an interrupted append (a partial or uncommitted
// tail) is invisible; it is skipped with a warning and trimmed by the next
// append. Corruption anywhere before the tail is a Parse error.
//
// Single-writer: appends must be serialised by the caller. Concurrent readers
// always see a prefix of committed batches.
class RecordStore {
public:
    explicit RecordStore(std::filesystem::path path) : path_(std::move(path)) {}

    const std::filesystem::path& path() const noexcept { return path_; }

    // Durably appends one batch (written with a single write and fsync).
    void append(std::span<const eval::EvaluationRecord> records) const;

    std::vector<eval::EvaluationRecord> load() const;
    std::size_t size() const { return load().size(); }

    // Distinct run ids in first-appearance order.
    std::vector<std::string> run_ids() const;

    // "run0001", "run0002", ... one past the runs already stored.
    std::string next_run_id() const;

private:
    std::filesystem::path path_;
};

inline constexpr std::string_view kStoreHeader =
    "run_id,window_start,window_end,dataset,model,accuracy,normalized_acc,precision,recall,f1,auc,pred_pos_rate,"
    "backtest_return_pct,nnp_pct,profit_label";

std::string format_record_line(const eval::EvaluationRecord& record);
std::optional<eval::EvaluationRecord> parse_record_line(std::string_view line);

}  // namespace pairfinder::meta
