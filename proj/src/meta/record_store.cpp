#include "pairfinder/meta/record_store.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "pairfinder/common/error.h"
#include "pairfinder/common/log.h"

namespace pairfinder::meta {

namespace {

constexpr std::string_view kCommitPrefix = "#commit,";

[[noreturn]] void io_error(const std::filesystem::path& path, const std::string& what) {
    raise(ErrorCategory::Io, path.string() + ": " + what + ": " + std::strerror(errno));
}

void write_all(int fd, const std::filesystem::path& path, std::string_view bytes) {
    while (!bytes.empty()) {
        const ssize_t written = ::write(fd, bytes.data(), bytes.size());
        if (written < 0) {
            if (errno == EINTR) continue;
            io_error(path, "write failed");
        }
        bytes.remove_prefix(static_cast<std::size_t>(written));
    }
}

struct ParsedStore {
    std::vector<eval::EvaluationRecord> records;
    // Byte length of the committed prefix.
    std::size_t committed_bytes = 0;
    bool has_header = false;
};

ParsedStore parse_store(const std::filesystem::path& path, std::string_view contents) {
    ParsedStore out;
    std::vector<eval::EvaluationRecord> pending;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < contents.size()) {
        const auto newline = contents.find('\n', pos);
        if (newline == std::string_view::npos) break;  // unterminated tail
        std::string_view line = contents.substr(pos, newline - pos);
        const std::size_t next = newline + 1;
        ++line_no;
        if (line_no == 1) {
            if (line != kStoreHeader) raise(ErrorCategory::Parse, path.string() + ": unexpected store header");
            out.has_header = true;
            out.committed_bytes = next;
        } else if (line.starts_with(kCommitPrefix)) {
            const auto count = parse_int(line.substr(kCommitPrefix.size()));
            if (!count || static_cast<std::size_t>(*count) != pending.size()) {
                raise(ErrorCategory::Parse, path.string() + ": line " + std::to_string(line_no) + ": bad commit marker");
            }
            out.records.insert(out.records.end(), pending.begin(), pending.end());
            pending.clear();
            out.committed_bytes = next;
        } else if (auto record = parse_record_line(line)) {
            pending.push_back(std::move(*record));
        } else {
            // Only tolerated when nothing committed follows it.
            const auto rest = contents.substr(next);
            if (rest.find(std::string("\n") + std::string(kCommitPrefix)) != std::string_view::npos ||
                rest.starts_with(kCommitPrefix)) {
                raise(ErrorCategory::Parse, path.string() + ": line " + std::to_string(line_no) + ": corrupt record");
            }
            break;
        }
        pos = next;
    }
    return out;
}

}  // namespace

std::string format_record_line(const eval::EvaluationRecord& r) {
    std::string line = r.run_id + ',' + format_date(r.window_start) + ',' + format_date(r.window_end) + ',' +
                       r.instrument + ',' + r.model;
    const auto& m = r.metrics;
    for (double v : {m.accuracy, m.normalized_acc, m.precision, m.recall, m.f1, m.auc, m.pred_pos_rate,
                     m.backtest_return_pct, m.nnp_pct}) {
        line += ',';
        line += format_double(v);
    }
    line += ',';
    line += std::to_string(r.profit_label);
    return line;
}

std::optional<eval::EvaluationRecord> parse_record_line(std::string_view line) {
    const auto fields = split(line, ',');
    if (fields.size() != 15) return std::nullopt;
    eval::EvaluationRecord r;
    r.run_id = std::string(fields[0]);
    auto start = parse_date(fields[1]);
    auto end = parse_date(fields[2]);
    if (!start || !end || fields[0].empty() || fields[3].empty() || fields[4].empty()) return std::nullopt;
    r.window_start = *start;
    r.window_end = *end;
    r.instrument = std::string(fields[3]);
    r.model = std::string(fields[4]);
    double* targets[] = {&r.metrics.accuracy, &r.metrics.normalized_acc, &r.metrics.precision,
                         &r.metrics.recall,   &r.metrics.f1,             &r.metrics.auc,
                         &r.metrics.pred_pos_rate, &r.metrics.backtest_return_pct, &r.metrics.nnp_pct};
    for (std::size_t i = 0; i < 9; ++i) {
        auto value = parse_double(fields[5 + i]);
        if (!value) return std::nullopt;
        *targets[i] = *value;
    }
    auto label = parse_int(fields[14]);
    if (!label || (*label != 0 && *label != 1)) return std::nullopt;
    r.profit_label = static_cast<int>(*label);
    return r;
}

void RecordStore::append(std::span<const eval::EvaluationRecord> records) const {
    if (records.empty()) return;
    std::string batch;
    for (const auto& record : records) {
        for (const auto* field : {&record.run_id, &record.instrument, &record.model}) {
            if (field->empty() || field->find_first_of(",\n\r") != std::string::npos || field->starts_with('#')) {
                raise(ErrorCategory::Validation, "record field '" + *field + "' cannot be stored");
            }
        }
        batch += format_record_line(record);
        batch += '\n';
    }
    batch += std::string(kCommitPrefix) + std::to_string(records.size()) + '\n';

    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::string existing;
    if (std::filesystem::exists(path_)) existing = read_file(path_.string());
    const auto parsed = parse_store(path_, existing);

    const int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT, 0644);
    if (fd < 0) io_error(path_, "cannot open record store");
    struct Closer {
        int fd;
        ~Closer() { ::close(fd); }
    } closer{fd};

    if (parsed.committed_bytes < existing.size()) {
        logger().warn("{}: discarding {} bytes of uncommitted tail", path_.string(), existing.size() - parsed.committed_bytes);
        if (::ftruncate(fd, static_cast<off_t>(parsed.committed_bytes)) != 0) io_error(path_, "truncate failed");
    }
    if (::lseek(fd, 0, SEEK_END) < 0) io_error(path_, "seek failed");
    if (!parsed.has_header) batch = std::string(kStoreHeader) + '\n' + batch;
    write_all(fd, path_, batch);
    if (::fsync(fd) != 0) io_error(path_, "fsync failed");
}

std::vector<eval::EvaluationRecord> RecordStore::load() const {
    if (!std::filesystem::exists(path_)) return {};
    const auto contents = read_file(path_.string());
    auto parsed = parse_store(path_, contents);
    if (parsed.committed_bytes < contents.size()) {
        logger().warn("{}: ignoring partial trailing batch ({} bytes)", path_.string(),
                      contents.size() - parsed.committed_bytes);
    }
    return std::move(parsed.records);
}

std::vector<std::string> RecordStore::run_ids() const {
    std::vector<std::string> ids;
    for (const auto& record : load()) {
        if (std::find(ids.begin(), ids.end(), record.run_id) == ids.end()) ids.push_back(record.run_id);
    }
    return ids;
}

std::string RecordStore::next_run_id() const {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "run%04zu", run_ids().size() + 1);
    return buf;
}

}  // namespace pairfinder::meta
