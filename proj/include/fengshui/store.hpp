#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fengshui/dataset.hpp"
#include "fengshui/features.hpp"

namespace fengshui {

inline constexpr int kDatasetFormatVersion = 1;

struct DatasetRow {
    std::string session_id;
    std::string timestamp;  // ISO-8601 UTC
    FeatureVector features;
    double score = 0.0;
    // Paths of per-session raw files, e.g. {"sensor_log": ".../samples.csv"}.
    std::map<std::string, std::string> artifacts;

    bool operator==(const DatasetRow&) const = default;
};

struct LoadResult {
    std::vector<DatasetRow> rows;
    bool torn_tail = false;
    std::vector<std::string> warnings;
};

// All intact rows in file order. A trailing line without its newline is a
// torn write: it is skipped and reported, never fatal. Throws
// Error{IoFailure | VersionMismatch | CorruptRow}.
LoadResult load_dataset(const std::string& path);

// Single appender for one dataset file. Opening it quarantines a torn tail
// into "<path>.quarantine" and truncates the file back to the last complete
// row. append() returns only after the row has been flushed to disk.
class DatasetWriter {
public:
    explicit DatasetWriter(std::string path);
    ~DatasetWriter();
    DatasetWriter(const DatasetWriter&) = delete;
    DatasetWriter& operator=(const DatasetWriter&) = delete;

    // Throws Error{DuplicateSession | IoFailure | OutOfRange}; the file is
    // unchanged on error.
    void append(const DatasetRow& row);
    bool contains(const std::string& session_id) const;
    std::size_t size() const;
    const std::vector<std::string>& open_warnings() const { return warnings_; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    int fd_ = -1;
    std::set<std::string> ids_;
    std::vector<std::string> warnings_;
    mutable std::mutex mutex_;
};

void append_row(const std::string& path, const DatasetRow& row);

std::string serialize_row(const DatasetRow& row);
// Throws Error{CorruptRow}.
DatasetRow parse_row(std::string_view line);

// session_id, the 25 features, score, label (mean split over all rows).
std::string export_csv(std::span<const DatasetRow> rows);

std::vector<ScoredRow> to_scored_rows(std::span<const DatasetRow> rows);
std::string utc_timestamp();

}  // namespace fengshui
