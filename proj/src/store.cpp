#include "fengshui/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "fengshui/error.hpp"
#include "fengshui/eval.hpp"
#include "fengshui/text.hpp"

namespace fengshui {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kFormatName = "fengshui-dataset";

std::string header_line() {
    ordered_json h;
    h["format"] = kFormatName;
    h["format_version"] = kDatasetFormatVersion;
    return h.dump();
}

void check_header(std::string_view line) {
    nlohmann::json h;
    try {
        h = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::CorruptRow, "line 1: dataset header is not valid JSON");
    }
    if (!h.is_object() || h.value("format", std::string{}) != kFormatName)
        throw Error(ErrorCode::CorruptRow, "line 1: not a dataset file");
    if (!h.contains("format_version") || h.at("format_version") != kDatasetFormatVersion)
        throw Error(ErrorCode::VersionMismatch,
                    "dataset format_version " + (h.contains("format_version") ? h.at("format_version").dump() : "?") +
                        " is not supported (expected " + std::to_string(kDatasetFormatVersion) + ")");
}

void validate_row(const DatasetRow& row) {
    if (row.session_id.empty()) throw Error(ErrorCode::OutOfRange, "row session_id is empty");
    if (!std::isfinite(row.score) || row.score < 1.0 || row.score > 5.0)
        throw Error(ErrorCode::OutOfRange, "row score must be in [1, 5]");
    for (double v : row.features.values)
        if (!std::isfinite(v)) throw Error(ErrorCode::OutOfRange, "row features must be finite");
}

struct Scan {
    std::vector<std::string_view> complete;  // newline-terminated lines
    std::string_view torn;                   // trailing bytes without '\n'
    std::size_t good_bytes = 0;
};

Scan scan_lines(std::string_view content) {
    Scan s;
    std::size_t start = 0;
    while (start < content.size()) {
        const auto nl = content.find('\n', start);
        if (nl == std::string_view::npos) {
            s.torn = content.substr(start);
            break;
        }
        s.complete.push_back(content.substr(start, nl - start));
        start = nl + 1;
        s.good_bytes = start;
    }
    return s;
}

[[noreturn]] void io_error(const std::string& what) {
    throw Error(ErrorCode::IoFailure, what + ": " + std::strerror(errno));
}

void write_all(int fd, std::string_view data, const std::string& path) {
    while (!data.empty()) {
        const auto n = ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) continue;
            io_error("write " + path);
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

}  // namespace

std::string serialize_row(const DatasetRow& row) {
    ordered_json j;
    j["session_id"] = row.session_id;
    j["timestamp"] = row.timestamp;
    j["score"] = row.score;
    j["features"] = to_json(row.features);
    j["artifacts"] = ordered_json::object();
    for (const auto& [k, v] : row.artifacts) j["artifacts"][k] = v;
    return j.dump();
}

DatasetRow parse_row(std::string_view line) {
    try {
        const auto j = nlohmann::json::parse(line);
        DatasetRow row;
        row.session_id = j.at("session_id").get<std::string>();
        row.timestamp = j.value("timestamp", std::string{});
        row.score = j.at("score").get<double>();
        row.features = feature_vector_from_json(j.at("features"));
        if (j.contains("artifacts"))
            for (const auto& [k, v] : j.at("artifacts").items()) row.artifacts[k] = v.get<std::string>();
        validate_row(row);
        return row;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::CorruptRow, e.what());
    } catch (const Error& e) {
        throw Error(ErrorCode::CorruptRow, e.what());
    }
}

LoadResult load_dataset(const std::string& path) {
    if (!std::filesystem::exists(path)) throw Error(ErrorCode::IoFailure, "dataset " + path + " does not exist");
    const std::string content = text::read_file(path);
    LoadResult result;
    const Scan scan = scan_lines(content);
    if (!scan.torn.empty()) {
        result.torn_tail = true;
        result.warnings.push_back("torn trailing line (" + std::to_string(scan.torn.size()) +
                                  " bytes) ignored in " + path);
    }
    if (scan.complete.empty()) return result;
    check_header(scan.complete.front());
    std::set<std::string> ids;
    for (std::size_t i = 1; i < scan.complete.size(); ++i) {
        const auto line = scan.complete[i];
        if (text::trim(line).empty()) continue;
        DatasetRow row;
        try {
            row = parse_row(line);
        } catch (const Error& e) {
            throw Error(ErrorCode::CorruptRow, "line " + std::to_string(i + 1) + ": " + e.what());
        }
        if (!ids.insert(row.session_id).second)
            throw Error(ErrorCode::CorruptRow,
                        "line " + std::to_string(i + 1) + ": duplicate session_id " + row.session_id);
        result.rows.push_back(std::move(row));
    }
    return result;
}

DatasetWriter::DatasetWriter(std::string path) : path_(std::move(path)) {
    std::string content;
    if (std::filesystem::exists(path_)) content = text::read_file(path_);
    const Scan scan = scan_lines(content);
    if (!scan.torn.empty()) {
        {
            std::ofstream q(path_ + ".quarantine", std::ios::binary | std::ios::app);
            q.write(scan.torn.data(), static_cast<std::streamsize>(scan.torn.size()));
            q.put('\n');
        }
        std::filesystem::resize_file(path_, scan.good_bytes);
        warnings_.push_back("quarantined torn trailing line (" + std::to_string(scan.torn.size()) + " bytes) to " +
                            path_ + ".quarantine");
    }
    if (!scan.complete.empty()) {
        const LoadResult existing = load_dataset(path_);
        for (const auto& r : existing.rows) ids_.insert(r.session_id);
    }
    fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) io_error("open " + path_);
    if (scan.complete.empty()) {
        write_all(fd_, header_line() + "\n", path_);
        if (::fsync(fd_) != 0) io_error("fsync " + path_);
    }
}

DatasetWriter::~DatasetWriter() {
    if (fd_ >= 0) ::close(fd_);
}

void DatasetWriter::append(const DatasetRow& row) {
    validate_row(row);
    std::lock_guard lock(mutex_);
    if (ids_.contains(row.session_id))
        throw Error(ErrorCode::DuplicateSession, "session " + row.session_id + " already stored");
    write_all(fd_, serialize_row(row) + "\n", path_);
    if (::fsync(fd_) != 0) io_error("fsync " + path_);
    ids_.insert(row.session_id);
}

bool DatasetWriter::contains(const std::string& session_id) const {
    std::lock_guard lock(mutex_);
    return ids_.contains(session_id);
}

std::size_t DatasetWriter::size() const {
    std::lock_guard lock(mutex_);
    return ids_.size();
}

void append_row(const std::string& path, const DatasetRow& row) {
    DatasetWriter writer(path);
    writer.append(row);
}

std::vector<ScoredRow> to_scored_rows(std::span<const DatasetRow> rows) {
    std::vector<ScoredRow> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back({r.session_id, r.features, r.score});
    return out;
}

std::string export_csv(std::span<const DatasetRow> rows) {
    std::string out = "session_id";
    for (auto name : feature_names()) {
        out += ',';
        out += name;
    }
    out += ",score,label\n";
    std::vector<int> labels(rows.size(), 0);
    if (rows.size() >= 2) labels = label_by_mean(to_scored_rows(rows)).labels;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out += rows[i].session_id;
        for (double v : rows[i].features.values) {
            out += ',';
            out += text::format_double(v);
        }
        out += ',' + text::format_double(rows[i].score) + ',' + std::to_string(labels[i]) + '\n';
    }
    return out;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace fengshui
