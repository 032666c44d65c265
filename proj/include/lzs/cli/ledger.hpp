// Append-only run ledger: one JSON object per line, one line per result.
#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>

#include "lzs/cli/formats.hpp"

namespace lzs::cli {

inline constexpr const char* kLedgerEnv = "LZS_LEDGER";
inline constexpr const char* kDefaultLedger = "lzs_ledger.jsonl";

/// Explicit path, else $LZS_LEDGER, else lzs_ledger.jsonl in the working directory.
inline std::string resolve_ledger_path(const std::optional<std::string>& flag) {
    if (flag && !flag->empty()) return *flag;
    if (const char* env = std::getenv(kLedgerEnv); env && *env) return env;
    return kDefaultLedger;
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t secs = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

struct RunRecord {
    std::string command_line;
    std::string command;
    std::optional<models::ModelDescriptor> descriptor;
    std::string method;
    std::string result_hash;
    std::optional<double> error_estimate;
    bool pass = true;
};

inline Json record_json(const RunRecord& r, const std::string& timestamp) {
    Json j;
    j["timestamp"] = timestamp;
    j["command_line"] = r.command_line;
    j["command"] = r.command;
    j["descriptor"] = r.descriptor ? Json(models::descriptor_to_json(*r.descriptor)) : Json(nullptr);
    j["method"] = r.method.empty() ? Json(nullptr) : Json(r.method);
    j["digest"] = {{"hash", r.result_hash},
                   {"error_estimate", r.error_estimate ? Json(*r.error_estimate) : Json(nullptr)}};
    j["pass"] = r.pass;
    return j;
}

/// Single writer: appends are serialized and each record is one write of one line.
class Ledger {
public:
    explicit Ledger(std::string path) : path_(std::move(path)) {}

    const std::string& path() const { return path_; }

    void append(const RunRecord& r) {
        const std::string line = record_json(r, utc_timestamp()).dump() + "\n";
        std::lock_guard<std::mutex> lock(mutex_);
        std::ofstream out(path_, std::ios::app | std::ios::binary);
        if (!out) throw ValidationError("cannot open ledger '" + path_ + "' for appending");
        out.write(line.data(), static_cast<std::streamsize>(line.size()));
        out.flush();
        if (!out) throw ValidationError("cannot write ledger '" + path_ + "'");
    }

private:
    std::string path_;
    std::mutex mutex_;
};

}  // namespace lzs::cli
