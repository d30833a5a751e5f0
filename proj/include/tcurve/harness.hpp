#pragma once

#include "tcurve/filtration.hpp"
#include "tcurve/rational.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tcurve {

std::filesystem::path default_data_dir();  // $TCURVE_DATA_DIR, else the source tree's data/
std::string read_text_file(const std::filesystem::path& p);

struct DatasetRow {
    std::string id;
    std::string stratum;
    std::string r, u;
    std::uint64_t index = 0;
    std::string L, L_plus;  // verbatim
    std::string tier;
};
std::vector<DatasetRow> parse_dataset(std::string_view text);

struct AnomalyEntry {
    std::string row;
    std::string kind;  // flagged-value | transcription-repair
    std::string field;
    std::string printed, recomputed, note;
};
std::vector<AnomalyEntry> parse_anomalies(std::string_view text);

enum class RowStatus { Match, Mismatch, FlaggedAnomaly, SkippedOverLimit };
std::string to_string(RowStatus s);

struct RowResult {
    std::string id, stratum, tier;
    RowStatus status = RowStatus::Mismatch;
    std::uint64_t expected_index = 0;
    std::string expected_L, expected_L_plus;
    std::optional<std::uint64_t> index;
    std::optional<std::string> L, L_plus, computed_stratum, cover_stratum;
    std::vector<std::string> notes;
    // run metadata, excluded from the canonical report
    double seconds = 0;
    bool cache_hit = false;
};

struct ReportCounts {
    std::size_t match = 0, mismatch = 0, flagged = 0, skipped = 0;
    std::size_t total() const { return match + mismatch + flagged + skipped; }
};

struct VerificationReport {
    std::vector<RowResult> rows;  // sorted by id
    ReportCounts counts() const;
    int exit_code() const { return counts().mismatch == 0 ? 0 : 1; }
};

struct VerifyOptions {
    std::uint64_t max_index = 10000;
    int jobs = 1;
    std::filesystem::path cache_dir;
};

VerificationReport verify_dataset(const std::vector<DatasetRow>& rows, const std::vector<AnomalyEntry>& anomalies,
                                  const VerifyOptions& options);
RowResult verify_row(const DatasetRow& row, const std::vector<AnomalyEntry>& anomalies, const VerifyOptions& options);

struct TheoremEntry {
    std::string id;
    std::string group, stratum, route;
    std::map<std::string, std::string> fields;  // route-specific keys
    std::string expected;
};
std::vector<TheoremEntry> parse_theorem_table(std::string_view text);

struct TheoremResult {
    std::string id, group, stratum, route, method;
    RowStatus status = RowStatus::Mismatch;
    std::string expected;
    std::optional<std::string> computed;
    std::vector<std::string> notes;
};

struct TheoremReport {
    std::vector<TheoremResult> rows;
    ReportCounts counts() const;
    int exit_code() const { return counts().mismatch == 0 ? 0 : 1; }
};

TheoremResult run_theorem(const TheoremEntry& e, const std::vector<ReductionSchedule>& schedules);
TheoremReport run_theorems(const std::vector<TheoremEntry>& entries, const std::vector<ReductionSchedule>& schedules);

// Report serialisation. Timing and cache fields only appear with run_metadata.
nlohmann::ordered_json to_json(const VerificationReport& r, bool run_metadata);
nlohmann::ordered_json to_json(const TheoremReport& r);
std::string to_csv(const VerificationReport& r, bool run_metadata);
std::string to_csv(const TheoremReport& r);
std::string to_text(const VerificationReport& r, bool run_metadata);
std::string to_text(const TheoremReport& r);

}  // namespace tcurve
