#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rwpe/risk.hpp"

namespace rwpe {

inline constexpr std::string_view kTrialSchema = "rwpe.trial/1";
inline constexpr std::string_view kSummarySchema = "rwpe.summary/1";
inline constexpr std::string_view kMetadataSchema = "rwpe.metadata/1";
inline constexpr std::string_view kPfTrialSchema = "rwpe.pf_trial/1";

[[nodiscard]] nlohmann::ordered_json to_json(const TrialRecord& record);
[[nodiscard]] TrialRecord trial_from_json(const nlohmann::json& j);

/// One JSON object per line, in the given order.
void write_records(std::ostream& out, std::span<const TrialRecord> records);
[[nodiscard]] std::vector<TrialRecord> read_records(std::istream& in);

/// Summary document: the RiskSummary fields plus `n_exp` and the matching
/// van Trees bound.
[[nodiscard]] nlohmann::ordered_json summary_document(const RiskSummary& summary, std::int64_t n_exp);
[[nodiscard]] RiskSummary summary_from_json(const nlohmann::json& j);

void write_records_file(const std::filesystem::path& path, std::span<const TrialRecord> records);
[[nodiscard]] std::vector<TrialRecord> read_records_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& document);
[[nodiscard]] nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace rwpe
