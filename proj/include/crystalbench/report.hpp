#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crystalbench/verify.hpp"

namespace crystalbench {

inline constexpr const char* kReportSchema = "crystalbench.report/1";

nlohmann::json report_to_json(const VerificationReport& report);

/// CSV columns, in order. `runtime_ms` is the only wall-clock column.
const std::vector<std::string>& csv_columns();

std::string csv_header();
/// One row for a finished run. Uses the report's primary level.
std::string csv_row(const VerificationReport& report);
/// A row for a run that did not produce a report; only n, m, runtime and status are filled.
std::string csv_failure_row(int dimension, std::size_t m, std::int64_t runtime_ms, const std::string& status);

/// Drops the named column from CSV text (used to compare payloads across runs).
std::string csv_without_column(const std::string& csv, const std::string& column);

} // namespace crystalbench
