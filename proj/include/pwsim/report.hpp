#pragma once

#include "pwsim/corpus.hpp"
#include "pwsim/matcher.hpp"
#include "pwsim/meter.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace pwsim {

/// "99.92" style percentage with two decimals.
std::string format_percent(double fraction);

nlohmann::json to_json(const EvaluationReport& report);
nlohmann::json to_json(const StrengthVerdict& verdict);
nlohmann::json to_json(const CorpusStats& stats);

inline constexpr const char* kReportCsvHeader =
    "test_label,weak_label,M,N_test,accuracy_pct,accuracy,threshold,comparisons,elapsed_seconds";

/// One CSV row (no trailing newline) matching kReportCsvHeader.
std::string to_csv_row(const EvaluationReport& report);
std::string to_csv(const std::vector<EvaluationReport>& reports);

std::string to_text(const EvaluationReport& report);
std::string to_text(const StrengthVerdict& verdict);
std::string to_text(const CorpusStats& stats);

}  // namespace pwsim
