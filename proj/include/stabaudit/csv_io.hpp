#pragma once

#include <map>
#include <string>
#include <vector>

#include "stabaudit/run_table.hpp"

namespace stabaudit {

/// RFC-4180-style CSV: comma separated, double-quote escaping, header row
/// required. Returns rows of unescaped cells.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

std::string csv_escape(const std::string& cell);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// Parses one scoring run. The header must contain subject_id and one column
/// per schema trait (exact names, any order); a scored_at column (RFC 3339)
/// is optional and the run timestamp is the latest row value. Parsing is
/// all-or-nothing: structural problems throw immediately (MissingColumn,
/// BadNumber, DuplicateSubject with line numbers) and score-validation
/// failures are collected into one ValidationFailed summary.
RunTable parse_runs_csv_text(const std::string& text, const ScoreSchema& schema,
                             const std::string& run_id, const std::string& facet_label,
                             const std::string& treatment_label);

RunTable parse_runs_csv(const std::string& path, const ScoreSchema& schema,
                        const std::string& run_id, const std::string& facet_label,
                        const std::string& treatment_label);

/// Inverse of parse_runs_csv_text: subject_id, trait columns in schema order,
/// scored_at. Values are written in shortest round-trip form, so parsing the
/// output reproduces the table bit-exactly.
std::string serialize_run_csv(const RunTable& run);

/// Header: subject_id plus one column per attribute; empty cells mean the
/// attribute is missing for that subject.
std::map<std::string, DemographicProfile> parse_demographics_csv_text(const std::string& text);
std::map<std::string, DemographicProfile> parse_demographics_csv(const std::string& path);

std::string read_text_file(const std::string& path);   // IoFailure on error
void write_text_file(const std::string& path, const std::string& content);

}  // namespace stabaudit
