#include "stabaudit/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stabaudit/errors.hpp"
#include "stabaudit/timeutil.hpp"

namespace stabaudit {

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

namespace {

double parse_double(const std::string& cell, std::size_t line) {
  double value{};
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto r = std::from_chars(begin, end, value);
  if (r.ec != std::errc{} || r.ptr != end)
    throw AuditError(Errc::BadNumber, "line " + std::to_string(line) + ": '" + cell +
                                          "' is not a number");
  return value;
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool row_has_content = false;

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          cell += '"';
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        continue;
      }
      cell += c;
      ++i;
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        row_has_content = true;
        ++i;
        break;
      case ',':
        row.push_back(std::move(cell));
        cell.clear();
        row_has_content = true;
        ++i;
        break;
      case '\r':
        ++i;
        break;
      case '\n':
        if (row_has_content || !cell.empty() || !row.empty()) {
          row.push_back(std::move(cell));
          cell.clear();
          rows.push_back(std::move(row));
          row.clear();
          row_has_content = false;
        }
        ++i;
        break;
      default:
        cell += c;
        row_has_content = true;
        ++i;
        break;
    }
  }
  if (quoted) throw AuditError(Errc::BadNumber, "unterminated quoted cell");
  if (row_has_content || !cell.empty() || !row.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

RunTable parse_runs_csv_text(const std::string& text, const ScoreSchema& schema,
                             const std::string& run_id, const std::string& facet_label,
                             const std::string& treatment_label) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw AuditError(Errc::MissingColumn, "empty file, expected a header row");
  const auto& header = rows.front();

  auto column_of = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw AuditError(Errc::MissingColumn, "missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };

  const std::size_t id_col = column_of("subject_id");
  std::vector<std::size_t> trait_cols;
  for (const auto& trait : schema.traits()) trait_cols.push_back(column_of(trait.name));
  const auto scored_it = std::find(header.begin(), header.end(), "scored_at");
  const bool has_scored =
      scored_it != header.end();
  const std::size_t scored_col =
      has_scored ? static_cast<std::size_t>(scored_it - header.begin()) : 0;

  Timestamp latest = 0;
  struct ParsedRow {
    std::size_t line;
    std::string subject_id;
    std::vector<double> values;
  };
  std::vector<ParsedRow> parsed;
  std::map<std::string, std::size_t> seen;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::size_t line = r + 1;
    const auto& row = rows[r];
    if (row.size() != header.size())
      throw AuditError(Errc::BadNumber, "line " + std::to_string(line) + ": expected " +
                                            std::to_string(header.size()) + " cells, got " +
                                            std::to_string(row.size()));
    ParsedRow out;
    out.line = line;
    out.subject_id = row[id_col];
    if (out.subject_id.empty())
      throw AuditError(Errc::ValidationFailed,
                       "line " + std::to_string(line) + ": empty subject_id");
    const auto [it, inserted] = seen.emplace(out.subject_id, line);
    if (!inserted)
      throw AuditError(Errc::DuplicateSubject,
                       "line " + std::to_string(line) + ": subject '" + out.subject_id +
                           "' already appeared on line " + std::to_string(it->second));
    for (std::size_t c : trait_cols) out.values.push_back(parse_double(row[c], line));
    if (has_scored && !row[scored_col].empty())
      latest = std::max(latest, parse_rfc3339(row[scored_col]));
    parsed.push_back(std::move(out));
  }

  RunTable run(run_id, schema, facet_label, treatment_label, latest);
  std::vector<std::string> failures;
  for (const auto& row : parsed) {
    try {
      run.add_entry(row.subject_id, row.values);
    } catch (const AuditError& e) {
      failures.push_back("line " + std::to_string(row.line) + ": " + e.what());
    }
  }
  if (!failures.empty()) {
    std::string summary = std::to_string(failures.size()) + " row(s) failed validation";
    for (const auto& f : failures) summary += "\n  " + f;
    throw AuditError(Errc::ValidationFailed, summary);
  }
  return run;
}

RunTable parse_runs_csv(const std::string& path, const ScoreSchema& schema,
                        const std::string& run_id, const std::string& facet_label,
                        const std::string& treatment_label) {
  try {
    return parse_runs_csv_text(read_text_file(path), schema, run_id, facet_label,
                               treatment_label);
  } catch (const AuditError& e) {
    throw AuditError(e.code() == Errc::IoFailure ? Errc::MissingFile : e.code(),
                     path + ": " + e.what());
  }
}

std::string serialize_run_csv(const RunTable& run) {
  std::ostringstream out;
  out << "subject_id";
  for (const auto& trait : run.schema().traits()) out << ',' << csv_escape(trait.name);
  out << ",scored_at\n";
  for (const auto& [subject, vector] : run.entries()) {
    out << csv_escape(subject);
    for (double v : vector.values) out << ',' << format_double(v);
    out << ',' << format_rfc3339(run.scored_at()) << '\n';
  }
  return out.str();
}

std::map<std::string, DemographicProfile> parse_demographics_csv_text(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw AuditError(Errc::MissingColumn, "empty file, expected a header row");
  const auto& header = rows.front();
  const auto id_it = std::find(header.begin(), header.end(), "subject_id");
  if (id_it == header.end())
    throw AuditError(Errc::MissingColumn, "missing column 'subject_id'");
  const std::size_t id_col = static_cast<std::size_t>(id_it - header.begin());

  std::map<std::string, DemographicProfile> profiles;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::size_t line = r + 1;
    const auto& row = rows[r];
    if (row.size() != header.size())
      throw AuditError(Errc::BadNumber, "line " + std::to_string(line) + ": expected " +
                                            std::to_string(header.size()) + " cells, got " +
                                            std::to_string(row.size()));
    const std::string& subject = row[id_col];
    if (subject.empty())
      throw AuditError(Errc::ValidationFailed,
                       "line " + std::to_string(line) + ": empty subject_id");
    DemographicProfile profile;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == id_col || row[c].empty()) continue;
      if (header[c].empty())
        throw AuditError(Errc::MissingColumn,
                         "line 1: attribute column " + std::to_string(c + 1) + " has no name");
      profile.attributes[header[c]] = row[c];
    }
    if (!profiles.emplace(subject, std::move(profile)).second)
      throw AuditError(Errc::DuplicateSubject, "line " + std::to_string(line) + ": subject '" +
                                                   subject + "' appears twice");
  }
  return profiles;
}

std::map<std::string, DemographicProfile> parse_demographics_csv(const std::string& path) {
  try {
    return parse_demographics_csv_text(read_text_file(path));
  } catch (const AuditError& e) {
    throw AuditError(e.code() == Errc::IoFailure ? Errc::MissingFile : e.code(),
                     path + ": " + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw AuditError(Errc::IoFailure, "cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw AuditError(Errc::IoFailure, "read failed for '" + path + "'");
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw AuditError(Errc::IoFailure, "cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out.good()) throw AuditError(Errc::IoFailure, "write failed for '" + path + "'");
}

}  // namespace stabaudit
