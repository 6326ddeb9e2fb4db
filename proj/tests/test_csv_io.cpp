#include <doctest.h>

#include <random>

#include "stabaudit/csv_io.hpp"
#include "stabaudit/errors.hpp"
#include "stabaudit/timeutil.hpp"

using namespace stabaudit;

namespace {

ScoreSchema disc() {
  return ScoreSchema("sys",
                     {{"Dominance", 0, 10},
                      {"Influence", 0, 10},
                      {"Steadiness", 0, 10},
                      {"Calculativeness", 0, 10}});
}

}  // namespace

TEST_CASE("csv parser handles quotes, escapes and CRLF") {
  const auto rows = parse_csv("a,\"b,c\",\"say \"\"hi\"\"\"\r\n1,2,3\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"a", "b,c", "say \"hi\""});
  CHECK(rows[1] == std::vector<std::string>{"1", "2", "3"});
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("q\"t") == "\"q\"\"t\"");
}

TEST_CASE("runs csv happy path with reordered columns") {
  const std::string text =
      "Influence,subject_id,Dominance,Steadiness,Calculativeness\n"
      "2,alice,1,3,4\n"
      "6,bob,5,7,8\n"
      "1,carol,0,0.5,9.25\n";
  const auto run = parse_runs_csv_text(text, disc(), "r1", "file_format", "control");
  REQUIRE(run.size() == 3);
  CHECK(run.entries().at("alice").values == std::vector<double>{1, 2, 3, 4});
  CHECK(run.entries().at("carol").values == std::vector<double>{0, 1, 0.5, 9.25});
}

TEST_CASE("runs csv reads the optional scored_at column") {
  const std::string text =
      "subject_id,Dominance,Influence,Steadiness,Calculativeness,scored_at\n"
      "a,1,2,3,4,2021-04-01T00:00:00Z\n"
      "b,1,2,3,4,2021-04-03T12:00:00Z\n";
  const auto run = parse_runs_csv_text(text, disc(), "r", "f", "c");
  CHECK(run.scored_at() == parse_rfc3339("2021-04-03T12:00:00Z"));
}

TEST_CASE("runs csv structural errors carry line numbers") {
  const auto schema = disc();
  try {
    parse_runs_csv_text("subject_id,Dominance,Influence,Steadiness\na,1,2,3\n", schema, "r", "f",
                        "c");
    FAIL("expected MissingColumn");
  } catch (const AuditError& e) {
    CHECK(e.code() == Errc::MissingColumn);
    CHECK(std::string(e.what()).find("Calculativeness") != std::string::npos);
  }

  const std::string header = "subject_id,Dominance,Influence,Steadiness,Calculativeness\n";
  try {
    parse_runs_csv_text(header + "a,1,2,3,4\na,5,6,7,8\n", schema, "r", "f", "c");
    FAIL("expected DuplicateSubject");
  } catch (const AuditError& e) {
    CHECK(e.code() == Errc::DuplicateSubject);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  try {
    parse_runs_csv_text(header + "a,1,2,3,four\n", schema, "r", "f", "c");
    FAIL("expected BadNumber");
  } catch (const AuditError& e) {
    CHECK(e.code() == Errc::BadNumber);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("runs csv validation failures are collected, not partial") {
  ScoreSchema simplex("sys", {{"a", 0, 100}, {"b", 0, 100}}, 100.0);
  const std::string text =
      "subject_id,a,b\n"
      "ok,40,60\n"
      "bad1,40,59.4\n"
      "ok2,1,99\n"
      "bad2,200,-100\n";
  try {
    parse_runs_csv_text(text, simplex, "r", "f", "c");
    FAIL("expected ValidationFailed");
  } catch (const AuditError& e) {
    CHECK(e.code() == Errc::ValidationFailed);
    const std::string what = e.what();
    CHECK(what.find("2 row(s)") != std::string::npos);
    CHECK(what.find("line 3") != std::string::npos);
    CHECK(what.find("line 5") != std::string::npos);
  }
}

TEST_CASE("run table round-trips through csv bit-exactly") {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  const auto schema = disc();
  for (int trial = 0; trial < 20; ++trial) {
    RunTable run("run-" + std::to_string(trial), schema, "facet", "treat",
                 1617235200 + trial * 86400);
    const std::size_t n = 1 + static_cast<std::size_t>(trial) * 7 % 40;
    for (std::size_t i = 0; i < n; ++i)
      run.add_entry("subj-" + std::to_string(i),
                    std::vector<double>{dist(rng), dist(rng), dist(rng), dist(rng)});
    const auto text = serialize_run_csv(run);
    const auto back = parse_runs_csv_text(text, schema, run.run_id(), run.facet_label(),
                                          run.treatment_label());
    CHECK(back == run);  // bit-equal values, same metadata
    CHECK(serialize_run_csv(back) == text);
  }
}

TEST_CASE("demographics csv with blanks omits missing attributes") {
  const std::string text =
      "subject_id,gender,primary_language\n"
      "a,male,english\n"
      "b,,other\n"
      "c,,\n";
  const auto profiles = parse_demographics_csv_text(text);
  REQUIRE(profiles.size() == 3);
  CHECK(profiles.at("a").attributes.size() == 2);
  CHECK(profiles.at("b").attributes.size() == 1);
  CHECK(profiles.at("b").attributes.count("gender") == 0);
  CHECK(profiles.at("c").attributes.empty());
}

TEST_CASE("demographics csv with only subject_id yields empty profiles") {
  const auto profiles = parse_demographics_csv_text("subject_id\na\nb\n");
  CHECK(profiles.size() == 2);
  CHECK(profiles.at("a").attributes.empty());
}

TEST_CASE("demographics csv errors") {
  try {
    parse_demographics_csv_text("id,gender\na,male\n");
    FAIL("expected MissingColumn");
  } catch (const AuditError& e) {
    CHECK(e.code() == Errc::MissingColumn);
  }
  try {
    parse_demographics_csv_text("subject_id,gender\na,male\na,female\n");
    FAIL("expected DuplicateSubject");
  } catch (const AuditError& e) {
    CHECK(e.code() == Errc::DuplicateSubject);
  }
}

TEST_CASE("rfc3339 parsing and formatting") {
  CHECK(parse_rfc3339("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_rfc3339("2021-04-01T00:00:00Z") == 1617235200);
  CHECK(parse_rfc3339("2021-04-01T02:30:00+02:30") == 1617235200);
  CHECK(parse_rfc3339("2021-03-31T22:00:00-02:00") == 1617235200);
  CHECK(parse_rfc3339("2021-04-01T00:00:00.125Z") == 1617235200);
  CHECK(format_rfc3339(1617235200) == "2021-04-01T00:00:00Z");
  CHECK(format_rfc3339(parse_rfc3339("2024-02-29T23:59:59Z")) == "2024-02-29T23:59:59Z");
  CHECK_THROWS_AS(parse_rfc3339("2021-02-30T00:00:00Z"), AuditError);
  CHECK_THROWS_AS(parse_rfc3339("not a date"), AuditError);
  CHECK_THROWS_AS(parse_rfc3339("2021-04-01T00:00:00"), AuditError);
}
