#include <doctest.h>

#include <cmath>
#include <set>

#include "stabaudit/auditor.hpp"
#include "stabaudit/errors.hpp"
#include "stabaudit/stats.hpp"
#include "stabaudit/synth_ads.hpp"

using namespace stabaudit;

namespace {

ScoreSchema range_schema() {
  return ScoreSchema("synthetic",
                     {{"Dominance", 0, 10},
                      {"Influence", 0, 10},
                      {"Steadiness", 0, 10},
                      {"Calculativeness", 0, 10}});
}

ScoreSchema simplex_schema() {
  return ScoreSchema("synthetic-simplex",
                     {{"Dominance", 0, 100},
                      {"Influence", 0, 100},
                      {"Steadiness", 0, 100},
                      {"Conscientiousness", 0, 100}},
                     100.0);
}

SyntheticDocument doc_for(const std::string& id, std::int64_t seed) {
  SyntheticDocument doc;
  doc.subject_id = id;
  doc.content_seed = seed;
  doc.contact_key = id + "@example.test";
  return doc;
}

}  // namespace

TEST_CASE("deterministic config scores the same document identically") {
  SyntheticAds ads(AdsBehaviorConfig{range_schema()});
  const auto doc = doc_for("a", 12345);
  const auto first = ads.score(doc, 1000);
  const auto second = ads.score(doc, 1000);
  CHECK(first == second);
}

TEST_CASE("with all knobs off the score depends only on the content seed") {
  AdsBehaviorConfig cfg(range_schema());
  cfg.base_seed = 99;
  SyntheticAds ads(cfg);

  auto base = doc_for("a", 777);
  const auto reference = ads.score(base, 0);

  auto treated = apply_treatment(base, Facet::FileFormat);
  CHECK(ads.score(treated, 0) == reference);
  treated = apply_treatment(base, Facet::SourceContext);
  CHECK(ads.score(treated, 0) == reference);
  treated = apply_treatment(base, Facet::UrlEmbedding);
  CHECK(ads.score(treated, 0) == reference);
  CHECK(ads.score(base, 86400 * 300) == reference);  // no drift configured

  // a different content seed must move the score
  CHECK_FALSE(ads.score(doc_for("a", 778), 0) == reference);
}

TEST_CASE("facet sensitivity displaces only documents carrying the tag") {
  AdsBehaviorConfig cfg(range_schema());
  cfg.facet_sensitivity["format:txt"] = 1.5;
  SyntheticAds ads(cfg);

  const auto base = doc_for("a", 31);
  const auto control = ads.score(base, 0);
  CHECK(ads.score(base, 0) == control);

  const auto txt = apply_treatment(base, Facet::FileFormat, {.format_tag = "txt"});
  const auto shifted = ads.score(txt, 0);
  CHECK_FALSE(shifted == control);
  // displacement magnitude per trait is exactly the configured sensitivity
  for (std::size_t t = 0; t < 4; ++t) {
    const double delta = std::fabs(shifted.values[t] - control.values[t]);
    const bool clamped = shifted.values[t] == 0.0 || shifted.values[t] == 10.0;
    if (!clamped) CHECK(delta == doctest::Approx(1.5).epsilon(1e-12));
  }
}

TEST_CASE("drift shifts every subject by the same amount per trait") {
  AdsBehaviorConfig cfg(range_schema());
  cfg.drift_per_day = 0.01;
  SyntheticAds ads(cfg);

  const auto a = doc_for("a", 1);
  const auto b = doc_for("b", 2);
  const Timestamp day0 = 0, day31 = 31 * 86400;
  const auto a0 = ads.score(a, day0), a31 = ads.score(a, day31);
  const auto b0 = ads.score(b, day0), b31 = ads.score(b, day31);
  for (std::size_t t = 0; t < 4; ++t) {
    const double shift_a = a31.values[t] - a0.values[t];
    const double shift_b = b31.values[t] - b0.values[t];
    CHECK(std::fabs(shift_a) == doctest::Approx(0.31).epsilon(1e-9));
    CHECK(shift_a == doctest::Approx(shift_b).epsilon(1e-12));
  }
}

TEST_CASE("nondeterministic jitter changes repeat calls") {
  AdsBehaviorConfig cfg(range_schema());
  cfg.deterministic = false;
  cfg.jitter_sd = 0.1;
  SyntheticAds ads(cfg);
  const auto doc = doc_for("a", 5);
  const auto first = ads.score(doc, 0);
  const auto second = ads.score(doc, 0);
  CHECK_FALSE(first == second);

  // two fresh instances replay the same jitter stream
  SyntheticAds replay(cfg);
  const auto replay_first = replay.score(doc, 0);
  SyntheticAds replay2(cfg);
  CHECK(replay2.score(doc, 0) == replay_first);
}

TEST_CASE("cluster snapping keeps every value within the radius of a center") {
  AdsBehaviorConfig cfg(range_schema());
  cfg.cluster_centers = {{2.0, 8.0}, {2.0, 8.0}, {2.0, 8.0}, {2.0, 8.0}};
  cfg.cluster_snap_radius = 1.0;
  cfg.facet_sensitivity["format:txt"] = 3.0;
  SyntheticAds ads(cfg);

  for (int i = 0; i < 300; ++i) {
    auto doc = doc_for("s" + std::to_string(i), 1000 + i);
    if (i % 2) doc = apply_treatment(doc, Facet::FileFormat, {.format_tag = "txt"});
    const auto v = ads.score(doc, 0);
    for (double value : v.values) {
      const double nearest = std::min(std::fabs(value - 2.0), std::fabs(value - 8.0));
      CHECK(nearest <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("generator outputs always validate against the schema") {
  for (bool simplex : {false, true}) {
    AdsBehaviorConfig cfg(simplex ? simplex_schema() : range_schema());
    cfg.facet_sensitivity["format:txt"] = 4.0;
    cfg.facet_sensitivity["source:profile"] = 2.0;
    cfg.drift_per_day = 0.05;
    cfg.deterministic = false;
    cfg.jitter_sd = 0.5;
    SyntheticAds ads(cfg);
    for (int i = 0; i < 200; ++i) {
      auto doc = doc_for("s" + std::to_string(i), i * 17 + 3);
      if (i % 2) doc = apply_treatment(doc, Facet::FileFormat, {.format_tag = "txt"});
      if (i % 3 == 0) doc = apply_treatment(doc, Facet::SourceContext);
      // validate_score_vector runs inside score(); reaching here means valid
      CHECK_NOTHROW(ads.score(doc, i * 4000));
    }
  }
}

TEST_CASE("linkage returns the frozen vector for any later document with the key") {
  AdsBehaviorConfig cfg(range_schema());
  cfg.linkage_enabled = true;
  SyntheticAds ads(cfg);

  auto original = doc_for("a", 444);
  original = apply_treatment(original, Facet::UrlEmbedding);  // link + key -> freezes
  const auto frozen = ads.score(original, 0);
  CHECK(ads.linkage().size() == 1);

  // blank document carrying only the contact key
  SyntheticDocument blank;
  blank.subject_id = "someone-else";
  blank.content_seed = 999999;
  blank.contact_key = "a@example.test";
  for (int i = 0; i < 1000; ++i) {
    blank.content_seed = i;
    blank.format_tag = i % 2 ? "txt" : "pdf";
    CHECK(ads.score(blank, i * 86400) == frozen);
  }

  // the frozen vector never changes, even if the original document evolves
  auto evolved = apply_treatment(original, Facet::ParticipantTime);
  CHECK(ads.score(evolved, 0) == frozen);
}

TEST_CASE("without linkage the same key scores independently") {
  AdsBehaviorConfig cfg(range_schema());
  cfg.linkage_enabled = false;
  SyntheticAds ads(cfg);
  auto linked = doc_for("a", 10);
  linked = apply_treatment(linked, Facet::UrlEmbedding);
  ads.score(linked, 0);
  CHECK(ads.linkage().size() == 0);
}

TEST_CASE("random guesser respects the schema and the seed") {
  const auto simplex = simplex_schema();
  const auto a = random_guesser(simplex, 7);
  const auto b = random_guesser(simplex, 7);
  CHECK(a == b);
  double sum = 0.0;
  for (double v : a.values) {
    CHECK(v >= 0.0);
    sum += v;
  }
  CHECK(std::fabs(sum - 100.0) <= 1e-6);
  CHECK_FALSE(random_guesser(simplex, 8) == a);
}

TEST_CASE("two baseline runs are uncorrelated at n=200") {
  const auto schema = range_schema();
  std::vector<std::vector<double>> run_a(4), run_b(4);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_guesser(schema, 1000 + i);
    const auto b = random_guesser(schema, 900000 + i);
    for (std::size_t t = 0; t < 4; ++t) {
      run_a[t].push_back(a.values[t]);
      run_b[t].push_back(b.values[t]);
    }
  }
  for (std::size_t t = 0; t < 4; ++t) {
    const auto r = spearman(run_a[t], run_b[t]);
    REQUIRE(r.defined());
    CHECK(std::fabs(*r.statistic) < 0.2);
  }
}

TEST_CASE("generate_cohort is deterministic and follows the label weights") {
  const DemographicSpec spec{
      {"gender", {{"male", 0.60}, {"female", 0.38}, {"nonbinary", 0.02}}},
      {"primary_language", {{"english", 0.64}, {"other", 0.36}}},
  };
  const auto cohort = generate_cohort(94, 2021, spec);
  REQUIRE(cohort.subjects.size() == 94);
  REQUIRE(cohort.documents.size() == 94);

  const auto again = generate_cohort(94, 2021, spec);
  for (std::size_t i = 0; i < 94; ++i) {
    CHECK(cohort.subjects[i] == again.subjects[i]);
    CHECK(cohort.documents[i].content_seed == again.documents[i].content_seed);
  }

  std::map<std::string, int> counts;
  for (const auto& s : cohort.subjects) counts[s.demographics.attributes.at("gender")]++;
  CHECK(counts["male"] > 40);      // expectation 56.4
  CHECK(counts["female"] > 20);    // expectation 35.7
  CHECK(counts["male"] + counts["female"] + counts["nonbinary"] == 94);

  std::set<std::string> ids;
  for (const auto& s : cohort.subjects) ids.insert(s.subject_id);
  CHECK(ids.size() == 94);

  CHECK(generate_cohort(1, 5, {}).subjects.size() == 1);
}

TEST_CASE("generate_cohort rejects empty distributions") {
  CHECK_THROWS_AS(generate_cohort(5, 1, {{"gender", {}}}), AuditError);
  try {
    generate_cohort(5, 1, {{"gender", {{"male", 0.0}}}});
    FAIL("expected EmptyDistribution");
  } catch (const AuditError& e) {
    CHECK(e.code() == Errc::EmptyDistribution);
  }
}

TEST_CASE("apply_treatment changes only the facet-relevant attributes") {
  auto doc = doc_for("a", 5);
  doc.authored_at = 1000;

  const auto fmt = apply_treatment(doc, Facet::FileFormat, {.format_tag = "txt"});
  CHECK(fmt.format_tag == "txt");
  CHECK(fmt.source_tag == doc.source_tag);
  CHECK(fmt.content_seed == doc.content_seed);
  CHECK(fmt.authored_at == doc.authored_at);
  CHECK(fmt.subject_id == doc.subject_id);

  const auto url = apply_treatment(doc, Facet::UrlEmbedding);
  CHECK(url.embedded_link.has_value());
  CHECK(url.content_seed == doc.content_seed);
  const auto cleared = apply_treatment(url, Facet::UrlEmbedding, {.link_base = ""});
  CHECK_FALSE(cleared.embedded_link.has_value());

  const auto aged = apply_treatment(doc, Facet::ParticipantTime, {.participant_days = 240});
  CHECK(aged.authored_at == doc.authored_at + 240 * 86400);
  CHECK(aged.content_seed != doc.content_seed);
  CHECK(aged.subject_id == doc.subject_id);

  const auto alg = apply_treatment(doc, Facet::AlgorithmTime);
  CHECK(alg.content_seed == doc.content_seed);
  CHECK(alg.authored_at == doc.authored_at);

  CHECK_THROWS_AS(facet_from_string("resume_color"), AuditError);
  CHECK(facet_from_string("file_format") == Facet::FileFormat);
}

TEST_CASE("score_run builds a validated run table over a cohort") {
  const auto cohort = generate_cohort(25, 11, {});
  AdsBehaviorConfig cfg(range_schema());
  SyntheticAds ads(cfg);
  const auto run = score_run(ads, cohort.documents, "run-1", "file_format", "control", 500);
  CHECK(run.size() == 25);
  CHECK(run.run_id() == "run-1");
  CHECK(run.scored_at() == 500);
}

TEST_CASE("stable generator yields a perfectly stable audit") {
  const auto cohort = generate_cohort(40, 8, {});
  AdsBehaviorConfig cfg(range_schema());
  SyntheticAds ads(cfg);
  const auto control = score_run(ads, cohort.documents, "c", "file_format", "control", 0);
  std::vector<SyntheticDocument> treated;
  for (const auto& d : cohort.documents)
    treated.push_back(apply_treatment(d, Facet::FileFormat, {.format_tag = "txt"}));
  const auto treatment = score_run(ads, treated, "t", "file_format", "txt", 0);

  const auto set = pair_runs(control, treatment, cohort.subjects);
  for (const auto& cell : audit_rank_order(set, {})) {
    REQUIRE(cell.correlation.defined());
    CHECK(*cell.correlation.statistic == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cell.cls == RankOrderClass::MeetsDesirable);
  }
  const auto tv = total_variation(set);
  CHECK(tv.max == 0.0);
}
