#include "stabaudit/demo.hpp"

#include <filesystem>
#include <sstream>

#include "stabaudit/csv_io.hpp"
#include "stabaudit/errors.hpp"
#include "stabaudit/synth_ads.hpp"

namespace stabaudit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// fixed scenario clock; nothing in a demo reads the wall clock
const Timestamp kAuthoredAt = parse_rfc3339("2021-01-15T00:00:00Z");
const Timestamp kScoredBase = parse_rfc3339("2021-04-01T00:00:00Z");

Timestamp day(double days) { return kScoredBase + static_cast<Timestamp>(days * kSecondsPerDay); }

std::uint64_t subseed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix-style derivation, matching the generator's internal hashing
  std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ScoreSchema disc_0_10() {
  return ScoreSchema("synthetic-ads",
                     {{"Dominance", 0, 10},
                      {"Influence", 0, 10},
                      {"Steadiness", 0, 10},
                      {"Calculativeness", 0, 10}});
}

ScoreSchema disc_0_100() {
  return ScoreSchema("synthetic-ads",
                     {{"Dominance", 0, 100},
                      {"Influence", 0, 100},
                      {"Steadiness", 0, 100},
                      {"Conscientiousness", 0, 100}});
}

ScoreSchema disc_simplex() {
  return ScoreSchema("synthetic-ads",
                     {{"Dominance", 0, 100},
                      {"Influence", 0, 100},
                      {"Steadiness", 0, 100},
                      {"Conscientiousness", 0, 100}},
                     100.0);
}

DemographicSpec demo_demographics() {
  return {
      {"gender", {{"male", 0.60}, {"female", 0.38}, {"nonbinary", 0.02}}},
      {"primary_language", {{"english", 0.64}, {"other", 0.36}}},
  };
}

std::string demographics_csv(const Cohort& cohort) {
  std::ostringstream out;
  out << "subject_id,gender,primary_language\n";
  for (const auto& subject : cohort.subjects) {
    out << csv_escape(subject.subject_id);
    for (const char* attr : {"gender", "primary_language"}) {
      const auto found = subject.demographics.attributes.find(attr);
      out << ',' << (found == subject.demographics.attributes.end() ? "" : csv_escape(found->second));
    }
    out << '\n';
  }
  return out.str();
}

struct FacetPlan {
  Facet facet;
  Timestamp scored_at;
  TreatmentParams params;
};

struct ScenarioPlan {
  ScoreSchema schema;
  AdsBehaviorConfig ads;
  std::vector<FacetPlan> facets;
  Timestamp control_scored_at = kScoredBase;
  bool uses_random_guesser = false;
  json ground_truth;
};

ScenarioPlan make_plan(Scenario scenario, std::uint64_t seed) {
  const std::uint64_t ads_seed = subseed(seed, 2);
  json truth;
  truth["scenario"] = scenario_name(scenario);
  truth["seed"] = seed;
  truth["cohort_size"] = kDemoCohortSize;

  auto all_facets = [](double participant_days) {
    return std::vector<FacetPlan>{
        {Facet::FileFormat, kScoredBase, {}},
        {Facet::SourceContext, kScoredBase, {}},
        {Facet::UrlEmbedding, kScoredBase, {}},
        {Facet::AlgorithmTime, day(31), {}},
        {Facet::ParticipantTime, kScoredBase, {.participant_days = participant_days}},
    };
  };

  switch (scenario) {
    case Scenario::Stable: {
      AdsBehaviorConfig ads(disc_0_10());
      ads.base_seed = ads_seed;
      truth["expect"] = {{"rank_order_r", 1.0},
                         {"total_variation_max", 0.0},
                         {"significant_cells", 0}};
      return {disc_0_10(), std::move(ads), all_facets(0.0), kScoredBase, false, truth};
    }
    case Scenario::FileFormatUnstable: {
      AdsBehaviorConfig ads(disc_0_100());
      ads.base_seed = ads_seed;
      ads.facet_sensitivity["format:txt"] = 35.0;
      ads.cluster_centers = {{25.0, 65.0}, {25.0, 65.0}, {25.0, 65.0}, {25.0, 65.0}};
      ads.cluster_snap_radius = 15.0;
      truth["generator"] = {{"format_txt_sensitivity", 35.0},
                            {"cluster_centers", {25.0, 65.0}},
                            {"cluster_snap_radius", 15.0}};
      truth["expect"] = {{"gap", {40.0, 50.0}},
                         {"unstable_facet", "file_format"},
                         {"cluster_boundary", 45.0},
                         {"locational_family_size", 4}};
      return {disc_0_100(), std::move(ads), all_facets(0.0), kScoredBase, false, truth};
    }
    case Scenario::Discontinuous: {
      AdsBehaviorConfig ads(disc_0_100());
      ads.base_seed = ads_seed;
      ads.cluster_centers = {{25.0, 65.0}, {25.0, 65.0}, {25.0, 65.0}, {25.0, 65.0}};
      ads.cluster_snap_radius = 15.0;
      truth["generator"] = {{"cluster_centers", {25.0, 65.0}}, {"cluster_snap_radius", 15.0}};
      truth["expect"] = {{"gap", {40.0, 50.0}}, {"rank_order_r", 1.0}};
      return {disc_0_100(), std::move(ads), all_facets(0.0), kScoredBase, false, truth};
    }
    case Scenario::Linked: {
      AdsBehaviorConfig ads(disc_0_10());
      ads.base_seed = ads_seed;
      ads.linkage_enabled = true;
      // url_embedding is scored first and freezes every contact key; the
      // participant_time run then returns frozen vectors although the
      // documents' content changed
      std::vector<FacetPlan> facets{
          {Facet::UrlEmbedding, kScoredBase, {}},
          {Facet::ParticipantTime, kScoredBase, {.participant_days = 240.0}},
      };
      truth["generator"] = {{"linkage_enabled", true}};
      truth["expect"] = {{"participant_time_r", 1.0},
                         {"note", "frozen linkage masks real content change"},
                         {"linkage_count", kDemoCohortSize}};
      return {disc_0_10(), std::move(ads), std::move(facets), kScoredBase, false, truth};
    }
    case Scenario::Drifting: {
      AdsBehaviorConfig ads(disc_0_10());
      ads.base_seed = ads_seed;
      ads.drift_per_day = 0.02;
      ads.drift_reference = kScoredBase;
      std::vector<FacetPlan> facets{
          {Facet::FileFormat, day(2), {}},
          {Facet::SourceContext, day(4), {}},
          {Facet::UrlEmbedding, day(6), {}},
          {Facet::AlgorithmTime, day(31), {}},
          {Facet::ParticipantTime, day(8), {.participant_days = 0.0}},
      };
      truth["generator"] = {{"drift_per_day", 0.02},
                            {"facet_scored_offset_days", {2, 4, 6, 31, 8}}};
      // the shift is uniform across subjects, so ranks survive except for
      // ties created by clamping at the trait bounds
      truth["expect"] = {{"rank_order_r_min", 0.999},
                         {"locational_family_size", 20},
                         {"bonferroni_alpha", 0.0025},
                         {"all_cells_significant", true}};
      return {disc_0_10(), std::move(ads), std::move(facets), kScoredBase, false, truth};
    }
    case Scenario::Baseline: {
      AdsBehaviorConfig ads(disc_simplex());
      ads.base_seed = ads_seed;
      std::vector<FacetPlan> facets{{Facet::AlgorithmTime, kScoredBase, {}}};
      truth["generator"] = {{"random_guesser", true}};
      truth["expect"] = {{"abs_spearman_below", 0.2}, {"simplex_sum", 100.0}};
      return {disc_simplex(), std::move(ads), std::move(facets), kScoredBase, true, truth};
    }
  }
  throw AuditError(Errc::UnknownScenario, "unhandled scenario");
}

RunTable random_guesser_run(const ScoreSchema& schema, std::uint64_t seed, const Cohort& cohort,
                            const std::string& run_id, const std::string& label) {
  RunTable run(run_id, schema, "baseline", label, kScoredBase);
  for (std::size_t i = 0; i < cohort.subjects.size(); ++i)
    run.add_entry(cohort.subjects[i].subject_id, random_guesser(schema, subseed(seed, i)));
  return run;
}

}  // namespace

const char* scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::Stable: return "stable";
    case Scenario::FileFormatUnstable: return "file_format_unstable";
    case Scenario::Discontinuous: return "discontinuous";
    case Scenario::Linked: return "linked";
    case Scenario::Drifting: return "drifting";
    case Scenario::Baseline: return "baseline";
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& name) {
  for (Scenario s : {Scenario::Stable, Scenario::FileFormatUnstable, Scenario::Discontinuous,
                     Scenario::Linked, Scenario::Drifting, Scenario::Baseline})
    if (name == scenario_name(s)) return s;
  throw AuditError(Errc::UnknownScenario, "unknown scenario '" + name + "'");
}

ReportBundle run_demo(Scenario scenario, std::uint64_t seed, const std::string& out_dir) {
  auto plan = make_plan(scenario, seed);
  const auto cohort = generate_cohort(kDemoCohortSize, subseed(seed, 1), demo_demographics(),
                                      kAuthoredAt);

  const fs::path data_dir = fs::path(out_dir) / "data";
  write_text_file((data_dir / "demographics.csv").string(), demographics_csv(cohort));

  json facet_list = json::array();
  if (plan.uses_random_guesser) {
    const auto control =
        random_guesser_run(plan.schema, subseed(seed, 100), cohort, "control", "control");
    const auto treatment =
        random_guesser_run(plan.schema, subseed(seed, 200), cohort, "baseline", "baseline");
    write_text_file((data_dir / "control.csv").string(), serialize_run_csv(control));
    write_text_file((data_dir / "baseline.csv").string(), serialize_run_csv(treatment));
    facet_list.push_back({{"name", "baseline"},
                          {"control", "data/control.csv"},
                          {"treatment", "data/baseline.csv"}});
  } else {
    SyntheticAds ads(plan.ads);
    const auto control = score_run(ads, cohort.documents, "control", "control", "control",
                                   plan.control_scored_at);
    write_text_file((data_dir / "control.csv").string(), serialize_run_csv(control));
    for (const auto& facet_plan : plan.facets) {
      std::vector<SyntheticDocument> docs;
      docs.reserve(cohort.documents.size());
      for (const auto& doc : cohort.documents)
        docs.push_back(apply_treatment(doc, facet_plan.facet, facet_plan.params));
      const std::string name = facet_name(facet_plan.facet);
      const auto run = score_run(ads, docs, name, name, name, facet_plan.scored_at);
      write_text_file((data_dir / (name + ".csv")).string(), serialize_run_csv(run));
      facet_list.push_back({{"name", name},
                            {"control", "data/control.csv"},
                            {"treatment", "data/" + name + ".csv"}});
    }
    if (plan.ads.linkage_enabled)
      plan.ground_truth["linkage_entries"] = ads.linkage().size();
  }

  json config;
  config["system_name"] = plan.schema.system_name();
  json traits = json::array();
  for (const auto& t : plan.schema.traits())
    traits.push_back({{"name", t.name}, {"min", t.min}, {"max", t.max}});
  config["schema"]["traits"] = std::move(traits);
  if (plan.schema.simplex_sum()) config["schema"]["simplex_sum"] = *plan.schema.simplex_sum();
  config["facets"] = std::move(facet_list);
  config["demographics"] = "data/demographics.csv";
  config["subgroups"] = {{{"attribute", "gender"}, {"min_group_size", 10}},
                         {{"attribute", "primary_language"}, {"min_group_size", 10}}};
  config["thresholds"] = {{"bare_minimum", 0.90}, {"desirable", 0.95}, {"nominal_alpha", 0.05}};
  config["corrections"] = {"bonferroni", "benjamini_hochberg"};
  config["gap_fraction"] = 0.10;
  config["output_dir"] = ".";
  const auto config_path = (fs::path(out_dir) / "config.json").string();
  write_text_file(config_path, config.dump(2) + "\n");

  ReportBundle bundle = run_audit(load_audit_config(config_path));
  bundle.ground_truth = std::move(plan.ground_truth);
  bundle.files["report.json"] = report_to_json(bundle.report, bundle.ground_truth);
  return bundle;
}

}  // namespace stabaudit
