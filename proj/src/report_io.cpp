#include "stabaudit/report_io.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <set>
#include <sstream>

#include "stabaudit/csv_io.hpp"
#include "stabaudit/errors.hpp"
#include "stabaudit/svg_plots.hpp"

namespace stabaudit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slug(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else
      out += '_';
  }
  return out;
}

std::string resolve_path(const std::string& base_dir, const std::string& path) {
  fs::path p(path);
  if (!p.is_absolute() && !base_dir.empty()) p = fs::path(base_dir) / p;
  std::string out = p.lexically_normal().string();
  while (out.size() > 1 && out.back() == '/') out.pop_back();
  return out;
}

const json& require_field(const json& node, const char* key) {
  const auto it = node.find(key);
  if (it == node.end())
    throw AuditError(Errc::BadConfig, std::string("missing required field '") + key + "'");
  return *it;
}

json test_result_to_json(const TestResult& result) {
  json j;
  j["kind"] = test_kind_name(result.kind);
  j["n"] = result.n;
  j["method"] = result.method_note;
  j["statistic"] = result.statistic ? json(*result.statistic) : json(nullptr);
  j["p_value"] = result.p_value ? json(*result.p_value) : json(nullptr);
  j["defined"] = result.defined();
  return j;
}

TestKind test_kind_from_name(const std::string& name) {
  for (TestKind k : {TestKind::Spearman, TestKind::Pearson, TestKind::KendallTauB,
                     TestKind::WilcoxonSignedRank, TestKind::PairedT, TestKind::StudentT,
                     TestKind::MannWhitneyU, TestKind::KruskalWallis, TestKind::OneWayAnova})
    if (name == test_kind_name(k)) return k;
  throw AuditError(Errc::BadReport, "unknown test kind '" + name + "'");
}

TestResult test_result_from_json(const json& j) {
  TestResult result;
  result.kind = test_kind_from_name(j.at("kind").get<std::string>());
  result.n = j.at("n").get<std::size_t>();
  result.method_note = j.at("method").get<std::string>();
  if (!j.at("statistic").is_null()) result.statistic = j.at("statistic").get<double>();
  if (!j.at("p_value").is_null()) result.p_value = j.at("p_value").get<double>();
  return result;
}

json correction_to_json(const CorrectionResult& correction) {
  json j;
  j["method"] = correction_method_name(correction.method);
  j["nominal_alpha"] = correction.nominal_alpha;
  j["test_count"] = correction.test_count;
  j["operative_alpha"] = correction.operative_alpha;
  j["rejections"] = correction.rejections();
  json entries = json::array();
  for (const auto& e : correction.per_test) {
    json entry;
    entry["p_value"] = e.p_value;
    entry["rank"] = e.rank;
    entry["threshold"] = e.threshold;
    entry["reject"] = e.reject;
    entries.push_back(std::move(entry));
  }
  j["per_test"] = std::move(entries);
  return j;
}

CorrectionResult correction_from_json(const json& j) {
  CorrectionResult c;
  const auto method = j.at("method").get<std::string>();
  if (method == correction_method_name(CorrectionMethod::Bonferroni))
    c.method = CorrectionMethod::Bonferroni;
  else if (method == correction_method_name(CorrectionMethod::BenjaminiHochberg))
    c.method = CorrectionMethod::BenjaminiHochberg;
  else
    throw AuditError(Errc::BadReport, "unknown correction method '" + method + "'");
  c.nominal_alpha = j.at("nominal_alpha").get<double>();
  c.test_count = j.at("test_count").get<std::size_t>();
  c.operative_alpha = j.at("operative_alpha").get<double>();
  for (const auto& e : j.at("per_test")) {
    CorrectionEntry entry;
    entry.p_value = e.at("p_value").get<double>();
    entry.rank = e.at("rank").get<std::size_t>();
    entry.threshold = e.at("threshold").get<double>();
    entry.reject = e.at("reject").get<bool>();
    c.per_test.push_back(entry);
  }
  return c;
}

RankOrderClass rank_order_class_from_name(const std::string& name) {
  for (RankOrderClass cls : {RankOrderClass::MeetsDesirable, RankOrderClass::MeetsMinimum,
                             RankOrderClass::Unstable, RankOrderClass::Undefined})
    if (name == rank_order_class_name(cls)) return cls;
  throw AuditError(Errc::BadReport, "unknown rank-order class '" + name + "'");
}

json tv_to_json(const TotalVariation& tv) {
  json j;
  j["median"] = tv.median;
  j["mean"] = tv.mean;
  j["max"] = tv.max;
  j["per_subject"] = tv.per_subject;
  return j;
}

TotalVariation tv_from_json(const json& j) {
  TotalVariation tv;
  tv.median = j.at("median").get<double>();
  tv.mean = j.at("mean").get<double>();
  tv.max = j.at("max").get<double>();
  tv.per_subject = j.at("per_subject").get<std::vector<double>>();
  return tv;
}

std::string bool_cell(bool v) { return v ? "true" : "false"; }

}  // namespace

AuditConfig parse_audit_config(const std::string& json_text, const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw AuditError(Errc::BadConfig, std::string("config is not valid JSON: ") + e.what());
  }
  try {
    const auto& schema_node = require_field(root, "schema");
    std::vector<TraitSpec> traits;
    for (const auto& t : require_field(schema_node, "traits"))
      traits.push_back({t.at("name").get<std::string>(), t.at("min").get<double>(),
                        t.at("max").get<double>()});
    std::optional<double> simplex;
    if (schema_node.contains("simplex_sum") && !schema_node["simplex_sum"].is_null())
      simplex = schema_node["simplex_sum"].get<double>();
    const std::string system_name = require_field(root, "system_name").get<std::string>();

    AuditConfig config(ScoreSchema(system_name, std::move(traits), simplex));
    config.system_name = system_name;

    for (const auto& f : require_field(root, "facets")) {
      FacetFiles files;
      files.name = f.at("name").get<std::string>();
      files.control_path = resolve_path(base_dir, f.at("control").get<std::string>());
      files.treatment_path = resolve_path(base_dir, f.at("treatment").get<std::string>());
      config.facets.push_back(std::move(files));
    }
    {
      std::set<std::string> names;
      for (const auto& f : config.facets)
        if (!names.insert(f.name).second)
          throw AuditError(Errc::BadConfig, "duplicate facet name '" + f.name + "'");
    }

    if (root.contains("demographics") && !root["demographics"].is_null())
      config.demographics_path = resolve_path(base_dir, root["demographics"].get<std::string>());

    if (root.contains("subgroups")) {
      for (const auto& s : root["subgroups"]) {
        SubgroupSpec spec;
        spec.attribute = s.at("attribute").get<std::string>();
        if (s.contains("min_group_size")) spec.min_group_size = s["min_group_size"].get<std::size_t>();
        if (spec.min_group_size == 0)
          throw AuditError(Errc::BadConfig, "min_group_size must be positive");
        for (const auto& existing : config.subgroups)
          if (existing.attribute == spec.attribute)
            throw AuditError(Errc::BadConfig,
                             "duplicate subgroup attribute '" + spec.attribute + "'");
        config.subgroups.push_back(std::move(spec));
      }
    }

    if (root.contains("thresholds")) {
      const auto& t = root["thresholds"];
      if (t.contains("bare_minimum")) config.thresholds.bare_minimum = t["bare_minimum"].get<double>();
      if (t.contains("desirable")) config.thresholds.desirable = t["desirable"].get<double>();
      if (t.contains("nominal_alpha"))
        config.thresholds.nominal_alpha = t["nominal_alpha"].get<double>();
    }
    validate_thresholds(config.thresholds);

    if (root.contains("corrections")) {
      config.correction_methods.clear();
      for (const auto& m : root["corrections"]) {
        const auto name = m.get<std::string>();
        if (name == "bonferroni")
          config.correction_methods.push_back(CorrectionMethod::Bonferroni);
        else if (name == "benjamini_hochberg")
          config.correction_methods.push_back(CorrectionMethod::BenjaminiHochberg);
        else
          throw AuditError(Errc::BadConfig, "unknown correction method '" + name + "'");
      }
      if (config.correction_methods.empty())
        throw AuditError(Errc::BadConfig, "corrections list must not be empty");
    }

    if (root.contains("gap_fraction")) config.gap_fraction = root["gap_fraction"].get<double>();
    if (!(config.gap_fraction > 0.0) || !(config.gap_fraction <= 1.0))
      throw AuditError(Errc::BadConfig, "gap_fraction must lie in (0, 1]");

    if (root.contains("output_dir"))
      config.output_dir = resolve_path(base_dir, root["output_dir"].get<std::string>());

    if (config.facets.empty())
      throw AuditError(Errc::BadConfig, "an audit with zero facets is a misconfiguration");
    return config;
  } catch (const json::exception& e) {
    throw AuditError(Errc::BadConfig, std::string("malformed config: ") + e.what());
  }
}

AuditConfig load_audit_config(const std::string& path) {
  const auto base = fs::path(path).parent_path().string();
  try {
    return parse_audit_config(read_text_file(path), base);
  } catch (const AuditError& e) {
    throw AuditError(e.code() == Errc::IoFailure ? Errc::BadConfig : e.code(),
                     path + ": " + e.what());
  }
}

ReportBundle run_audit(const AuditConfig& config) {
  // ingest
  std::map<std::string, DemographicProfile> profiles;
  if (config.demographics_path) profiles = parse_demographics_csv(*config.demographics_path);
  std::vector<SubjectRecord> cohort;
  for (const auto& [id, profile] : profiles) cohort.push_back({id, profile});

  std::map<std::string, RunTable> runs_by_path;  // parse each file once
  std::map<std::string, std::string> run_ids;    // path -> diagnostic run id
  std::set<std::string> used_ids;
  auto load_run = [&](const std::string& path, const std::string& facet,
                      const std::string& treatment_label) -> const RunTable& {
    auto found = runs_by_path.find(path);
    if (found != runs_by_path.end()) return found->second;
    std::string id = fs::path(path).stem().string();
    if (id.empty()) id = "run";
    std::string unique = id;
    for (int k = 2; !used_ids.insert(unique).second; ++k)
      unique = id + "#" + std::to_string(k);
    run_ids[path] = unique;
    return runs_by_path
        .emplace(path, parse_runs_csv(path, config.schema, unique, facet, treatment_label))
        .first->second;
  };

  AuditInputs inputs;
  inputs.system_name = config.system_name;
  inputs.thresholds = config.thresholds;
  inputs.gap_fraction = config.gap_fraction;
  inputs.subgroups = config.subgroups;
  for (const auto& facet : config.facets) {
    const auto& control = load_run(facet.control_path, facet.name, "control");
    const auto& treatment = load_run(facet.treatment_path, facet.name, "treatment");
    auto set = pair_runs(control, treatment, cohort);
    set.facet = facet.name;
    inputs.sets.push_back(std::move(set));
  }
  for (const auto& [path, run] : runs_by_path) inputs.diagnostic_runs.push_back(&run);

  ReportBundle bundle;
  bundle.report = run_audit_suite(inputs);

  // demographics subjects that never appear in any run: retained, unused
  {
    std::set<std::string> scored;
    for (const auto& [path, run] : runs_by_path)
      for (const auto& [id, v] : run.entries()) scored.insert(id);
    std::size_t unused = 0;
    for (const auto& [id, profile] : profiles)
      if (!scored.count(id)) ++unused;
    if (unused > 0)
      bundle.report.warnings.push_back(
          std::to_string(unused) + " subject(s) in the demographics file appear in no run");
  }

  // plots
  for (const auto& set : inputs.sets) {
    for (std::size_t t = 0; t < set.schema.trait_count(); ++t) {
      const auto& trait = set.schema.traits()[t];
      std::vector<ScatterPoint> points;
      points.reserve(set.pairs.size());
      for (const auto& pair : set.pairs)
        points.push_back({pair.control.values[t], pair.treatment.values[t]});
      bundle.files["plots/scatter_" + slug(set.facet) + "_" + slug(trait.name) + ".svg"] =
          render_scatter(set.facet + " / " + trait.name, "control score", "treatment score",
                         trait.min, trait.max, points);
    }
  }
  {
    std::vector<BoxGroup> groups;
    for (const auto& facet : bundle.report.facets)
      groups.push_back({facet, bundle.report.facet_total_variation.at(facet).per_subject,
                        false, ""});
    bundle.files["plots/box_total_variation.svg"] =
        render_box("normalized L1 by facet", "normalized L1", groups);
  }
  for (const auto& spec : config.subgroups) {
    std::vector<BoxGroup> groups;
    for (const auto& set : inputs.sets) {
      std::map<std::string, PairedAuditSet> parts;
      try {
        parts = partition_by_attribute(set, spec.attribute);
      } catch (const AuditError&) {
        continue;  // attribute absent for this facet; already warned
      }
      for (const auto& [value, group] : parts) {
        BoxGroup box;
        box.label = set.facet + "\n" + spec.attribute + "=" + value;
        if (!subgroup_meets_minimum(spec, group.pairs.size())) {
          box.skipped = true;
          box.note = "skipped (n=" + std::to_string(group.pairs.size()) + ")";
        } else {
          box.samples = total_variation(group).per_subject;
        }
        groups.push_back(std::move(box));
      }
    }
    if (!groups.empty()) {
      bool any_drawable = false;
      for (const auto& g : groups) any_drawable |= !g.skipped;
      if (any_drawable)
        bundle.files["plots/box_total_variation_" + slug(spec.attribute) + ".svg"] = render_box(
            "normalized L1 by facet and " + spec.attribute, "normalized L1", groups);
    }
  }

  bundle.files["report.json"] = report_to_json(bundle.report, bundle.ground_truth);
  bundle.files["summary.csv"] = report_to_csv(bundle.report);
  return bundle;
}

std::string report_to_json(const AuditReport& report, const json& ground_truth) {
  json root;
  root["schema_version"] = kReportSchemaVersion;
  root["system_name"] = report.system_name;
  root["thresholds"] = {{"bare_minimum", report.thresholds.bare_minimum},
                        {"desirable", report.thresholds.desirable},
                        {"nominal_alpha", report.thresholds.nominal_alpha}};
  root["facets"] = report.facets;
  root["traits"] = report.traits;

  json verdicts = json::array();
  for (const auto& v : report.verdicts) {
    json row;
    row["facet"] = v.facet;
    row["trait"] = v.trait;
    row["subgroup"] = v.subgroup;
    row["n"] = v.n;
    row["correlation"] = test_result_to_json(v.correlation);
    row["rank_order_class"] = rank_order_class_name(v.rank_order_class);
    row["locational"] = test_result_to_json(v.locational);
    row["locational_no_change"] = v.locational_no_change;
    row["significant_bonferroni"] = v.significant_bonferroni;
    row["significant_bh"] = v.significant_bh;
    row["control_median"] = v.control_median;
    row["treatment_median"] = v.treatment_median;
    row["tv"] = {{"median", v.tv_median}, {"mean", v.tv_mean}, {"max", v.tv_max}};
    verdicts.push_back(std::move(row));
  }
  root["verdicts"] = std::move(verdicts);

  json corrections = json::array();
  for (const auto& ledger : report.corrections) {
    json j;
    j["family"] = ledger.family_label;
    j["members"] = ledger.members;
    j["bonferroni"] = correction_to_json(ledger.bonferroni);
    j["benjamini_hochberg"] = correction_to_json(ledger.benjamini_hochberg);
    corrections.push_back(std::move(j));
  }
  root["corrections"] = std::move(corrections);

  json diagnostics = json::array();
  for (const auto& run : report.diagnostics) {
    json j;
    j["run_id"] = run.run_id;
    json traits = json::array();
    for (const auto& t : run.traits) {
      json trait;
      trait["trait"] = t.trait;
      trait["n"] = t.n;
      trait["median"] = t.median;
      trait["skewness"] = t.skewness ? json(*t.skewness) : json(nullptr);
      json gaps = json::array();
      for (const auto& [lo, hi] : t.gaps) gaps.push_back({{"low", lo}, {"high", hi}});
      trait["gaps"] = std::move(gaps);
      traits.push_back(std::move(trait));
    }
    j["traits"] = std::move(traits);
    diagnostics.push_back(std::move(j));
  }
  root["diagnostics"] = std::move(diagnostics);

  json tv;
  for (const auto& [facet, samples] : report.facet_total_variation) {
    tv[facet] = tv_to_json(samples);
    const auto sub = report.subgroup_total_variation.find(facet);
    if (sub != report.subgroup_total_variation.end()) {
      json subgroups;
      for (const auto& [label, group_tv] : sub->second) subgroups[label] = tv_to_json(group_tv);
      tv[facet]["subgroups"] = std::move(subgroups);
    }
  }
  root["total_variation"] = std::move(tv);

  root["warnings"] = report.warnings;
  if (!ground_truth.is_null()) root["ground_truth"] = ground_truth;
  return root.dump(2) + "\n";
}

AuditReport report_from_json(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw AuditError(Errc::BadReport, std::string("report is not valid JSON: ") + e.what());
  }
  try {
    if (root.at("schema_version").get<int>() != kReportSchemaVersion)
      throw AuditError(Errc::BadReport, "unsupported report schema version");
    AuditReport report;
    report.system_name = root.at("system_name").get<std::string>();
    const auto& t = root.at("thresholds");
    report.thresholds = {t.at("bare_minimum").get<double>(), t.at("desirable").get<double>(),
                         t.at("nominal_alpha").get<double>()};
    report.facets = root.at("facets").get<std::vector<std::string>>();
    report.traits = root.at("traits").get<std::vector<std::string>>();
    for (const auto& row : root.at("verdicts")) {
      TraitVerdict v;
      v.facet = row.at("facet").get<std::string>();
      v.trait = row.at("trait").get<std::string>();
      v.subgroup = row.at("subgroup").get<std::string>();
      v.n = row.at("n").get<std::size_t>();
      v.correlation = test_result_from_json(row.at("correlation"));
      v.rank_order_class = rank_order_class_from_name(row.at("rank_order_class").get<std::string>());
      v.locational = test_result_from_json(row.at("locational"));
      v.locational_no_change = row.at("locational_no_change").get<bool>();
      v.significant_bonferroni = row.at("significant_bonferroni").get<bool>();
      v.significant_bh = row.at("significant_bh").get<bool>();
      v.control_median = row.at("control_median").get<double>();
      v.treatment_median = row.at("treatment_median").get<double>();
      v.tv_median = row.at("tv").at("median").get<double>();
      v.tv_mean = row.at("tv").at("mean").get<double>();
      v.tv_max = row.at("tv").at("max").get<double>();
      report.verdicts.push_back(std::move(v));
    }
    for (const auto& j : root.at("corrections")) {
      CorrectionLedger ledger;
      ledger.family_label = j.at("family").get<std::string>();
      ledger.members = j.at("members").get<std::vector<std::string>>();
      ledger.bonferroni = correction_from_json(j.at("bonferroni"));
      ledger.benjamini_hochberg = correction_from_json(j.at("benjamini_hochberg"));
      report.corrections.push_back(std::move(ledger));
    }
    for (const auto& j : root.at("diagnostics")) {
      RunDiagnostics run;
      run.run_id = j.at("run_id").get<std::string>();
      for (const auto& trait : j.at("traits")) {
        DistributionSummary summary;
        summary.trait = trait.at("trait").get<std::string>();
        summary.n = trait.at("n").get<std::size_t>();
        summary.median = trait.at("median").get<double>();
        if (!trait.at("skewness").is_null()) summary.skewness = trait.at("skewness").get<double>();
        for (const auto& gap : trait.at("gaps"))
          summary.gaps.emplace_back(gap.at("low").get<double>(), gap.at("high").get<double>());
        run.traits.push_back(std::move(summary));
      }
      report.diagnostics.push_back(std::move(run));
    }
    for (const auto& [facet, j] : root.at("total_variation").items()) {
      report.facet_total_variation.emplace(facet, tv_from_json(j));
      if (j.contains("subgroups"))
        for (const auto& [label, sub] : j["subgroups"].items())
          report.subgroup_total_variation[facet].emplace(label, tv_from_json(sub));
    }
    report.warnings = root.at("warnings").get<std::vector<std::string>>();
    return report;
  } catch (const json::exception& e) {
    throw AuditError(Errc::BadReport, std::string("malformed report: ") + e.what());
  }
}

std::string report_to_csv(const AuditReport& report) {
  std::ostringstream out;
  out << "facet,trait,subgroup,n,spearman_r,rank_order_class,wilcoxon_p,locational_no_change,"
         "significant_bonferroni,significant_bh,control_median,treatment_median,tv_median,"
         "tv_mean,tv_max\n";
  for (const auto& v : report.verdicts) {
    out << csv_escape(v.facet) << ',' << csv_escape(v.trait) << ',' << csv_escape(v.subgroup)
        << ',' << v.n << ',';
    if (v.correlation.statistic) out << format_double(*v.correlation.statistic);
    out << ',' << rank_order_class_name(v.rank_order_class) << ',';
    if (v.locational.p_value) out << format_double(*v.locational.p_value);
    out << ',' << bool_cell(v.locational_no_change) << ',' << bool_cell(v.significant_bonferroni)
        << ',' << bool_cell(v.significant_bh) << ',' << format_double(v.control_median) << ','
        << format_double(v.treatment_median) << ',' << format_double(v.tv_median) << ','
        << format_double(v.tv_mean) << ',' << format_double(v.tv_max) << '\n';
  }
  return out.str();
}

std::string report_to_text(const AuditReport& report) {
  std::ostringstream out;
  out << "stability audit: " << report.system_name << "\n";
  out << "thresholds: bare_minimum=" << format_double(report.thresholds.bare_minimum)
      << " desirable=" << format_double(report.thresholds.desirable)
      << " nominal_alpha=" << format_double(report.thresholds.nominal_alpha) << "\n";
  out << report.facets.size() << " facet(s), " << report.traits.size() << " trait(s), "
      << report.verdicts.size() << " verdict(s)\n\n";

  auto pad = [](std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
  };
  std::size_t facet_w = 5, trait_w = 5, group_w = 8;
  for (const auto& v : report.verdicts) {
    facet_w = std::max(facet_w, v.facet.size());
    trait_w = std::max(trait_w, v.trait.size());
    group_w = std::max(group_w, v.subgroup.size());
  }
  out << pad("facet", facet_w + 2) << pad("trait", trait_w + 2) << pad("subgroup", group_w + 2)
      << pad("n", 6) << pad("r", 10) << pad("class", 17) << pad("wilcoxon_p", 12)
      << pad("bonf", 6) << pad("bh", 4) << "tv_median\n";
  for (const auto& v : report.verdicts) {
    char r_buf[32] = "-";
    if (v.correlation.statistic) std::snprintf(r_buf, sizeof(r_buf), "%.4f", *v.correlation.statistic);
    char p_buf[32] = "-";
    if (v.locational.p_value) std::snprintf(p_buf, sizeof(p_buf), "%.3g", *v.locational.p_value);
    if (v.locational_no_change) std::snprintf(p_buf, sizeof(p_buf), "no-change");
    char tv_buf[32];
    std::snprintf(tv_buf, sizeof(tv_buf), "%.5f", v.tv_median);
    out << pad(v.facet, facet_w + 2) << pad(v.trait, trait_w + 2) << pad(v.subgroup, group_w + 2)
        << pad(std::to_string(v.n), 6) << pad(r_buf, 10)
        << pad(rank_order_class_name(v.rank_order_class), 17) << pad(p_buf, 12)
        << pad(v.significant_bonferroni ? "yes" : "no", 6) << pad(v.significant_bh ? "yes" : "no", 4)
        << tv_buf << "\n";
  }

  out << "\ncorrections:\n";
  if (report.corrections.empty()) out << "  (no locational tests were performed)\n";
  for (const auto& ledger : report.corrections) {
    out << "  " << ledger.family_label << ": m=" << ledger.bonferroni.test_count
        << ", bonferroni alpha=" << format_double(ledger.bonferroni.operative_alpha) << " ("
        << ledger.bonferroni.rejections() << " rejected)"
        << ", benjamini-hochberg cutoff=" << format_double(ledger.benjamini_hochberg.operative_alpha)
        << " (" << ledger.benjamini_hochberg.rejections() << " rejected)\n";
  }

  bool any_gap = false;
  for (const auto& run : report.diagnostics)
    for (const auto& t : run.traits) any_gap |= !t.gaps.empty();
  if (any_gap) {
    out << "\ndistribution gaps:\n";
    for (const auto& run : report.diagnostics)
      for (const auto& t : run.traits)
        for (const auto& [lo, hi] : t.gaps)
          out << "  run " << run.run_id << ", " << t.trait << ": (" << format_double(lo) << ", "
              << format_double(hi) << ")\n";
  }

  if (!report.warnings.empty()) {
    out << "\nwarnings:\n";
    for (const auto& w : report.warnings) out << "  - " << w << "\n";
  }
  return out.str();
}

void write_bundle(const ReportBundle& bundle, const std::string& out_dir) {
  {
    std::error_code ec;
    fs::remove(fs::path(out_dir) / "error.json", ec);  // stale manifest from a prior failure
  }
  std::vector<std::string> written;
  try {
    for (const auto& [rel, content] : bundle.files) {
      const auto path = (fs::path(out_dir) / rel).string();
      write_text_file(path, content);
      written.push_back(path);
    }
  } catch (const AuditError& e) {
    for (const auto& path : written) {
      std::error_code ec;
      fs::remove(path, ec);
    }
    write_error_manifest(out_dir, errc_name(e.code()),
                         static_cast<int>(error_class(e.code())), e.what());
    throw;
  }
}

void write_error_manifest(const std::string& out_dir, const std::string& error_name,
                          int exit_class, const std::string& message) {
  // report artifacts are all-or-nothing; drop anything stale so the manifest
  // is the only report-side content left
  std::error_code ec;
  fs::remove(fs::path(out_dir) / "report.json", ec);
  fs::remove(fs::path(out_dir) / "summary.csv", ec);
  fs::remove_all(fs::path(out_dir) / "plots", ec);
  json manifest;
  manifest["error"] = error_name;
  manifest["exit_code"] = exit_class;
  manifest["message"] = message;
  try {
    write_text_file((fs::path(out_dir) / "error.json").string(), manifest.dump(2) + "\n");
  } catch (const AuditError&) {
    // nothing left to do if even the manifest cannot be written
  }
}

}  // namespace stabaudit
