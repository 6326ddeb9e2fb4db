#include "stabaudit/auditor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "stabaudit/errors.hpp"

namespace stabaudit {

namespace {

std::vector<double> trait_column(const std::vector<ScorePair>& pairs, std::size_t trait,
                                 bool treatment) {
  std::vector<double> column(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    column[i] = treatment ? pairs[i].treatment.values[trait] : pairs[i].control.values[trait];
  return column;
}

LocationalCell locational_cell(const PairedAuditSet& set, std::size_t trait) {
  LocationalCell cell;
  cell.facet = set.facet;
  cell.trait = set.schema.traits()[trait].name;
  const auto control = trait_column(set.pairs, trait, false);
  const auto treatment = trait_column(set.pairs, trait, true);
  cell.control_median = median(control);
  cell.treatment_median = median(treatment);
  try {
    cell.test = wilcoxon_signed_rank(treatment, control);
  } catch (const AuditError& e) {
    cell.test.kind = TestKind::WilcoxonSignedRank;
    cell.test.n = set.pairs.size();
    if (e.code() == Errc::AllZeroDifferences) {
      cell.no_change = true;
      cell.test.method_note = "no locational change: all paired differences are zero";
    } else {
      cell.test.method_note = std::string("not computed: ") + e.what();
    }
  }
  return cell;
}

std::string subgroup_label(const std::string& attribute, const std::string& value) {
  return attribute + "=" + value;
}

std::string cell_key(const TraitVerdict& v) {
  return v.facet + ":" + v.trait + ":" + v.subgroup;
}

// Verdict rows for one paired set under one subgroup label ("overall" or
// "attribute=value"). Significance flags stay unset here.
std::vector<TraitVerdict> verdicts_for_set(const PairedAuditSet& set, const std::string& subgroup,
                                           const StabilityThresholds& thresholds) {
  const auto rank_cells = audit_rank_order(set, thresholds);
  const auto tv = total_variation(set);
  std::vector<TraitVerdict> verdicts;
  verdicts.reserve(rank_cells.size());
  for (std::size_t t = 0; t < rank_cells.size(); ++t) {
    TraitVerdict v;
    v.facet = set.facet;
    v.trait = rank_cells[t].trait;
    v.subgroup = subgroup;
    v.n = set.pairs.size();
    v.correlation = rank_cells[t].correlation;
    v.rank_order_class = rank_cells[t].cls;
    const auto loc = locational_cell(set, t);
    v.locational = loc.test;
    v.locational_no_change = loc.no_change;
    v.control_median = loc.control_median;
    v.treatment_median = loc.treatment_median;
    v.tv_median = tv.median;
    v.tv_mean = tv.mean;
    v.tv_max = tv.max;
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

// Applies both corrections to the verdicts whose locational test produced a
// p-value and fills their significance flags. Returns the ledger, or nullopt
// for an empty family.
std::optional<CorrectionLedger> correct_family(const std::string& label,
                                               std::vector<TraitVerdict*> verdicts,
                                               double nominal_alpha) {
  std::vector<TraitVerdict*> family;
  std::vector<double> p_values;
  for (auto* v : verdicts) {
    if (v->locational.p_value) {
      family.push_back(v);
      p_values.push_back(*v->locational.p_value);
    }
  }
  if (family.empty()) return std::nullopt;

  CorrectionLedger ledger;
  ledger.family_label = label;
  ledger.bonferroni = bonferroni_correction(p_values, nominal_alpha);
  ledger.benjamini_hochberg = benjamini_hochberg(p_values, nominal_alpha);
  for (std::size_t i = 0; i < family.size(); ++i) {
    ledger.members.push_back(cell_key(*family[i]));
    family[i]->significant_bonferroni = ledger.bonferroni.per_test[i].reject;
    family[i]->significant_bh = ledger.benjamini_hochberg.per_test[i].reject;
  }
  return ledger;
}

}  // namespace

void validate_thresholds(const StabilityThresholds& thresholds) {
  if (!(thresholds.bare_minimum > 0.0) || !(thresholds.bare_minimum <= thresholds.desirable) ||
      !(thresholds.desirable <= 1.0))
    throw AuditError(Errc::BadConfig, "thresholds must satisfy 0 < bare_minimum <= desirable <= 1");
  if (!(thresholds.nominal_alpha > 0.0) || !(thresholds.nominal_alpha < 1.0))
    throw AuditError(Errc::BadConfig, "nominal_alpha must lie in (0, 1)");
}

const char* rank_order_class_name(RankOrderClass cls) {
  switch (cls) {
    case RankOrderClass::MeetsDesirable: return "meets_desirable";
    case RankOrderClass::MeetsMinimum: return "meets_minimum";
    case RankOrderClass::Unstable: return "unstable";
    case RankOrderClass::Undefined: return "undefined";
  }
  return "undefined";
}

RankOrderClass classify_rank_order(const TestResult& correlation,
                                   const StabilityThresholds& thresholds) {
  if (!correlation.defined()) return RankOrderClass::Undefined;
  const double r = *correlation.statistic;
  if (r >= thresholds.desirable) return RankOrderClass::MeetsDesirable;
  if (r >= thresholds.bare_minimum) return RankOrderClass::MeetsMinimum;
  return RankOrderClass::Unstable;
}

std::vector<RankOrderCell> audit_rank_order(const PairedAuditSet& set,
                                            const StabilityThresholds& thresholds) {
  validate_thresholds(thresholds);
  if (set.pairs.size() < 3)
    throw AuditError(Errc::TooFewPairs, "rank-order audit needs at least 3 pairs, got " +
                                            std::to_string(set.pairs.size()));
  std::vector<RankOrderCell> cells;
  cells.reserve(set.schema.trait_count());
  for (std::size_t t = 0; t < set.schema.trait_count(); ++t) {
    RankOrderCell cell;
    cell.trait = set.schema.traits()[t].name;
    cell.correlation =
        spearman(trait_column(set.pairs, t, false), trait_column(set.pairs, t, true));
    cell.cls = classify_rank_order(cell.correlation, thresholds);
    cells.push_back(std::move(cell));
  }
  return cells;
}

LocationalAudit audit_locational(const std::vector<PairedAuditSet>& sets,
                                 const StabilityThresholds& thresholds) {
  validate_thresholds(thresholds);
  LocationalAudit audit;
  for (const auto& set : sets) {
    if (set.pairs.empty()) throw AuditError(Errc::EmptyInput, "paired set with no pairs");
    for (std::size_t t = 0; t < set.schema.trait_count(); ++t)
      audit.cells.push_back(locational_cell(set, t));
  }
  std::vector<double> p_values;
  for (std::size_t i = 0; i < audit.cells.size(); ++i) {
    if (audit.cells[i].test.p_value) {
      audit.family.push_back(i);
      p_values.push_back(*audit.cells[i].test.p_value);
    }
  }
  if (!p_values.empty()) {
    audit.bonferroni = bonferroni_correction(p_values, thresholds.nominal_alpha);
    audit.benjamini_hochberg = benjamini_hochberg(p_values, thresholds.nominal_alpha);
  }
  return audit;
}

TotalVariation total_variation(const PairedAuditSet& set) {
  if (set.pairs.empty()) throw AuditError(Errc::EmptyInput, "paired set with no pairs");
  const double constant = normalization_constant(set.schema);
  TotalVariation tv;
  tv.per_subject.reserve(set.pairs.size());
  for (const auto& pair : set.pairs)
    tv.per_subject.push_back(l1_distance(pair.control, pair.treatment) / constant);
  tv.median = median(tv.per_subject);
  tv.mean = std::accumulate(tv.per_subject.begin(), tv.per_subject.end(), 0.0) /
            static_cast<double>(tv.per_subject.size());
  tv.max = *std::max_element(tv.per_subject.begin(), tv.per_subject.end());
  return tv;
}

std::map<std::string, PairedAuditSet> partition_by_attribute(const PairedAuditSet& set,
                                                             const std::string& attribute) {
  std::map<std::string, PairedAuditSet> groups;
  std::size_t carriers = 0;
  for (const auto& pair : set.pairs) {
    const auto profile = set.demographics.find(pair.subject_id);
    if (profile == set.demographics.end()) continue;
    const auto value = profile->second.attributes.find(attribute);
    if (value == profile->second.attributes.end()) continue;
    ++carriers;
    auto found = groups.find(value->second);
    if (found == groups.end()) {
      PairedAuditSet group(set.schema);
      group.facet = set.facet;
      group.control_run_id = set.control_run_id;
      group.treatment_run_id = set.treatment_run_id;
      group.control_scored_at = set.control_scored_at;
      group.treatment_scored_at = set.treatment_scored_at;
      found = groups.emplace(value->second, std::move(group)).first;
    }
    found->second.pairs.push_back(pair);
    found->second.demographics[pair.subject_id] = profile->second;
  }
  if (carriers == 0)
    throw AuditError(Errc::UnknownAttribute,
                     "no paired subject carries attribute '" + attribute + "'");
  return groups;
}

bool subgroup_meets_minimum(const SubgroupSpec& spec, std::size_t group_size) {
  return group_size >= std::max<std::size_t>(spec.min_group_size, 3);
}

std::vector<TraitVerdict> subgroup_breakdown(const PairedAuditSet& set, const SubgroupSpec& spec,
                                             const StabilityThresholds& thresholds,
                                             std::vector<std::string>& warnings) {
  validate_thresholds(thresholds);
  if (spec.attribute.empty())
    throw AuditError(Errc::UnknownAttribute, "subgroup attribute must be nonempty");

  std::vector<TraitVerdict> verdicts;
  for (const auto& [value, group] : partition_by_attribute(set, spec.attribute)) {
    const auto label = subgroup_label(spec.attribute, value);
    if (!subgroup_meets_minimum(spec, group.pairs.size())) {
      warnings.push_back("facet '" + set.facet + "': subgroup " + label + " skipped (n=" +
                         std::to_string(group.pairs.size()) + " < " +
                         std::to_string(std::max<std::size_t>(spec.min_group_size, 3)) + ")");
      continue;
    }
    auto group_verdicts = verdicts_for_set(group, label, thresholds);
    verdicts.insert(verdicts.end(), std::make_move_iterator(group_verdicts.begin()),
                    std::make_move_iterator(group_verdicts.end()));
  }
  return verdicts;
}

std::vector<DistributionSummary> distribution_summary(const RunTable& run, double gap_fraction) {
  if (run.size() < 5)
    throw AuditError(Errc::TooFewSamples,
                     "distribution summary needs >= 5 entries, got " + std::to_string(run.size()));
  if (!(gap_fraction > 0.0) || !(gap_fraction <= 1.0))
    throw AuditError(Errc::BadConfig, "gap_fraction must lie in (0, 1]");

  std::vector<DistributionSummary> summaries;
  for (std::size_t t = 0; t < run.schema().trait_count(); ++t) {
    const auto& spec = run.schema().traits()[t];
    std::vector<double> values;
    values.reserve(run.size());
    for (const auto& [id, vector] : run.entries()) values.push_back(vector.values[t]);

    DistributionSummary summary;
    summary.trait = spec.name;
    summary.n = values.size();
    summary.median = median(values);

    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double m2 = 0.0, m3 = 0.0;
    for (double v : values) {
      const double d = v - mean;
      m2 += d * d;
      m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (m2 > 0.0 && values.size() >= 3) {
      // adjusted Fisher-Pearson sample skewness
      const double g1 = m3 / std::pow(m2, 1.5);
      summary.skewness = g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
    }

    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    const double range = spec.max - spec.min;
    const double threshold = gap_fraction * range;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      const double width = values[i + 1] - values[i];
      if (width + 1e-12 * range >= threshold)
        summary.gaps.emplace_back(values[i], values[i + 1]);
    }
    summaries.push_back(std::move(summary));
  }
  return summaries;
}

AuditReport compile_report(AuditReport draft) {
  validate_thresholds(draft.thresholds);
  if (draft.facets.empty())
    throw AuditError(Errc::BadConfig, "an audit with zero facets is a misconfiguration");
  {
    std::set<std::string> unique(draft.facets.begin(), draft.facets.end());
    if (unique.size() != draft.facets.size())
      throw AuditError(Errc::BadConfig, "facet names must be unique");
  }

  auto index_of = [](const std::vector<std::string>& order, const std::string& name) {
    const auto it = std::find(order.begin(), order.end(), name);
    return it == order.end() ? order.size() : static_cast<std::size_t>(it - order.begin());
  };

  // exactly one overall verdict per (facet, trait)
  std::map<std::pair<std::string, std::string>, std::size_t> overall_counts;
  for (const auto& v : draft.verdicts) {
    if (index_of(draft.facets, v.facet) == draft.facets.size())
      throw AuditError(Errc::Internal, "verdict references unknown facet '" + v.facet + "'");
    if (index_of(draft.traits, v.trait) == draft.traits.size())
      throw AuditError(Errc::Internal, "verdict references unknown trait '" + v.trait + "'");
    if (v.subgroup == kOverallSubgroup) ++overall_counts[{v.facet, v.trait}];
  }
  for (const auto& facet : draft.facets) {
    for (const auto& trait : draft.traits) {
      const auto found = overall_counts.find({facet, trait});
      if (found == overall_counts.end() || found->second != 1)
        throw AuditError(Errc::InconsistentFamily,
                         "expected exactly one overall verdict for " + facet + ":" + trait);
    }
  }

  // the overall correction family must cover exactly the overall tests that
  // produced a p-value
  std::size_t overall_tests = 0;
  for (const auto& v : draft.verdicts)
    if (v.subgroup == kOverallSubgroup && v.locational.p_value) ++overall_tests;
  std::size_t ledger_size = 0;
  for (const auto& ledger : draft.corrections) {
    if (ledger.family_label == "overall") ledger_size = ledger.bonferroni.test_count;
    if (ledger.bonferroni.test_count != ledger.members.size() ||
        ledger.benjamini_hochberg.test_count != ledger.members.size())
      throw AuditError(Errc::InconsistentFamily,
                       "correction ledger size mismatch in " + ledger.family_label);
  }
  if (ledger_size != overall_tests)
    throw AuditError(Errc::InconsistentFamily,
                     "overall correction family has " + std::to_string(ledger_size) +
                         " tests, expected " + std::to_string(overall_tests));

  std::stable_sort(draft.verdicts.begin(), draft.verdicts.end(),
                   [&](const TraitVerdict& a, const TraitVerdict& b) {
                     const auto fa = index_of(draft.facets, a.facet);
                     const auto fb = index_of(draft.facets, b.facet);
                     if (fa != fb) return fa < fb;
                     const auto ta = index_of(draft.traits, a.trait);
                     const auto tb = index_of(draft.traits, b.trait);
                     if (ta != tb) return ta < tb;
                     const bool oa = a.subgroup == kOverallSubgroup;
                     const bool ob = b.subgroup == kOverallSubgroup;
                     if (oa != ob) return oa;
                     return a.subgroup < b.subgroup;
                   });
  return draft;
}

AuditReport run_audit_suite(const AuditInputs& inputs) {
  validate_thresholds(inputs.thresholds);
  if (inputs.sets.empty())
    throw AuditError(Errc::BadConfig, "an audit with zero facets is a misconfiguration");
  for (const auto& set : inputs.sets)
    if (!(set.schema == inputs.sets.front().schema))
      throw AuditError(Errc::SchemaMismatch, "all facets must share one schema");

  AuditReport report;
  report.system_name = inputs.system_name;
  report.thresholds = inputs.thresholds;
  for (const auto& trait : inputs.sets.front().schema.traits()) report.traits.push_back(trait.name);
  for (const auto& set : inputs.sets) report.facets.push_back(set.facet);

  // overall verdicts per facet
  for (const auto& set : inputs.sets) {
    auto verdicts = verdicts_for_set(set, kOverallSubgroup, inputs.thresholds);
    report.verdicts.insert(report.verdicts.end(), std::make_move_iterator(verdicts.begin()),
                           std::make_move_iterator(verdicts.end()));
    report.facet_total_variation.emplace(set.facet, total_variation(set));
  }
  {
    std::vector<TraitVerdict*> overall;
    for (auto& v : report.verdicts) overall.push_back(&v);
    if (auto ledger = correct_family("overall", std::move(overall), inputs.thresholds.nominal_alpha))
      report.corrections.push_back(std::move(*ledger));
  }

  // subgroup verdicts; each attribute forms its own correction family across
  // every facet
  for (const auto& spec : inputs.subgroups) {
    const std::size_t first = report.verdicts.size();
    for (const auto& set : inputs.sets) {
      auto verdicts = subgroup_breakdown(set, spec, inputs.thresholds, report.warnings);
      report.verdicts.insert(report.verdicts.end(), std::make_move_iterator(verdicts.begin()),
                             std::make_move_iterator(verdicts.end()));

      for (const auto& [value, group] : partition_by_attribute(set, spec.attribute)) {
        if (!subgroup_meets_minimum(spec, group.pairs.size())) continue;
        report.subgroup_total_variation[set.facet].emplace(
            subgroup_label(spec.attribute, value), total_variation(group));
      }
    }
    std::vector<TraitVerdict*> members;
    for (std::size_t i = first; i < report.verdicts.size(); ++i)
      members.push_back(&report.verdicts[i]);
    if (auto ledger = correct_family("subgroup:" + spec.attribute, std::move(members),
                                     inputs.thresholds.nominal_alpha))
      report.corrections.push_back(std::move(*ledger));
  }

  for (const RunTable* run : inputs.diagnostic_runs) {
    try {
      report.diagnostics.push_back({run->run_id(), distribution_summary(*run, inputs.gap_fraction)});
    } catch (const AuditError& e) {
      if (e.code() != Errc::TooFewSamples) throw;
      report.warnings.push_back("diagnostics skipped for run '" + run->run_id() + "': " + e.what());
    }
  }

  return compile_report(std::move(report));
}

}  // namespace stabaudit
