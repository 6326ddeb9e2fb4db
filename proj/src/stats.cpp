#include "stabaudit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>

#include "stabaudit/errors.hpp"
#include "stabaudit/special_functions.hpp"

namespace stabaudit {

namespace {

// Smallest p we report; keeps p-values inside (0, 1] even when the tail
// underflows.
double clamp_p(double p) {
  if (p > 1.0) return 1.0;
  if (p < 1e-300) return 1e-300;
  return p;
}

void require_finite(std::span<const double> v, const char* label) {
  for (double value : v)
    if (!std::isfinite(value))
      throw AuditError(Errc::OutOfRange, std::string(label) + " contains a non-finite value");
}

void require_equal_lengths(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw AuditError(Errc::LengthMismatch, "samples have lengths " + std::to_string(x.size()) +
                                               " and " + std::to_string(y.size()));
}

bool is_constant(std::span<const double> v) {
  for (double value : v)
    if (value != v[0]) return false;
  return true;
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Pearson correlation of two non-constant samples, two-pass centered form.
double pearson_statistic(std::span<const double> x, std::span<const double> y) {
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

// Two-sided p of a correlation via the t transform; degenerates at |r| = 1.
std::optional<double> correlation_p(double r, std::size_t n) {
  if (n < 3) return std::nullopt;
  const double one_minus_r2 = (1.0 - r) * (1.0 + r);
  if (one_minus_r2 <= 0.0) return clamp_p(0.0);
  const double t = r * std::sqrt(static_cast<double>(n - 2) / one_minus_r2);
  return clamp_p(student_t_two_sided_p(t, static_cast<double>(n - 2)));
}

// Sum of t^3 - t over tie groups of a sorted vector.
double tie_cubes(std::vector<double> sorted) {
  double total = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    total += t * t * t - t;
    i = j;
  }
  return total;
}

TestResult undefined_result(TestKind kind, std::size_t n, std::string note) {
  TestResult r;
  r.kind = kind;
  r.n = n;
  r.method_note = std::move(note);
  return r;
}

struct RankedPool {
  std::vector<double> ranks;           // average ranks of the pooled sample
  std::vector<std::int64_t> ranks2x;   // doubled ranks (exact integers)
  double tie_correction_cubes = 0.0;   // sum of t^3 - t over tie groups
  bool all_tied = false;
};

RankedPool rank_pool(std::span<const double> pooled) {
  RankedPool out;
  out.ranks = average_ranks(pooled);
  out.ranks2x.resize(out.ranks.size());
  for (std::size_t i = 0; i < out.ranks.size(); ++i)
    out.ranks2x[i] = std::llround(out.ranks[i] * 2.0);
  std::vector<double> sorted(pooled.begin(), pooled.end());
  std::sort(sorted.begin(), sorted.end());
  out.tie_correction_cubes = tie_cubes(sorted);
  out.all_tied = !sorted.empty() && sorted.front() == sorted.back();
  return out;
}

std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > cap) return cap + 1;
  }
  return result;
}

constexpr std::size_t kMannWhitneyExactCombinations = 200000;
constexpr std::size_t kKruskalWallisExactTotal = 10;

TestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b);
TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups);
TestResult paired_t(const std::vector<double>& a, const std::vector<double>& b);
TestResult student_t(const std::vector<double>& a, const std::vector<double>& b);
TestResult one_way_anova(const std::vector<std::vector<double>>& groups);

}  // namespace

const char* test_kind_name(TestKind kind) {
  switch (kind) {
    case TestKind::Spearman: return "spearman";
    case TestKind::Pearson: return "pearson";
    case TestKind::KendallTauB: return "kendall_tau_b";
    case TestKind::WilcoxonSignedRank: return "wilcoxon_signed_rank";
    case TestKind::PairedT: return "paired_t";
    case TestKind::StudentT: return "student_t";
    case TestKind::MannWhitneyU: return "mann_whitney_u";
    case TestKind::KruskalWallis: return "kruskal_wallis";
    case TestKind::OneWayAnova: return "one_way_anova";
  }
  return "unknown";
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });

  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    // positions i..j-1 (0-based) share the midrank
    const double midrank = 1.0 + 0.5 * static_cast<double>(i + j - 1);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = midrank;
    i = j;
  }
  return ranks;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw AuditError(Errc::EmptyInput, "quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0))
    throw AuditError(Errc::OutOfRange, "quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

TestResult spearman(std::span<const double> x, std::span<const double> y) {
  require_equal_lengths(x, y);
  if (x.size() < 3)
    throw AuditError(Errc::TooFewSamples, "spearman needs n >= 3, got " + std::to_string(x.size()));
  require_finite(x, "x");
  require_finite(y, "y");

  TestResult result;
  result.kind = TestKind::Spearman;
  result.n = x.size();
  if (is_constant(x) || is_constant(y)) {
    result.method_note = "undefined: constant input vector";
    return result;
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double rho = pearson_statistic(rx, ry);
  result.statistic = rho;
  result.p_value = correlation_p(rho, x.size());
  result.method_note = "average ranks, t approximation for p";
  return result;
}

TestResult pearson(std::span<const double> x, std::span<const double> y) {
  require_equal_lengths(x, y);
  if (x.size() < 3)
    throw AuditError(Errc::TooFewSamples, "pearson needs n >= 3, got " + std::to_string(x.size()));
  require_finite(x, "x");
  require_finite(y, "y");

  TestResult result;
  result.kind = TestKind::Pearson;
  result.n = x.size();
  if (is_constant(x) || is_constant(y)) {
    result.method_note = "undefined: zero variance";
    return result;
  }
  const double r = pearson_statistic(x, y);
  result.statistic = r;
  result.p_value = correlation_p(r, x.size());
  result.method_note = "t approximation for p";
  return result;
}

TestResult kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  require_equal_lengths(x, y);
  if (x.size() < 3)
    throw AuditError(Errc::TooFewSamples,
                     "kendall_tau_b needs n >= 3, got " + std::to_string(x.size()));
  require_finite(x, "x");
  require_finite(y, "y");

  const std::size_t n = x.size();
  TestResult result;
  result.kind = TestKind::KendallTauB;
  result.n = n;

  // Exhaustive pair counting; audit cohorts are small enough that O(n^2)
  // costs nothing and stays obviously correct.
  std::int64_t concordant = 0, discordant = 0, ties_x = 0, ties_y = 0, ties_xy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0)
        ++ties_xy;
      else if (dx == 0.0)
        ++ties_x;
      else if (dy == 0.0)
        ++ties_y;
      else if ((dx > 0.0) == (dy > 0.0))
        ++concordant;
      else
        ++discordant;
    }
  }
  const double n0 = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double n1 = static_cast<double>(ties_x + ties_xy);
  const double n2 = static_cast<double>(ties_y + ties_xy);
  const double denom = (n0 - n1) * (n0 - n2);
  if (denom <= 0.0) {
    result.method_note = "undefined: all pairs tied in one variable";
    return result;
  }
  const double s = static_cast<double>(concordant - discordant);
  result.statistic = std::clamp(s / std::sqrt(denom), -1.0, 1.0);

  // Normal approximation for the significance of S with tie corrections
  // (Kendall & Gibbons). Tie group sizes enter through three moments.
  std::vector<double> xs(x.begin(), x.end()), ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  auto tie_moments = [](const std::vector<double>& sorted, double& m1, double& m2, double& m3) {
    m1 = m2 = m3 = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      m1 += t * (t - 1.0) * (2.0 * t + 5.0);
      m2 += t * (t - 1.0);
      m3 += t * (t - 1.0) * (t - 2.0);
      i = j;
    }
  };
  double xt1, xt2, xt3, yt1, yt2, yt3;
  tie_moments(xs, xt1, xt2, xt3);
  tie_moments(ys, yt1, yt2, yt3);
  const double dn = static_cast<double>(n);
  double var_s = (dn * (dn - 1.0) * (2.0 * dn + 5.0) - xt1 - yt1) / 18.0;
  var_s += xt3 * yt3 / (9.0 * dn * (dn - 1.0) * (dn - 2.0));
  var_s += xt2 * yt2 / (2.0 * dn * (dn - 1.0));
  if (var_s > 0.0) {
    result.p_value = clamp_p(normal_two_sided_p(s / std::sqrt(var_s)));
    result.method_note = "pair counting, normal approximation for p";
  } else {
    result.method_note = "pair counting, p undefined (zero variance)";
  }
  return result;
}

TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
  require_equal_lengths(x, y);
  require_finite(x, "x");
  require_finite(y, "y");

  std::vector<double> abs_diffs;
  std::vector<bool> positive;
  std::size_t zeros_dropped = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d == 0.0) {
      ++zeros_dropped;
      continue;
    }
    abs_diffs.push_back(std::fabs(d));
    positive.push_back(d > 0.0);
  }
  const std::size_t m = abs_diffs.size();
  if (m == 0)
    throw AuditError(Errc::AllZeroDifferences,
                     "all paired differences are zero; input is perfectly locationally stable");

  const auto ranks = average_ranks(abs_diffs);
  // Doubled ranks are exact integers even with midranks.
  std::vector<std::int64_t> ranks2x(m);
  std::int64_t w2_plus = 0;
  for (std::size_t i = 0; i < m; ++i) {
    ranks2x[i] = std::llround(ranks[i] * 2.0);
    if (positive[i]) w2_plus += ranks2x[i];
  }
  const double w_plus = static_cast<double>(w2_plus) / 2.0;

  TestResult result;
  result.kind = TestKind::WilcoxonSignedRank;
  result.n = x.size();
  result.statistic = w_plus;

  if (m <= kWilcoxonExactLimit) {
    // Exact null distribution of the doubled rank sum over all 2^m sign
    // assignments, by subset-sum counting.
    const std::int64_t total2 = static_cast<std::int64_t>(m) * static_cast<std::int64_t>(m + 1);
    std::vector<std::uint64_t> count(static_cast<std::size_t>(total2) + 1, 0);
    count[0] = 1;
    for (std::int64_t r2 : ranks2x)
      for (std::int64_t s = total2; s >= r2; --s) count[s] += count[s - r2];

    double below = 0.0, above = 0.0;
    for (std::int64_t s = 0; s <= total2; ++s) {
      if (s <= w2_plus) below += static_cast<double>(count[s]);
      if (s >= w2_plus) above += static_cast<double>(count[s]);
    }
    const double denom = std::ldexp(1.0, static_cast<int>(m));  // 2^m, exact
    const double p = 2.0 * std::min(below, above) / denom;
    result.p_value = clamp_p(p);
    result.method_note = "exact enumeration (m=" + std::to_string(m) +
                         ", zeros dropped=" + std::to_string(zeros_dropped) + ")";
  } else {
    const double dm = static_cast<double>(m);
    const double mean = dm * (dm + 1.0) / 4.0;
    std::vector<double> sorted_abs = abs_diffs;
    std::sort(sorted_abs.begin(), sorted_abs.end());
    const double variance =
        dm * (dm + 1.0) * (2.0 * dm + 1.0) / 24.0 - tie_cubes(std::move(sorted_abs)) / 48.0;
    if (variance <= 0.0) {
      result.statistic.reset();
      result.method_note = "undefined: zero variance under ties";
      return result;
    }
    const double deviation = w_plus - mean;
    double z = 0.0;
    if (std::fabs(deviation) > 0.5)
      z = (deviation - (deviation > 0.0 ? 0.5 : -0.5)) / std::sqrt(variance);
    result.p_value = clamp_p(normal_two_sided_p(z));
    result.method_note = "normal approximation with tie and continuity corrections (m=" +
                         std::to_string(m) + ", zeros dropped=" + std::to_string(zeros_dropped) +
                         ")";
  }
  return result;
}

namespace {

TestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n1 = a.size(), n2 = b.size(), total = n1 + n2;
  std::vector<double> pooled;
  pooled.reserve(total);
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const RankedPool pool = rank_pool(pooled);

  TestResult result;
  result.kind = TestKind::MannWhitneyU;
  result.n = total;
  if (pool.all_tied) {
    result.method_note = "undefined: all pooled values identical";
    return result;
  }

  std::int64_t r2_group1 = 0;
  for (std::size_t i = 0; i < n1; ++i) r2_group1 += pool.ranks2x[i];
  // Doubled U for exact integer comparisons.
  const std::int64_t u2 = r2_group1 - static_cast<std::int64_t>(n1) * (n1 + 1);
  const double u = static_cast<double>(u2) / 2.0;
  result.statistic = u;

  const std::int64_t center2 = static_cast<std::int64_t>(n1) * static_cast<std::int64_t>(n2);
  const std::int64_t observed_dev = std::llabs(u2 - center2);

  if (binomial_capped(total, n1, kMannWhitneyExactCombinations) <=
      kMannWhitneyExactCombinations) {
    // Enumerate every way to choose which pooled observations form group 1;
    // all are equally likely under the null.
    std::vector<std::size_t> pick(n1);
    std::iota(pick.begin(), pick.end(), 0);
    std::uint64_t extreme = 0, count = 0;
    while (true) {
      std::int64_t r2 = 0;
      for (std::size_t idx : pick) r2 += pool.ranks2x[idx];
      const std::int64_t dev = std::llabs(r2 - static_cast<std::int64_t>(n1) * (n1 + 1) - center2);
      if (dev >= observed_dev) ++extreme;
      ++count;
      // next combination
      std::size_t i = n1;
      while (i > 0 && pick[i - 1] == total - n1 + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < n1; ++j) pick[j] = pick[j - 1] + 1;
    }
    result.p_value = clamp_p(static_cast<double>(extreme) / static_cast<double>(count));
    result.method_note = "exact subset enumeration";
  } else {
    const double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2);
    const double dn = static_cast<double>(total);
    const double tie_term = pool.tie_correction_cubes / (dn * (dn - 1.0));
    const double variance = dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_term);
    if (variance <= 0.0) {
      result.statistic.reset();
      result.method_note = "undefined: zero variance under ties";
      return result;
    }
    const double deviation = u - dn1 * dn2 / 2.0;
    double z = 0.0;
    if (std::fabs(deviation) > 0.5)
      z = (deviation - (deviation > 0.0 ? 0.5 : -0.5)) / std::sqrt(variance);
    result.p_value = clamp_p(normal_two_sided_p(z));
    result.method_note = "normal approximation with tie and continuity corrections";
  }
  return result;
}

// Exact integer key proportional to sum(R_j^2 / n_j), for permutation
// comparisons free of floating-point order effects.
std::int64_t kw_integer_key(const std::vector<std::int64_t>& rank2_sums,
                            const std::vector<std::size_t>& sizes, std::int64_t size_lcm) {
  std::int64_t key = 0;
  for (std::size_t g = 0; g < sizes.size(); ++g)
    key += rank2_sums[g] * rank2_sums[g] * (size_lcm / static_cast<std::int64_t>(sizes[g]));
  return key;
}

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  std::vector<double> pooled;
  std::vector<std::size_t> sizes;
  for (const auto& g : groups) {
    sizes.push_back(g.size());
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  const std::size_t total = pooled.size();
  const RankedPool pool = rank_pool(pooled);

  TestResult result;
  result.kind = TestKind::KruskalWallis;
  result.n = total;
  if (pool.all_tied) {
    result.method_note = "undefined: all pooled values identical";
    return result;
  }

  const double dn = static_cast<double>(total);
  const double tie_factor = 1.0 - pool.tie_correction_cubes / (dn * dn * dn - dn);

  std::vector<std::int64_t> rank2_sums(groups.size(), 0);
  {
    std::size_t offset = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::size_t i = 0; i < sizes[g]; ++i) rank2_sums[g] += pool.ranks2x[offset + i];
      offset += sizes[g];
    }
  }
  auto h_from_rank_sums = [&](const std::vector<std::int64_t>& r2sums) {
    double s = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const double rsum = static_cast<double>(r2sums[g]) / 2.0;
      s += rsum * rsum / static_cast<double>(sizes[g]);
    }
    return (12.0 / (dn * (dn + 1.0)) * s - 3.0 * (dn + 1.0)) / tie_factor;
  };
  result.statistic = h_from_rank_sums(rank2_sums);

  if (total <= kKruskalWallisExactTotal) {
    // Exact permutation null: every assignment of pooled observations to the
    // group sizes is equally likely. Compared on an exact integer key that is
    // monotone in H for fixed sizes and ties.
    std::int64_t size_lcm = 1;
    for (std::size_t s : sizes) size_lcm = std::lcm(size_lcm, static_cast<std::int64_t>(s));
    const std::int64_t observed_key = kw_integer_key(rank2_sums, sizes, size_lcm);

    std::vector<std::size_t> labels;
    for (std::size_t g = 0; g < groups.size(); ++g)
      labels.insert(labels.end(), sizes[g], g);
    std::sort(labels.begin(), labels.end());

    std::uint64_t extreme = 0, count = 0;
    do {
      std::vector<std::int64_t> r2sums(groups.size(), 0);
      for (std::size_t i = 0; i < total; ++i) r2sums[labels[i]] += pool.ranks2x[i];
      if (kw_integer_key(r2sums, sizes, size_lcm) >= observed_key) ++extreme;
      ++count;
    } while (std::next_permutation(labels.begin(), labels.end()));
    result.p_value = clamp_p(static_cast<double>(extreme) / static_cast<double>(count));
    result.method_note = "exact permutation enumeration";
  } else {
    const double dof = static_cast<double>(groups.size()) - 1.0;
    result.p_value = clamp_p(chi_squared_upper_p(*result.statistic, dof));
    result.method_note = "chi-squared approximation";
  }
  return result;
}

TestResult paired_t(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw AuditError(Errc::ShapeMismatch, "paired t requires equal-length groups");
  const std::size_t n = a.size();
  std::vector<double> diffs(n);
  for (std::size_t i = 0; i < n; ++i) diffs[i] = a[i] - b[i];
  const double mean = mean_of(diffs);
  double ss = 0.0;
  for (double d : diffs) ss += (d - mean) * (d - mean);
  const double variance = ss / static_cast<double>(n - 1);

  if (variance == 0.0)
    return undefined_result(TestKind::PairedT, n, "zero variance of differences");

  TestResult result;
  result.kind = TestKind::PairedT;
  result.n = n;
  const double t = mean / std::sqrt(variance / static_cast<double>(n));
  result.statistic = t;
  result.p_value = clamp_p(student_t_two_sided_p(t, static_cast<double>(n - 1)));
  result.method_note = "t distribution, dof=" + std::to_string(n - 1);
  return result;
}

TestResult student_t(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n1 = a.size(), n2 = b.size();
  const double m1 = mean_of(a), m2 = mean_of(b);
  double ss = 0.0;
  for (double v : a) ss += (v - m1) * (v - m1);
  for (double v : b) ss += (v - m2) * (v - m2);
  const double dof = static_cast<double>(n1 + n2 - 2);
  const double pooled_var = ss / dof;
  if (pooled_var == 0.0)
    return undefined_result(TestKind::StudentT, n1 + n2, "zero pooled variance");

  TestResult result;
  result.kind = TestKind::StudentT;
  result.n = n1 + n2;
  const double se = std::sqrt(pooled_var * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
  const double t = (m1 - m2) / se;
  result.statistic = t;
  result.p_value = clamp_p(student_t_two_sided_p(t, dof));
  result.method_note = "pooled-variance two-sample t, dof=" + std::to_string(n1 + n2 - 2);
  return result;
}

TestResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  std::size_t total = 0;
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    total += g.size();
    grand_sum = std::accumulate(g.begin(), g.end(), grand_sum);
  }
  const double grand_mean = grand_sum / static_cast<double>(total);

  double ss_between = 0.0, ss_within = 0.0;
  for (const auto& g : groups) {
    const double gm = mean_of(g);
    ss_between += static_cast<double>(g.size()) * (gm - grand_mean) * (gm - grand_mean);
    for (double v : g) ss_within += (v - gm) * (v - gm);
  }
  const double df_between = static_cast<double>(groups.size()) - 1.0;
  const double df_within = static_cast<double>(total - groups.size());
  if (ss_within == 0.0)
    return undefined_result(TestKind::OneWayAnova, total, "zero within-group variance");

  TestResult result;
  result.kind = TestKind::OneWayAnova;
  result.n = total;
  const double f = (ss_between / df_between) / (ss_within / df_within);
  result.statistic = f;
  result.p_value = clamp_p(f_upper_p(f, df_between, df_within));
  result.method_note = "F distribution, dof=(" + std::to_string(groups.size() - 1) + ", " +
                       std::to_string(total - groups.size()) + ")";
  return result;
}

}  // namespace

TestResult location_test(TestKind kind, const std::vector<std::vector<double>>& groups) {
  const bool two_group = kind == TestKind::PairedT || kind == TestKind::StudentT ||
                         kind == TestKind::MannWhitneyU;
  const bool multi_group = kind == TestKind::KruskalWallis || kind == TestKind::OneWayAnova;
  if (!two_group && !multi_group)
    throw AuditError(Errc::ShapeMismatch,
                     std::string(test_kind_name(kind)) + " is not a location test");
  if (two_group && groups.size() != 2)
    throw AuditError(Errc::ShapeMismatch, std::string(test_kind_name(kind)) +
                                              " requires exactly 2 groups, got " +
                                              std::to_string(groups.size()));
  if (multi_group && groups.size() < 2)
    throw AuditError(Errc::ShapeMismatch,
                     std::string(test_kind_name(kind)) + " requires at least 2 groups");
  for (const auto& g : groups) {
    if (g.size() < 2)
      throw AuditError(Errc::TooFewSamples,
                       std::string(test_kind_name(kind)) + " requires n >= 2 per group");
    require_finite(g, "group");
  }

  switch (kind) {
    case TestKind::PairedT: return paired_t(groups[0], groups[1]);
    case TestKind::StudentT: return student_t(groups[0], groups[1]);
    case TestKind::MannWhitneyU: return mann_whitney_u(groups[0], groups[1]);
    case TestKind::KruskalWallis: return kruskal_wallis(groups);
    case TestKind::OneWayAnova: return one_way_anova(groups);
    default: break;
  }
  throw AuditError(Errc::Internal, "unreachable location_test dispatch");
}

}  // namespace stabaudit
