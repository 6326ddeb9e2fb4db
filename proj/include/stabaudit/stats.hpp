#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stabaudit {

enum class TestKind {
  Spearman,
  Pearson,
  KendallTauB,
  WilcoxonSignedRank,
  PairedT,
  StudentT,
  MannWhitneyU,
  KruskalWallis,
  OneWayAnova,
};

const char* test_kind_name(TestKind kind);

/// Outcome of one statistical test. An undefined result (degenerate input,
/// e.g. a constant vector) keeps statistic and p_value empty rather than
/// leaking NaN into reports.
struct TestResult {
  TestKind kind{};
  std::optional<double> statistic;
  std::optional<double> p_value;  // two-sided (upper tail for F / H)
  std::size_t n = 0;
  std::string method_note;

  bool defined() const { return statistic.has_value(); }
};

/// Average ranks (midranks) of v, 1-based; ties share the mean of the ranks
/// they span.
std::vector<double> average_ranks(std::span<const double> v);

/// Linear-interpolation quantile (R type 7) of a nonempty sample; q in [0,1].
double quantile(std::vector<double> values, double q);

/// Median; the midpoint of the two central order statistics for even n.
double median(std::vector<double> values);

/// Spearman rank correlation: Pearson over average-ranked values. Undefined
/// when either input is constant. Requires n >= 3.
TestResult spearman(std::span<const double> x, std::span<const double> y);

/// Sample Pearson correlation. Undefined on zero variance. Requires n >= 3.
TestResult pearson(std::span<const double> x, std::span<const double> y);

/// Kendall's tau-b with tie correction, from exhaustive pair counting.
/// Requires n >= 3.
TestResult kendall_tau_b(std::span<const double> x, std::span<const double> y);

/// Wilcoxon signed-rank test on paired samples. Zero differences are dropped
/// before ranking (Wilcoxon's convention; the drop count goes in
/// method_note). Exact two-sided p by enumerating all 2^m sign assignments
/// while m <= kWilcoxonExactLimit, else a normal approximation with tie
/// variance and continuity corrections. Throws AllZeroDifferences when no
/// nonzero difference remains: the caller reports "no change", not a p-value.
TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y);

constexpr std::size_t kWilcoxonExactLimit = 25;

/// Location tests over groups of samples. Accepted kinds and shapes:
///   PairedT      : 2 equal-length groups
///   StudentT     : 2 groups (pooled-variance two-sample t)
///   MannWhitneyU : 2 groups; exact p by subset enumeration when feasible
///   KruskalWallis: >= 2 groups; exact p by permutation when total n <= 10
///   OneWayAnova  : >= 2 groups
/// Each group needs n >= 2.
TestResult location_test(TestKind kind, const std::vector<std::vector<double>>& groups);

}  // namespace stabaudit
