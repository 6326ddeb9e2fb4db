#pragma once

#include <cstddef>
#include <vector>

namespace stabaudit {

enum class CorrectionMethod { Bonferroni, BenjaminiHochberg };

const char* correction_method_name(CorrectionMethod method);

/// Per-hypothesis correction outcome, reported in original input order.
struct CorrectionEntry {
  double p_value = 1.0;
  std::size_t rank = 0;  // 1-based ascending-p rank
  double threshold = 0.0;
  bool reject = false;
};

struct CorrectionResult {
  CorrectionMethod method{};
  double nominal_alpha = 0.0;
  std::size_t test_count = 0;
  std::vector<CorrectionEntry> per_test;
  /// Operative cutoff: alpha/m for Bonferroni; the step-up boundary
  /// (k*/m)*alpha for Benjamini-Hochberg, 0 when nothing is rejected.
  double operative_alpha = 0.0;

  std::size_t rejections() const;
};

/// alpha / m. Throws InvalidAlpha unless 0 < alpha < 1, ZeroTests when m == 0.
double bonferroni_threshold(double nominal_alpha, std::size_t test_count);

/// Bonferroni over a family: every hypothesis is compared to alpha / m.
CorrectionResult bonferroni_correction(const std::vector<double>& p_values, double nominal_alpha);

/// Benjamini-Hochberg step-up: rank p ascending, find the largest k with
/// p_(k) <= (k/m)*alpha, reject ranks 1..k. Tied p-values always share the
/// decision.
CorrectionResult benjamini_hochberg(const std::vector<double>& p_values, double nominal_alpha);

}  // namespace stabaudit
