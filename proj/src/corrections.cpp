#include "stabaudit/corrections.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stabaudit/errors.hpp"

namespace stabaudit {

namespace {

void check_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0 || alpha >= 1.0)
    throw AuditError(Errc::InvalidAlpha, "alpha must lie in (0, 1), got " + std::to_string(alpha));
}

void check_p_values(const std::vector<double>& p_values) {
  if (p_values.empty()) throw AuditError(Errc::ZeroTests, "empty p-value family");
  for (double p : p_values)
    if (!std::isfinite(p) || p < 0.0 || p > 1.0)
      throw AuditError(Errc::InvalidPValue, "p-value outside [0, 1]: " + std::to_string(p));
}

}  // namespace

const char* correction_method_name(CorrectionMethod method) {
  switch (method) {
    case CorrectionMethod::Bonferroni: return "bonferroni";
    case CorrectionMethod::BenjaminiHochberg: return "benjamini_hochberg";
  }
  return "unknown";
}

std::size_t CorrectionResult::rejections() const {
  std::size_t count = 0;
  for (const auto& entry : per_test) count += entry.reject ? 1 : 0;
  return count;
}

double bonferroni_threshold(double nominal_alpha, std::size_t test_count) {
  check_alpha(nominal_alpha);
  if (test_count == 0) throw AuditError(Errc::ZeroTests, "test count must be positive");
  return nominal_alpha / static_cast<double>(test_count);
}

CorrectionResult bonferroni_correction(const std::vector<double>& p_values, double nominal_alpha) {
  check_alpha(nominal_alpha);
  check_p_values(p_values);

  CorrectionResult result;
  result.method = CorrectionMethod::Bonferroni;
  result.nominal_alpha = nominal_alpha;
  result.test_count = p_values.size();
  result.operative_alpha = bonferroni_threshold(nominal_alpha, p_values.size());

  std::vector<std::size_t> order(p_values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

  result.per_test.resize(p_values.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto& entry = result.per_test[order[k]];
    entry.p_value = p_values[order[k]];
    entry.rank = k + 1;
    entry.threshold = result.operative_alpha;
    entry.reject = entry.p_value <= result.operative_alpha;
  }
  return result;
}

CorrectionResult benjamini_hochberg(const std::vector<double>& p_values, double nominal_alpha) {
  check_alpha(nominal_alpha);
  check_p_values(p_values);

  CorrectionResult result;
  result.method = CorrectionMethod::BenjaminiHochberg;
  result.nominal_alpha = nominal_alpha;
  result.test_count = p_values.size();

  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

  // Step-up: largest k with p_(k) <= (k/m) * alpha. Ties can never straddle
  // the boundary because equal p-values face increasing thresholds.
  std::size_t k_star = 0;
  for (std::size_t k = m; k >= 1; --k) {
    const double threshold = static_cast<double>(k) / static_cast<double>(m) * nominal_alpha;
    if (p_values[order[k - 1]] <= threshold) {
      k_star = k;
      break;
    }
  }
  result.operative_alpha =
      k_star == 0 ? 0.0 : static_cast<double>(k_star) / static_cast<double>(m) * nominal_alpha;

  result.per_test.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    auto& entry = result.per_test[order[k]];
    entry.p_value = p_values[order[k]];
    entry.rank = k + 1;
    entry.threshold = static_cast<double>(k + 1) / static_cast<double>(m) * nominal_alpha;
    entry.reject = (k + 1) <= k_star;
  }
  return result;
}

}  // namespace stabaudit
