#pragma once

#include <string>
#include <vector>

namespace stabaudit {

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Control-vs-treatment scatter with the ideal Y = X reference line. Both
/// axes span [axis_min, axis_max]. Output bytes are a pure function of the
/// arguments. Throws EmptyInput on no points.
std::string render_scatter(const std::string& title, const std::string& x_label,
                           const std::string& y_label, double axis_min, double axis_max,
                           const std::vector<ScatterPoint>& points);

struct BoxGroup {
  std::string label;
  std::vector<double> samples;
  bool skipped = false;  // annotated instead of drawn (e.g. below min group size)
  std::string note;
};

/// Box-and-whisker chart: median, quartiles (linear-interpolation), whiskers
/// to the furthest sample within 1.5 IQR of the box, outliers as markers.
/// Deterministic bytes. Throws EmptyInput when no drawable group has samples.
std::string render_box(const std::string& title, const std::string& y_label,
                       const std::vector<BoxGroup>& groups);

}  // namespace stabaudit
