#include "stabaudit/svg_plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "stabaudit/errors.hpp"
#include "stabaudit/stats.hpp"

namespace stabaudit {

namespace {

// Fixed two-decimal pixel coordinates keep the output byte-stable.
std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string value_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr double kWidth = 480.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 56.0;

struct Frame {
  double x0, y0, x1, y1;  // plot area in pixels (y grows down)
};

void open_svg(std::ostringstream& out, double width, double height, const std::string& title) {
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << px(width) << "' height='"
      << px(height) << "' viewBox='0 0 " << px(width) << " " << px(height) << "'>\n";
  out << "<rect x='0' y='0' width='" << px(width) << "' height='" << px(height)
      << "' fill='white'/>\n";
  out << "<text x='" << px(width / 2.0)
      << "' y='24' text-anchor='middle' font-family='monospace' font-size='14'>"
      << xml_escape(title) << "</text>\n";
}

void draw_frame(std::ostringstream& out, const Frame& f) {
  out << "<rect x='" << px(f.x0) << "' y='" << px(f.y0) << "' width='" << px(f.x1 - f.x0)
      << "' height='" << px(f.y1 - f.y0) << "' fill='none' stroke='black' stroke-width='1'/>\n";
}

void y_axis_ticks(std::ostringstream& out, const Frame& f, double v_min, double v_max,
                  const std::string& label) {
  for (int i = 0; i <= 4; ++i) {
    const double v = v_min + (v_max - v_min) * i / 4.0;
    const double y = f.y1 - (f.y1 - f.y0) * i / 4.0;
    out << "<line x1='" << px(f.x0 - 4) << "' y1='" << px(y) << "' x2='" << px(f.x0) << "' y2='"
        << px(y) << "' stroke='black' stroke-width='1'/>\n";
    out << "<text x='" << px(f.x0 - 8) << "' y='" << px(y + 4)
        << "' text-anchor='end' font-family='monospace' font-size='10'>" << value_label(v)
        << "</text>\n";
  }
  out << "<text x='14' y='" << px((f.y0 + f.y1) / 2.0)
      << "' text-anchor='middle' font-family='monospace' font-size='11' transform='rotate(-90 14 "
      << px((f.y0 + f.y1) / 2.0) << ")'>" << xml_escape(label) << "</text>\n";
}

}  // namespace

std::string render_scatter(const std::string& title, const std::string& x_label,
                           const std::string& y_label, double axis_min, double axis_max,
                           const std::vector<ScatterPoint>& points) {
  if (points.empty()) throw AuditError(Errc::EmptyInput, "scatter plot of zero points");
  if (!(axis_min < axis_max))
    throw AuditError(Errc::BadConfig, "scatter axis range must be nonempty");

  const Frame f{kMarginLeft, kMarginTop, kWidth - kMarginRight, kHeight - kMarginBottom};
  const double span = axis_max - axis_min;
  auto X = [&](double v) { return f.x0 + (v - axis_min) / span * (f.x1 - f.x0); };
  auto Y = [&](double v) { return f.y1 - (v - axis_min) / span * (f.y1 - f.y0); };

  std::ostringstream out;
  open_svg(out, kWidth, kHeight, title);
  draw_frame(out, f);
  y_axis_ticks(out, f, axis_min, axis_max, y_label);
  for (int i = 0; i <= 4; ++i) {
    const double v = axis_min + span * i / 4.0;
    const double x = X(v);
    out << "<line x1='" << px(x) << "' y1='" << px(f.y1) << "' x2='" << px(x) << "' y2='"
        << px(f.y1 + 4) << "' stroke='black' stroke-width='1'/>\n";
    out << "<text x='" << px(x) << "' y='" << px(f.y1 + 18)
        << "' text-anchor='middle' font-family='monospace' font-size='10'>" << value_label(v)
        << "</text>\n";
  }
  out << "<text x='" << px((f.x0 + f.x1) / 2.0) << "' y='" << px(kHeight - 16)
      << "' text-anchor='middle' font-family='monospace' font-size='11'>" << xml_escape(x_label)
      << "</text>\n";

  // ideal Y = X line: no variation between control and treatment
  out << "<line x1='" << px(X(axis_min)) << "' y1='" << px(Y(axis_min)) << "' x2='"
      << px(X(axis_max)) << "' y2='" << px(Y(axis_max))
      << "' stroke='#888888' stroke-width='1' stroke-dasharray='5,3'/>\n";

  for (const auto& p : points) {
    out << "<circle cx='" << px(X(p.x)) << "' cy='" << px(Y(p.y))
        << "' r='3' fill='#1f5fa8' fill-opacity='0.55'/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_box(const std::string& title, const std::string& y_label,
                       const std::vector<BoxGroup>& groups) {
  bool any_drawable = false;
  double v_max = 0.0;
  for (const auto& g : groups) {
    if (g.skipped) continue;
    if (g.samples.empty())
      throw AuditError(Errc::EmptyInput, "box group '" + g.label + "' has no samples");
    any_drawable = true;
    v_max = std::max(v_max, *std::max_element(g.samples.begin(), g.samples.end()));
  }
  if (!any_drawable) throw AuditError(Errc::EmptyInput, "box plot with no drawable group");

  const double width = std::max(kWidth, 120.0 * groups.size() + kMarginLeft + kMarginRight);
  const Frame f{kMarginLeft, kMarginTop, width - kMarginRight, kHeight - kMarginBottom};
  const double v_min = 0.0;
  const double v_top = v_max > 0.0 ? v_max * 1.08 : 0.01;
  auto Y = [&](double v) { return f.y1 - (v - v_min) / (v_top - v_min) * (f.y1 - f.y0); };

  std::ostringstream out;
  open_svg(out, width, kHeight, title);
  draw_frame(out, f);
  y_axis_ticks(out, f, v_min, v_top, y_label);

  const double slot = (f.x1 - f.x0) / static_cast<double>(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    const double cx = f.x0 + slot * (static_cast<double>(i) + 0.5);
    out << "<text x='" << px(cx) << "' y='" << px(f.y1 + 18)
        << "' text-anchor='middle' font-family='monospace' font-size='10'>"
        << xml_escape(g.label) << "</text>\n";
    if (g.skipped) {
      out << "<text x='" << px(cx) << "' y='" << px((f.y0 + f.y1) / 2.0)
          << "' text-anchor='middle' font-family='monospace' font-size='10' fill='#aa3333'>"
          << xml_escape(g.note.empty() ? std::string("skipped") : g.note) << "</text>\n";
      continue;
    }

    const double q1 = quantile(g.samples, 0.25);
    const double q2 = quantile(g.samples, 0.50);
    const double q3 = quantile(g.samples, 0.75);
    const double iqr = q3 - q1;
    const double lo_fence = q1 - 1.5 * iqr;
    const double hi_fence = q3 + 1.5 * iqr;
    double whisker_lo = q1, whisker_hi = q3;
    for (double s : g.samples) {
      if (s >= lo_fence) whisker_lo = std::min(whisker_lo, s);
      if (s <= hi_fence) whisker_hi = std::max(whisker_hi, s);
    }

    const double half = slot * 0.22;
    // whiskers
    out << "<line x1='" << px(cx) << "' y1='" << px(Y(whisker_lo)) << "' x2='" << px(cx)
        << "' y2='" << px(Y(q1)) << "' stroke='black' stroke-width='1'/>\n";
    out << "<line x1='" << px(cx) << "' y1='" << px(Y(q3)) << "' x2='" << px(cx) << "' y2='"
        << px(Y(whisker_hi)) << "' stroke='black' stroke-width='1'/>\n";
    out << "<line x1='" << px(cx - half * 0.6) << "' y1='" << px(Y(whisker_lo)) << "' x2='"
        << px(cx + half * 0.6) << "' y2='" << px(Y(whisker_lo))
        << "' stroke='black' stroke-width='1'/>\n";
    out << "<line x1='" << px(cx - half * 0.6) << "' y1='" << px(Y(whisker_hi)) << "' x2='"
        << px(cx + half * 0.6) << "' y2='" << px(Y(whisker_hi))
        << "' stroke='black' stroke-width='1'/>\n";
    // box and median
    out << "<rect x='" << px(cx - half) << "' y='" << px(Y(q3)) << "' width='" << px(2 * half)
        << "' height='" << px(Y(q1) - Y(q3))
        << "' fill='#9ecbe8' fill-opacity='0.7' stroke='black' stroke-width='1'/>\n";
    out << "<line x1='" << px(cx - half) << "' y1='" << px(Y(q2)) << "' x2='" << px(cx + half)
        << "' y2='" << px(Y(q2)) << "' stroke='black' stroke-width='2'/>\n";
    // outliers
    for (double s : g.samples) {
      if (s < lo_fence || s > hi_fence)
        out << "<circle cx='" << px(cx) << "' cy='" << px(Y(s))
            << "' r='2.5' fill='none' stroke='#aa3333' stroke-width='1'/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace stabaudit
