#include "dicke/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "dicke/cli/csv.hpp"

namespace dicke::cli {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 70, kTop = 40, kBottom = 50;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return !(lo <= hi); }
  void pad() {
    if (empty()) {
      lo = 0;
      hi = 1;
    } else if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

double transform(double v, bool log_scale) {
  if (!log_scale) return v;
  return v > 0 ? std::log10(v) : std::numeric_limits<double>::quiet_NaN();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) { return format_double(std::round(v * 100.0) / 100.0); }

}  // namespace

void LineChart::write_svg(std::ostream& out) const {
  Range xr, yl, yr;
  for (const auto& s : series) {
    const bool log_scale = s.right_axis ? right_axis.log_scale : left_axis.log_scale;
    for (double x : s.x) xr.add(x);
    for (double y : s.y) (s.right_axis ? yr : yl).add(transform(y, log_scale));
  }
  xr.pad();
  yl.pad();
  yr.pad();
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y, const Range& r) { return kTop + ph - (y - r.lo) / (r.hi - r.lo) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title) << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  auto ticks = [&](const Range& r, bool log_scale, bool vertical, double pos, const char* anchor) {
    for (int t = 0; t <= 4; ++t) {
      const double v = r.lo + (r.hi - r.lo) * t / 4.0;
      const std::string label = log_scale ? "1e" + format_double(std::round(v * 10) / 10) : format_double(std::round(v * 1000) / 1000);
      if (vertical) {
        out << "<text x=\"" << pos << "\" y=\"" << fmt(py(v, r) + 4) << "\" text-anchor=\"" << anchor
            << "\">" << label << "</text>\n";
      } else {
        out << "<text x=\"" << fmt(px(v)) << "\" y=\"" << pos << "\" text-anchor=\"middle\">" << label
            << "</text>\n";
      }
    }
  };
  ticks(xr, false, false, kTop + ph + 18, "middle");
  ticks(yl, left_axis.log_scale, true, kLeft - 6, "end");
  const bool has_right = std::any_of(series.begin(), series.end(), [](const Series& s) { return s.right_axis; });
  if (has_right) ticks(yr, right_axis.log_scale, true, kLeft + pw + 6, "start");

  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
      << escape(x_axis.label) << "</text>\n";
  out << "<text transform=\"translate(16," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(left_axis.label) << "</text>\n";
  if (has_right) {
    out << "<text transform=\"translate(" << kWidth - 12 << "," << kTop + ph / 2
        << ") rotate(90)\" text-anchor=\"middle\">" << escape(right_axis.label) << "</text>\n";
  }

  double legend_y = kTop + 16;
  for (const auto& s : series) {
    const Range& r = s.right_axis ? yr : yl;
    const bool log_scale = s.right_axis ? right_axis.log_scale : left_axis.log_scale;
    out << "<path fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (s.dashed) out << " stroke-dasharray=\"4 3\"";
    out << " d=\"";
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const double y = transform(s.y[i], log_scale);
      if (!std::isfinite(y) || !std::isfinite(s.x[i])) {
        pen_down = false;
        continue;
      }
      out << (pen_down ? " L" : " M") << fmt(px(s.x[i])) << ' ' << fmt(py(y, r));
      pen_down = true;
    }
    out << "\"/>\n";
    out << "<text x=\"" << kLeft + 10 << "\" y=\"" << legend_y << "\" fill=\"" << s.color << "\">"
        << escape(s.label) << "</text>\n";
    legend_y += 16;
  }
  out << "</svg>\n";
}

}  // namespace dicke::cli
