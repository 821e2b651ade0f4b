#include "digitwise/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace digitwise::svg {

namespace {

constexpr double kSize = 800.0;
constexpr double kMargin = 60.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string scatter(const std::vector<LabeledPoint>& points, const std::string& title) {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!points.empty()) {
    xmin = xmax = points.front().x;
    ymin = ymax = points.front().y;
    for (const auto& p : points) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-300});
  const double scale = (kSize - 2 * kMargin) / span;
  const double cx = 0.5 * (xmin + xmax);
  const double cy = 0.5 * (ymin + ymax);

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n"
     << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n"
     << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">"
     << escape(title) << "</text>\n";
  for (const auto& p : points) {
    const double sx = kSize / 2 + (p.x - cx) * scale;
    const double sy = kSize / 2 - (p.y - cy) * scale;
    os << "<circle cx=\"" << num(sx) << "\" cy=\"" << num(sy) << "\" r=\"4\" fill=\"steelblue\"><title>"
       << escape(p.label) << "</title></circle>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string bar_chart(const std::vector<std::pair<std::string, double>>& bars, const std::string& title) {
  double top = 0.0;
  for (const auto& [_, v] : bars) {
    top = std::max(top, v);
  }
  const double plot_w = kSize - 2 * kMargin;
  const double plot_h = kSize - 2 * kMargin;
  const double bar_w = bars.empty() ? 0.0 : plot_w / static_cast<double>(bars.size());

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n"
     << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n"
     << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">"
     << escape(title) << "</text>\n";
  for (std::size_t k = 0; k < bars.size(); ++k) {
    const double h = top > 0.0 ? bars[k].second / top * plot_h : 0.0;
    os << "<rect x=\"" << num(kMargin + static_cast<double>(k) * bar_w) << "\" y=\""
       << num(kSize - kMargin - h) << "\" width=\"" << num(std::max(bar_w - 1.0, 1.0)) << "\" height=\""
       << num(h) << "\" fill=\"steelblue\"><title>" << escape(bars[k].first) << ": " << bars[k].second
       << "</title></rect>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace digitwise::svg
