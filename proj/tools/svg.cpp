#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dirlab::app {

namespace {

constexpr double kWidth = 480.0;
constexpr double kHeight = 360.0;
constexpr double kMargin = 56.0;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

void draw_panel(std::ostringstream& o, const Panel& p, double x0) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& l : p.lines) {
    for (auto [x, y] : l.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  const double w = kWidth - 2 * kMargin, h = kHeight - 2 * kMargin;
  auto X = [&](double x) { return x0 + kMargin + (x - xmin) / (xmax - xmin) * w; };
  auto Y = [&](double y) { return kMargin + (ymax - y) / (ymax - ymin) * h; };

  o << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<text x=\"" << num(x0 + kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"13\">"
    << escape(p.title) << "</text>\n";
  o << "<rect x=\"" << num(x0 + kMargin) << "\" y=\"" << num(kMargin) << "\" width=\"" << num(w) << "\" height=\""
    << num(h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    o << "<text x=\"" << num(X(xv)) << "\" y=\"" << num(kMargin + h + 14) << "\" text-anchor=\"middle\">" << tick(xv)
      << "</text>\n";
    o << "<text x=\"" << num(x0 + kMargin - 4) << "\" y=\"" << num(Y(yv) + 4) << "\" text-anchor=\"end\">"
      << tick(yv) << "</text>\n";
  }
  o << "<text x=\"" << num(x0 + kWidth / 2) << "\" y=\"" << num(kHeight - 12) << "\" text-anchor=\"middle\">"
    << escape(p.x_label) << "</text>\n";
  o << "<text x=\"" << num(x0 + 14) << "\" y=\"" << num(kHeight / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 "
    << num(x0 + 14) << " " << num(kHeight / 2) << ")\">" << escape(p.y_label) << "</text>\n";

  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const auto& l = p.lines[i];
    const char* color = kColors[i % std::size(kColors)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
    if (l.dashed) o << " stroke-dasharray=\"5,4\"";
    o << " points=\"";
    for (auto [x, y] : l.points) o << num(X(x)) << "," << num(Y(y)) << " ";
    o << "\"/>\n";
    for (auto [x, y] : l.points) {
      if (!l.dashed) o << "<circle cx=\"" << num(X(x)) << "\" cy=\"" << num(Y(y)) << "\" r=\"2.2\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kMargin + 14 + 14 * static_cast<double>(i);
    o << "<line x1=\"" << num(x0 + kMargin + w - 110) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
      << num(x0 + kMargin + w - 90) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\"/>\n";
    o << "<text x=\"" << num(x0 + kMargin + w - 86) << "\" y=\"" << num(ly) << "\">" << escape(l.label) << "</text>\n";
  }
  o << "</g>\n";
}

}  // namespace

std::string render_svg(const std::vector<Panel>& panels) {
  std::ostringstream o;
  const double total = kWidth * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(total) << "\" height=\"" << num(kHeight)
    << "\" viewBox=\"0 0 " << num(total) << " " << num(kHeight) << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) draw_panel(o, panels[i], kWidth * static_cast<double>(i));
  o << "</svg>\n";
  return o.str();
}

}  // namespace dirlab::app
