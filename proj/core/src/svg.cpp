#include "netspread/svg.hpp"

#include <cmath>
#include <cstdio>


#ifndef NETSPREAD_VERSION
#define NETSPREAD_VERSION "0.0.0"
#endif

namespace netspread::svg {

std::string_view generator() { return "netspread " NETSPREAD_VERSION; }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

double PlotFrame::px(double x) const { return left + (x - x_min) / (x_max - x_min) * width; }

double PlotFrame::py(double y) const { return top + height - (y - y_min) / (y_max - y_min) * height; }

std::pair<double, double> padded_range(double lo, double hi, double fraction) {
  if (!(hi > lo)) return {lo - 1.0, hi + 1.0};
  const double pad = (hi - lo) * fraction;
  return {lo - pad, hi + pad};
}

std::vector<double> ticks(double lo, double hi, int target) {
  std::vector<double> out;
  if (!(hi > lo) || target < 1) return out;
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step = (norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0) * mag;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    out.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return out;
}

std::string tick_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Document::Document(double width, double height) : width_(width), height_(height) {}

void Document::raw(std::string_view element) {
  body_ += element;
  body_ += '\n';
}

void Document::rect(double x, double y, double w, double h, std::string_view attrs) {
  raw("<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) + "\" " +
      std::string(attrs) + "/>");
}

void Document::line(double x1, double y1, double x2, double y2, std::string_view attrs) {
  raw("<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) + "\" y2=\"" + fmt(y2) + "\" " +
      std::string(attrs) + "/>");
}

void Document::circle(double cx, double cy, double r, std::string_view attrs) {
  raw("<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + fmt(r) + "\" " + std::string(attrs) + "/>");
}

void Document::polyline(const std::vector<std::pair<double, double>>& points, std::string_view attrs) {
  std::string pts;
  for (const auto& [x, y] : points) {
    if (!pts.empty()) pts.push_back(' ');
    pts += fmt(x) + "," + fmt(y);
  }
  raw("<polyline points=\"" + pts + "\" " + std::string(attrs) + "/>");
}

void Document::text(double x, double y, std::string_view content, std::string_view attrs) {
  raw("<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" " + std::string(attrs) + ">" + escape(content) + "</text>");
}

void Document::open_group(std::string_view attrs) { raw("<g " + std::string(attrs) + ">"); }

void Document::close_group() { raw("</g>"); }

void Document::axes(const PlotFrame& f, std::string_view x_label, std::string_view y_label) {
  open_group("class=\"axes\" stroke=\"#000\" font-family=\"sans-serif\" font-size=\"11\"");
  rect(f.left, f.top, f.width, f.height, "fill=\"none\"");
  for (double t : ticks(f.x_min, f.x_max)) {
    const double x = f.px(t);
    line(x, f.top + f.height, x, f.top + f.height + 5, "");
    text(x, f.top + f.height + 18, tick_label(t), "stroke=\"none\" text-anchor=\"middle\"");
  }
  for (double t : ticks(f.y_min, f.y_max)) {
    const double y = f.py(t);
    line(f.left - 5, y, f.left, y, "");
    text(f.left - 8, y + 4, tick_label(t), "stroke=\"none\" text-anchor=\"end\"");
  }
  text(f.left + f.width / 2, f.top + f.height + 38, x_label, "class=\"x-label\" stroke=\"none\" text-anchor=\"middle\"");
  const double yl_x = f.left - 48;
  const double yl_y = f.top + f.height / 2;
  text(yl_x, yl_y, y_label,
       "class=\"y-label\" stroke=\"none\" text-anchor=\"middle\" transform=\"rotate(-90 " + fmt(yl_x) + " " +
           fmt(yl_y) + ")\"");
  close_group();
}

std::string Document::str() const {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<!-- generator: " + std::string(generator()) + " -->\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width_) + "\" height=\"" + fmt(height_) +
         "\" viewBox=\"0 0 " + fmt(width_) + " " + fmt(height_) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  out += body_;
  out += "</svg>\n";
  return out;
}

}  // namespace netspread::svg
